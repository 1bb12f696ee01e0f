"""Finite measure spaces and bounded measurable maps between them.

The sigma-field of a :class:`FiniteMeasureSpace` is always the power set, so
a measure is determined by its point masses and every map is measurable.

>>> s = FiniteMeasureSpace.from_weights([1.0, 1.0])
>>> map_norm(identity_map(s, s.scaled(2.0)))
0.5
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from qcm.errors import SpaceMismatch, TooLarge, UnboundedMap, UnknownPoint, ZeroMass
from qcm.linalg import UNBOUNDED

BRUTEFORCE_LIMIT = 20


@dataclass(frozen=True)
class FiniteMeasureSpace:
    points: tuple
    weights: np.ndarray = field(compare=False)

    def __post_init__(self):
        pts = tuple(self.points)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        if w.shape[0] != len(pts):
            raise ValueError(f"{len(pts)} points but {w.shape[0]} weights")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pts)})

    @classmethod
    def from_weights(cls, weights: Sequence[float], labels: Sequence[Hashable] | None = None):
        if labels is None:
            labels = list(range(1, len(weights) + 1))
        return cls(tuple(labels), np.asarray(weights, dtype=float))

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, FiniteMeasureSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.points, self.weights.tobytes()))

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def is_probability(self, tol: float = 1e-12) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def index(self, point) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoint(f"{point!r} is not a point of the space") from None

    def weight(self, point) -> float:
        return float(self.weights[self.index(point)])

    def measure(self, subset: Iterable) -> float:
        return float(sum(self.weights[self.index(p)] for p in set(subset)))

    def scaled(self, factor: float) -> "FiniteMeasureSpace":
        return FiniteMeasureSpace(self.points, self.weights * factor)


@dataclass(frozen=True)
class MeasurableMap:
    source: FiniteMeasureSpace
    target: FiniteMeasureSpace
    mapping: Mapping

    def __post_init__(self):
        m = dict(self.mapping)
        for p in self.source.points:
            if p not in m:
                raise UnknownPoint(f"source point {p!r} has no image")
            self.target.index(m[p])
        extra = set(m) - set(self.source.points)
        if extra:
            raise UnknownPoint(f"mapping has points outside the source: {sorted(map(repr, extra))}")
        object.__setattr__(self, "mapping", m)

    def __call__(self, point):
        return self.mapping[point]

    def preimage(self, subset: Iterable) -> list:
        s = set(subset)
        return [p for p in self.source.points if self.mapping[p] in s]

    def fiber_masses(self) -> np.ndarray:
        """``mu(f^-1({y}))`` for every target point ``y``, in target order."""
        out = np.zeros(len(self.target))
        for p, w in zip(self.source.points, self.source.weights):
            out[self.target.index(self.mapping[p])] += w
        return out


def identity_map(source: FiniteMeasureSpace, target: FiniteMeasureSpace | None = None) -> MeasurableMap:
    """Identity on points; ``target`` may carry a different measure on the same points."""
    target = source if target is None else target
    if source.points != target.points:
        raise SpaceMismatch("identity map needs identical point sets")
    return MeasurableMap(source, target, {p: p for p in source.points})


def _ratio_sup(pairs: Iterable[tuple[Fraction, Fraction]]) -> float:
    # exact rational comparison, so every route to the same supremum rounds once
    best = Fraction(0)
    for a, b in pairs:
        if b > 0:
            best = max(best, a / b)
        elif a > 0:
            return UNBOUNDED
    return float(best)


def _exact_fibers(f: "MeasurableMap") -> dict:
    out = {y: Fraction(0) for y in f.target.points}
    for p, w in zip(f.source.points, f.source.weights):
        out[f.mapping[p]] += Fraction(float(w))
    return out


def map_norm(f: MeasurableMap) -> float:
    """Norm of ``f``: the least ``M`` with ``mu(f^-1(A)) <= M mu'(A)`` for all ``A``.

    By additivity the supremum over subsets is attained on singletons, so
    this is the largest fiber-mass to point-mass ratio.  0/0 ratios are
    skipped and an empty supremum is 0.  Returns ``UNBOUNDED`` when some
    null target point has a fiber of positive mass.
    """
    fib = _exact_fibers(f)
    return _ratio_sup((fib[y], Fraction(float(w))) for y, w in zip(f.target.points, f.target.weights))


def map_norm_bruteforce(f: MeasurableMap) -> float:
    """Literal supremum over every subset of the target; exponential, used as an oracle."""
    n = len(f.target)
    if n > BRUTEFORCE_LIMIT:
        raise TooLarge(f"target has {n} points; enumeration limit is {BRUTEFORCE_LIMIT}")
    src = [(f.mapping[p], Fraction(float(w))) for p, w in zip(f.source.points, f.source.weights)]
    tgt = [(y, Fraction(float(w))) for y, w in zip(f.target.points, f.target.weights)]

    def pairs():
        for r in range(1, n + 1):
            for subset in itertools.combinations(tgt, r):
                chosen = {y for y, _ in subset}
                yield sum(w for q, w in src if q in chosen), sum(w for _, w in subset)

    return _ratio_sup(pairs())


def is_measure_preserving(f: MeasurableMap, tol: float = 1e-12) -> bool:
    return bool(np.all(np.abs(f.fiber_masses() - f.target.weights) <= tol))


def conditional_space(s: FiniteMeasureSpace, subset: Iterable) -> tuple[FiniteMeasureSpace, MeasurableMap]:
    """Restrict ``s`` to ``subset``; returns the restricted space and its inclusion."""
    wanted = set(subset)
    for p in wanted:
        s.index(p)
    pts = tuple(p for p in s.points if p in wanted)
    sub = FiniteMeasureSpace(pts, np.array([s.weight(p) for p in pts]))
    return sub, MeasurableMap(sub, s, {p: p for p in pts})


def normalize_space(s: FiniteMeasureSpace) -> FiniteMeasureSpace:
    total = s.total_mass
    if total <= 0:
        raise ZeroMass("cannot normalise a space of total mass 0")
    return FiniteMeasureSpace(s.points, s.weights / total)


def normalize_map(f: MeasurableMap) -> MeasurableMap:
    """The same point map between the normalised spaces."""
    return MeasurableMap(normalize_space(f.source), normalize_space(f.target), f.mapping)


def compose(g: MeasurableMap, f: MeasurableMap) -> MeasurableMap:
    """``g ∘ f``."""
    if f.target != g.source:
        raise SpaceMismatch("target of f is not the source of g")
    return MeasurableMap(f.source, g.target, {p: g(f(p)) for p in f.source.points})


def normalization_norm_check(f: MeasurableMap) -> tuple[float, float]:
    """Norm of ``f`` between the normalised spaces, and ``(total'/total)·|f|``."""
    if f.source.total_mass <= 0 or f.target.total_mass <= 0:
        raise ZeroMass("both spaces need positive total mass")
    norm = map_norm(f)
    if math.isinf(norm):
        raise UnboundedMap("normalisation formula needs a bounded map")
    lhs = map_norm(normalize_map(f))
    rhs = f.target.total_mass / f.source.total_mass * norm
    return lhs, rhs


def is_bounded(f: MeasurableMap) -> bool:
    return not math.isinf(map_norm(f))
