"""Finite-dimensional unital *-algebras given by structure constants.

An algebra of dimension ``d`` is stored as

* ``structure[i, j, k]``: ``b_i b_j = sum_k structure[i, j, k] b_k``
* ``unit``: coordinates of the unit ``e``
* ``star``: a ``d x d`` matrix ``S`` with ``star(x) = S @ conj(x)``
* optionally ``rep``: matrices ``rho(b_i)`` of a faithful *-representation

Elements are coordinate vectors; :class:`AlgebraElement` wraps one together
with its algebra for the operator-overloaded interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qcm.errors import AlgebraMismatch, DimensionMismatch, ImproperIdeal, NotStarClosed
from qcm.linalg import DEFAULT_TOL, Frame, complement, orthonormalize, split

INVARIANT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    structure: np.ndarray
    unit: np.ndarray
    star_matrix: np.ndarray
    labels: tuple = ()
    rep: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=complex)
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise DimensionMismatch(f"structure constants must be d x d x d, got {c.shape}")
        unit = np.asarray(self.unit, dtype=complex).reshape(d)
        s = np.asarray(self.star_matrix, dtype=complex).reshape(d, d)
        labels = tuple(self.labels) if self.labels else tuple(f"b{i}" for i in range(d))
        if len(labels) != d:
            raise DimensionMismatch("one label per basis element")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "star_matrix", s)
        object.__setattr__(self, "labels", labels)
        if self.rep is not None:
            r = np.asarray(self.rep, dtype=complex)
            if r.ndim != 3 or r.shape[0] != d or r.shape[1] != r.shape[2]:
                raise DimensionMismatch(f"rep must be d x n x n, got {r.shape}")
            object.__setattr__(self, "rep", r)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def rep_dim(self) -> int | None:
        return None if self.rep is None else self.rep.shape[1]

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return v

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, coords)

    # -- coordinate-level operations -------------------------------------
    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def star(self, x) -> np.ndarray:
        return self.star_matrix @ np.conj(x)

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x y`` on coordinates."""
        return np.einsum("i,ijk->kj", x, self.structure)

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> y x`` on coordinates."""
        return np.einsum("j,ijk->ki", x, self.structure)

    def represent(self, x) -> np.ndarray:
        if self.rep is None:
            raise AttributeError("algebra has no concrete representation")
        return np.einsum("i,imn->mn", x, self.rep)

    def coords_of_matrix(self, m) -> np.ndarray:
        """Coordinates of a represented matrix, by least squares on the representation."""
        if self.rep is None:
            raise AttributeError("algebra has no concrete representation")
        a = self.rep.reshape(self.dim, -1).T
        sol, *_ = np.linalg.lstsq(a, np.asarray(m, dtype=complex).reshape(-1), rcond=None)
        return sol

    def is_commutative(self, tol: float = INVARIANT_TOL) -> bool:
        c = self.structure
        return bool(np.max(np.abs(c - c.transpose(1, 0, 2)), initial=0.0) <= tol)

    # -- invariant checks ------------------------------------------------
    def invariant_residuals(self) -> dict[str, float]:
        c = self.structure
        d = self.dim
        eye = np.eye(d)
        # (b_i b_j) b_k vs b_i (b_j b_k)
        left = np.einsum("ijm,mkn->ijkn", c, c)
        right = np.einsum("jkm,imn->ijkn", c, c)
        res = {"associativity": float(np.max(np.abs(left - right), initial=0.0))}
        le = np.einsum("i,ijk->jk", self.unit, c)
        re = np.einsum("j,ijk->ik", self.unit, c)
        res["unit"] = float(max(np.max(np.abs(le - eye)), np.max(np.abs(re - eye))))
        s = self.star_matrix
        res["involution"] = float(np.max(np.abs(s @ np.conj(s) - eye)))
        # star(b_i b_j) = star(b_j) star(b_i)
        lhs = np.einsum("ijk,mk->ijm", np.conj(c), s)
        rhs = np.einsum("aj,bi,abm->ijm", s, s, c)
        res["anti_multiplicative"] = float(np.max(np.abs(lhs - rhs)))
        if self.rep is not None:
            prod = np.einsum("iab,jbc->ijac", self.rep, self.rep)
            via = np.einsum("ijk,kac->ijac", c, self.rep)
            res["rep_multiplicative"] = float(np.max(np.abs(prod - via)))
            stars = np.einsum("ji,jab->iab", s, self.rep)
            res["rep_star"] = float(np.max(np.abs(stars - np.conj(self.rep.transpose(0, 2, 1)))))
            res["rep_unit"] = float(np.max(np.abs(self.represent(self.unit) - np.eye(self.rep.shape[1]))))
            flat = self.rep.reshape(d, -1)
            rank = np.linalg.matrix_rank(flat, tol=1e-8) if d else 0
            res["rep_faithful"] = float(d - rank)
        return res

    def check(self, tol: float = INVARIANT_TOL) -> None:
        bad = {k: v for k, v in self.invariant_residuals().items() if v > tol}
        if bad:
            raise ValueError(f"algebra invariants violated: {bad}")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: StarAlgebra
    coords: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=complex).reshape(-1)
        if v.shape[0] != self.algebra.dim:
            raise DimensionMismatch(f"element has {v.shape[0]} coordinates, algebra dim {self.algebra.dim}")
        object.__setattr__(self, "coords", v)

    def _same(self, other: "AlgebraElement") -> None:
        if not same_algebra(other.algebra, self.algebra):
            raise AlgebraMismatch("elements belong to different algebras")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.algebra, self.coords * other)

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, scalar * self.coords)

    def __add__(self, other: "AlgebraElement"):
        self._same(other)
        return AlgebraElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "AlgebraElement"):
        self._same(other)
        return AlgebraElement(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coords)

    def star(self) -> "AlgebraElement":
        return star(self)

    def allclose(self, other: "AlgebraElement", tol: float = INVARIANT_TOL) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.coords - other.coords), initial=0.0) <= tol)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._same(y)
    return AlgebraElement(x.algebra, x.algebra.mul(x.coords, y.coords))


def star(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.algebra, x.algebra.star(x.coords))


def unit(a: StarAlgebra) -> AlgebraElement:
    return AlgebraElement(a, a.unit)


# -- constructors ---------------------------------------------------------

def function_algebra(n: int) -> StarAlgebra:
    """All functions on ``n`` points, with the point indicators as basis."""
    if n < 1:
        raise ValueError("n must be at least 1")
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        c[i, i, i] = 1.0
    rep = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        rep[i, i, i] = 1.0
    return StarAlgebra(c, np.ones(n), np.eye(n), tuple(f"d{i + 1}" for i in range(n)), rep, f"C^{n}")


def matrix_algebra(n: int) -> StarAlgebra:
    """``M_n(C)`` with matrix units ``E_ij`` (index ``i*n + j``) as basis."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = n * n
    c = np.zeros((d, d, d), dtype=complex)
    s = np.zeros((d, d), dtype=complex)
    rep = np.zeros((d, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            rep[i * n + j, i, j] = 1.0
            s[j * n + i, i * n + j] = 1.0
            for l in range(n):
                c[i * n + j, j * n + l, i * n + l] = 1.0
    unit = np.zeros(d, dtype=complex)
    unit[[i * n + i for i in range(n)]] = 1.0
    labels = tuple(f"E{i + 1}{j + 1}" for i in range(n) for j in range(n))
    return StarAlgebra(c, unit, s, labels, rep, f"M_{n}")


def _from_matrix_basis(basis: np.ndarray, name: str) -> StarAlgebra:
    # basis: (d, n, n), orthonormal under tr(x* y)
    d, n, _ = basis.shape
    flat = basis.reshape(d, -1)
    prods = np.einsum("iab,jbc->ijac", basis, basis).reshape(d, d, -1)
    c = np.einsum("kx,ijx->ijk", flat.conj(), prods)
    unit = flat.conj() @ np.eye(n).reshape(-1)
    adj = np.conj(basis.transpose(0, 2, 1)).reshape(d, -1)
    s = (flat.conj() @ adj.T)  # s[j, i] = <b_j, b_i^*>
    return StarAlgebra(c, unit, s, (), basis, name)


def subalgebra_from_generators(n: int, generators: Sequence = (), tol: float = DEFAULT_TOL) -> StarAlgebra:
    """Smallest unital *-subalgebra of ``M_n`` containing ``generators``.

    The span is closed under products and adjoints until its dimension stops
    growing; the resulting basis is orthonormal for ``tr(x* y)``.
    """
    gens = [np.asarray(g, dtype=complex).reshape(n, n) for g in generators]
    seeds = [np.eye(n, dtype=complex)] + gens + [g.conj().T for g in gens]
    frame = orthonormalize([m.reshape(-1) for m in seeds], tol)
    while True:
        mats = [v.reshape(n, n) for v in frame]
        cand = list(frame)
        for x in mats:
            cand.append(x.conj().T.reshape(-1))
            for y in mats:
                cand.append((x @ y).reshape(-1))
        grown = orthonormalize(cand, tol)
        if grown.size == frame.size:
            break
        frame = grown
    basis = frame.vectors.T.reshape(frame.size, n, n)
    return _from_matrix_basis(basis, f"alg<{len(gens)} gens in M_{n}>")


def direct_sum(a: StarAlgebra, b: StarAlgebra) -> StarAlgebra:
    da, db = a.dim, b.dim
    d = da + db
    c = np.zeros((d, d, d), dtype=complex)
    c[:da, :da, :da] = a.structure
    c[da:, da:, da:] = b.structure
    s = np.zeros((d, d), dtype=complex)
    s[:da, :da] = a.star_matrix
    s[da:, da:] = b.star_matrix
    rep = None
    if a.rep is not None and b.rep is not None:
        na, nb = a.rep_dim, b.rep_dim
        rep = np.zeros((d, na + nb, na + nb), dtype=complex)
        rep[:da, :na, :na] = a.rep
        rep[da:, na:, na:] = b.rep
    labels = tuple(f"{l}@0" for l in a.labels) + tuple(f"{l}@1" for l in b.labels)
    return StarAlgebra(c, np.concatenate([a.unit, b.unit]), s, labels, rep, f"({a.name} + {b.name})")


# -- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraHom:
    """Linear map between algebras acting on coordinates: ``h(x) = matrix @ x``."""

    source: StarAlgebra
    target: StarAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch(f"hom matrix shape {m.shape} != {(self.target.dim, self.source.dim)}")
        object.__setattr__(self, "matrix", m)

    def __call__(self, x):
        if isinstance(x, AlgebraElement):
            if not same_algebra(x.algebra, self.source):
                raise AlgebraMismatch("element is not in the source algebra")
            return AlgebraElement(self.target, self.matrix @ x.coords)
        return self.matrix @ np.asarray(x, dtype=complex)

    def invariant_residuals(self) -> dict[str, float]:
        a, b, m = self.source, self.target, self.matrix
        # h(b_i b_j) vs h(b_i) h(b_j)
        lhs = np.einsum("ijk,mk->ijm", a.structure, m)
        rhs = np.einsum("xi,yj,xym->ijm", m, m, b.structure)
        res = {"multiplicative": float(np.max(np.abs(lhs - rhs), initial=0.0))}
        res["unital"] = float(np.max(np.abs(m @ a.unit - b.unit), initial=0.0))
        res["star"] = float(np.max(np.abs(m @ a.star_matrix - b.star_matrix @ np.conj(m)), initial=0.0))
        return res

    def check(self, tol: float = INVARIANT_TOL) -> None:
        bad = {k: v for k, v in self.invariant_residuals().items() if v > tol}
        if bad:
            raise ValueError(f"homomorphism invariants violated: {bad}")


def identity_hom(a: StarAlgebra) -> AlgebraHom:
    return AlgebraHom(a, a, np.eye(a.dim, dtype=complex))


def compose_homs(g: AlgebraHom, f: AlgebraHom) -> AlgebraHom:
    """``g ∘ f``."""
    if not same_algebra(f.target, g.source):
        raise AlgebraMismatch("target of f is not the source of g")
    return AlgebraHom(f.source, g.target, g.matrix @ f.matrix)


# -- ideals and quotients -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ideal:
    algebra: StarAlgebra
    frame: Frame

    @property
    def dim(self) -> int:
        return self.frame.size

    def _span_residual(self, vectors) -> float:
        worst = 0.0
        for v in vectors:
            _, out = split(self.frame, v)
            worst = max(worst, float(np.linalg.norm(out)))
        return worst

    def two_sided_residual(self) -> float:
        a = self.algebra
        cands = []
        for v in self.frame:
            for i in range(a.dim):
                b = a.basis(i)
                cands.append(a.mul(b, v))
                cands.append(a.mul(v, b))
        return self._span_residual(cands)

    def star_residual(self) -> float:
        return self._span_residual(self.algebra.star(v) for v in self.frame)

    def contains(self, x, tol: float = INVARIANT_TOL) -> bool:
        x = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=complex)
        _, out = split(self.frame, x)
        return float(np.linalg.norm(out)) <= tol * max(1.0, float(np.linalg.norm(x)))

    def is_proper(self, tol: float = INVARIANT_TOL) -> bool:
        return not self.contains(self.algebra.unit, tol)


def ideal_from_vectors(a: StarAlgebra, vectors, tol: float = DEFAULT_TOL) -> Ideal:
    """Wrap a hand-picked spanning set; no closure is performed."""
    return Ideal(a, orthonormalize([np.asarray(v, dtype=complex) for v in vectors], tol, ambient_dim=a.dim))


def ideal_closure(a: StarAlgebra, generators: Sequence, tol: float = DEFAULT_TOL) -> Ideal:
    """Smallest star-closed two-sided ideal containing ``generators``."""
    vecs = [g.coords if isinstance(g, AlgebraElement) else np.asarray(g, dtype=complex) for g in generators]
    frame = orthonormalize(vecs, tol, ambient_dim=a.dim)
    lefts = [a.left_matrix(a.basis(i)) for i in range(a.dim)]
    rights = [a.right_matrix(a.basis(i)) for i in range(a.dim)]
    while frame.size and frame.size < a.dim:
        cand = list(frame)
        for v in frame:
            cand.append(a.star(v))
            for lm, rm in zip(lefts, rights):
                cand.append(lm @ v)
                cand.append(rm @ v)
        grown = orthonormalize(cand, tol, ambient_dim=a.dim)
        if grown.size == frame.size:
            break
        frame = grown
    return Ideal(a, frame)


@dataclass(frozen=True, eq=False)
class Quotient:
    algebra: StarAlgebra  # A/I
    projection: AlgebraHom  # A -> A/I
    representatives: np.ndarray  # d x q, columns represent the quotient basis

    def __iter__(self):
        # allows ``q, p = quotient(a, i)``
        return iter((self.algebra, self.projection))


def quotient(a: StarAlgebra, ideal: Ideal, tol: float = INVARIANT_TOL) -> Quotient:
    """``A / I`` with representatives taken from the orthogonal complement of ``I``."""
    if not same_algebra(ideal.algebra, a):
        raise AlgebraMismatch("ideal belongs to another algebra")
    if not ideal.is_proper(tol):
        raise ImproperIdeal("the ideal contains the unit")
    scale = max(1.0, float(np.max(np.abs(a.structure), initial=0.0)))
    if ideal.star_residual() > tol * scale:
        raise NotStarClosed(f"ideal is not star-closed (residual {ideal.star_residual():.3e})")
    reps = complement(ideal.frame).vectors
    q = reps.shape[1]
    proj = reps.conj().T
    prods = np.einsum("ik,jl,ijm->klm", reps, reps, a.structure)
    c = np.einsum("klm,nm->kln", prods, proj)
    unit_q = proj @ a.unit
    s = proj @ a.star_matrix @ np.conj(reps)
    qa = StarAlgebra(c, unit_q, s, tuple(f"q{k}" for k in range(q)), None, f"{a.name}/I")
    return Quotient(qa, AlgebraHom(a, qa, proj), reps)


def center(a: StarAlgebra, tol: float = DEFAULT_TOL) -> Frame:
    """Orthonormal coordinate basis of the center ``{z : z b_i = b_i z for all i}``."""
    d = a.dim
    rows = []
    for i in range(d):
        b = a.basis(i)
        rows.append(a.right_matrix(b) - a.left_matrix(b))
    stacked = np.vstack(rows)
    _, sv, vh = np.linalg.svd(stacked)
    scale = max(1.0, float(sv[0])) if sv.size else 1.0
    rank = int(np.sum(sv > tol * scale))
    null = vh[rank:].conj().T
    return orthonormalize(list(null.T), tol, ambient_dim=d)


def is_simple(a: StarAlgebra, tol: float = DEFAULT_TOL) -> bool:
    """True iff the algebra has no proper nonzero star-closed two-sided ideal.

    A central element that is not a scalar yields a non-invertible central
    element ``z - lambda e``, hence a proper ideal; so the center must be
    one-dimensional.  Each basis element must also generate everything.
    """
    if center(a, tol).size > 1:
        return False
    return all(ideal_closure(a, [a.basis(i)], tol).dim == a.dim for i in range(a.dim))


def same_algebra(a: StarAlgebra, b: StarAlgebra) -> bool:
    """Structural equality: identical structure constants, unit and star."""
    if a is b:
        return True
    return (a.dim == b.dim and np.array_equal(a.structure, b.structure)
            and np.array_equal(a.unit, b.unit) and np.array_equal(a.star_matrix, b.star_matrix))
