"""Seeded random instances for property suites and tests.

Every generator takes a ``numpy.random.Generator`` so that a fixed seed
reproduces the same sequence of objects.
"""

from __future__ import annotations

import numpy as np

from qcm.algebra import (StarAlgebra, direct_sum, function_algebra, ideal_closure, matrix_algebra,
                         subalgebra_from_generators, Ideal)
from qcm.classical import FiniteMeasureSpace, MeasurableMap
from qcm.measure import QuantumMeasure, density_measure

ZERO_WEIGHT_RATE = 0.2


def random_space(rng: np.random.Generator, min_points: int = 2, max_points: int = 6,
                 probability: bool = False) -> FiniteMeasureSpace:
    n = int(rng.integers(min_points, max_points + 1))
    w = rng.uniform(0.0, 1.0, n)
    w[rng.uniform(size=n) < ZERO_WEIGHT_RATE] = 0.0
    if probability:
        if w.sum() == 0:
            w[int(rng.integers(n))] = 1.0
        w = w / w.sum()
    return FiniteMeasureSpace.from_weights(w)


def random_map(rng: np.random.Generator, source: FiniteMeasureSpace,
               target: FiniteMeasureSpace) -> MeasurableMap:
    images = rng.integers(0, len(target), len(source))
    return MeasurableMap(source, target, {p: target.points[k] for p, k in zip(source.points, images)})


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_commutative_algebra(rng: np.random.Generator, max_n: int = 4) -> StarAlgebra:
    """Algebra generated by ``U diag(lambda) U*`` in ``M_n``; repeated eigenvalues shrink it."""
    n = int(rng.integers(1, max_n + 1))
    vals = rng.integers(0, n + 1, n).astype(float)
    u = random_unitary(rng, n)
    h = (u * vals) @ u.conj().T
    return subalgebra_from_generators(n, [h])


def random_noncommutative_algebra(rng: np.random.Generator, max_n: int = 3) -> StarAlgebra:
    n = int(rng.integers(2, max_n + 1))
    k = int(rng.integers(1, 3))
    return subalgebra_from_generators(n, [random_complex(rng, n, n) for _ in range(k)])


def random_block_algebra(rng: np.random.Generator, max_dim: int = 10) -> StarAlgebra:
    """Direct sum of small full matrix blocks; non-simple whenever there are two blocks."""
    while True:
        sizes = list(rng.integers(1, 3, int(rng.integers(2, 4))))
        if sum(int(s) ** 2 for s in sizes) <= max_dim and max(sizes) > 1:
            break
    a = matrix_algebra(int(sizes[0]))
    for s in sizes[1:]:
        a = direct_sum(a, matrix_algebra(int(s)))
    return a


def random_algebra(rng: np.random.Generator) -> StarAlgebra:
    """Any of the families above, all with dimension at most 10."""
    kind = int(rng.integers(0, 5))
    if kind == 0:
        return function_algebra(int(rng.integers(1, 7)))
    if kind == 1:
        return matrix_algebra(int(rng.integers(1, 4)))
    if kind == 2:
        return random_commutative_algebra(rng)
    if kind == 3:
        return random_noncommutative_algebra(rng)
    return random_block_algebra(rng)


def random_density(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    rank = n if rank is None else rank
    g = random_complex(rng, rank, n)
    return g.conj().T @ g


def random_positive_functional(rng: np.random.Generator, a: StarAlgebra,
                               rank: int | None = None) -> QuantumMeasure:
    """``x -> tr(rho rep(x))`` with ``rho = g* g``; ``rank`` < n gives null directions."""
    return density_measure(a, random_density(rng, a.rep_dim, rank))


def random_functional_mixed(rng: np.random.Generator, a: StarAlgebra) -> QuantumMeasure:
    """Full-rank half the time, otherwise a random lower rank (including pure states)."""
    n = a.rep_dim
    rank = n if rng.uniform() < 0.5 else int(rng.integers(1, n + 1))
    return random_positive_functional(rng, a, rank)


def character_subset_ideal(a: StarAlgebra, idempotents: np.ndarray, subset) -> Ideal:
    """Ideal spanned by the minimal idempotents in ``subset`` (commutative case)."""
    return ideal_closure(a, [idempotents[k] for k in subset])


def random_subset(rng: np.random.Generator, n: int, proper: bool = True) -> list[int]:
    """Random subset of ``range(n)``; never all of it when ``proper``."""
    while True:
        mask = rng.uniform(size=n) < 0.5
        if not (proper and mask.all()):
            return [k for k in range(n) if mask[k]]


def random_block_ideal(rng: np.random.Generator, a: StarAlgebra) -> Ideal:
    """Ideal generated by random elements supported on a proper subset of the blocks.

    Blocks are read off the concrete block-diagonal representation built by
    :func:`random_block_algebra`.
    """
    n = a.rep_dim
    # block boundaries: a rep index starts a block when no basis matrix couples it to earlier indices
    support = np.any(np.abs(a.rep) > 0, axis=0)
    starts = [0] + [i for i in range(1, n) if not support[:i, i:].any() and not support[i:, :i].any()]
    bounds = list(zip(starts, starts[1:] + [n]))
    chosen = random_subset(rng, len(bounds))
    gens = []
    for _ in range(int(rng.integers(1, 3))):
        m = np.zeros((n, n), dtype=complex)
        for k in chosen:
            lo, hi = bounds[k]
            m[lo:hi, lo:hi] = random_complex(rng, hi - lo, hi - lo)
        gens.append(a.coords_of_matrix(m))
    return ideal_closure(a, gens)


def random_element(rng: np.random.Generator, a: StarAlgebra) -> np.ndarray:
    return random_complex(rng, a.dim)
