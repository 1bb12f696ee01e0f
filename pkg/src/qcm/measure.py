"""Quantum measures: positive linear functionals on a :class:`StarAlgebra`.

A functional is stored by its values on the basis, ``phi(b_i) = coeffs[i]``.
Its Gram matrix ``G[i, j] = phi(b_i^* b_j)`` turns ``phi(a^* a)`` into the
quadratic form ``x^H G x``, so positivity is a PSD test and the norm of a
homomorphism is a Hermitian pencil maximisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from qcm.algebra import AlgebraElement, AlgebraHom, StarAlgebra, matrix_algebra, same_algebra
from qcm.errors import AlgebraMismatch, DimensionMismatch, NoRepresentation, NonHermitian, ZeroMeasure
from qcm.linalg import DEFAULT_TOL, min_eig_psd, pencil_max


@dataclass(frozen=True, eq=False)
class QuantumMeasure:
    algebra: StarAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if v.shape[0] != self.algebra.dim:
            raise DimensionMismatch(f"{v.shape[0]} coefficients for an algebra of dim {self.algebra.dim}")
        object.__setattr__(self, "coeffs", v)

    def __call__(self, x) -> complex:
        return evaluate(self, x)

    @cached_property
    def gram(self) -> np.ndarray:
        a = self.algebra
        # star(b_i) = S[:, i];  G[i, j] = phi(star(b_i) b_j)
        vals = np.einsum("mjk,k->mj", a.structure, self.coeffs)
        return a.star_matrix.T @ vals

    @property
    def total(self) -> complex:
        """``phi(e)``."""
        return complex(self.coeffs @ self.algebra.unit)

    def scaled(self, factor) -> "QuantumMeasure":
        return QuantumMeasure(self.algebra, self.coeffs * factor)


def evaluate(phi: QuantumMeasure, x) -> complex:
    if isinstance(x, AlgebraElement):
        if not same_algebra(x.algebra, phi.algebra):
            raise AlgebraMismatch("element and functional live on different algebras")
        x = x.coords
    return complex(np.asarray(x, dtype=complex) @ phi.coeffs)


def is_positive(phi: QuantumMeasure, tol: float = DEFAULT_TOL) -> bool:
    try:
        _, ok = min_eig_psd(phi.gram, tol)
    except NonHermitian:
        return False
    return ok


def is_state(phi: QuantumMeasure, tol: float = DEFAULT_TOL) -> bool:
    return is_positive(phi, tol) and abs(phi.total - 1.0) <= tol


def normalize_measure(phi: QuantumMeasure, tol: float = DEFAULT_TOL) -> QuantumMeasure:
    total = phi.total
    if abs(total) <= tol:
        raise ZeroMeasure("phi(e) vanishes; a positive functional with phi(e)=0 is zero")
    return QuantumMeasure(phi.algebra, phi.coeffs / total.real)


def pulled_back_gram(f: AlgebraHom, phi_target: QuantumMeasure) -> np.ndarray:
    """``G'[i, j] = phi'(f(b_i)^* f(b_j))`` for ``f: A -> A'``."""
    if not same_algebra(phi_target.algebra, f.target):
        raise AlgebraMismatch("functional is not on the target of f")
    return f.matrix.conj().T @ phi_target.gram @ f.matrix


def hom_norm(f: AlgebraHom, phi: QuantumMeasure, phi_target: QuantumMeasure, tol: float = DEFAULT_TOL) -> float:
    """Least ``M`` with ``phi'(f(a)) <= M phi(a)`` on positive ``a``; ``inf`` if none exists."""
    if not same_algebra(phi.algebra, f.source):
        raise AlgebraMismatch("functional is not on the source of f")
    return pencil_max(pulled_back_gram(f, phi_target), phi.gram, tol)


def is_measure_preserving_hom(f: AlgebraHom, phi: QuantumMeasure, phi_target: QuantumMeasure,
                              tol: float = DEFAULT_TOL) -> bool:
    pulled = phi_target.coeffs @ f.matrix
    return bool(np.max(np.abs(pulled - phi.coeffs), initial=0.0) <= tol)


def trace_measure(n: int) -> QuantumMeasure:
    a = matrix_algebra(n)
    return QuantumMeasure(a, a.unit.copy())


def vector_measure(a: StarAlgebra, h) -> QuantumMeasure:
    """``a -> <h, rho(a) h>`` through the concrete representation."""
    if a.rep is None:
        raise NoRepresentation("vector measures need a concrete representation")
    h = np.asarray(h, dtype=complex).reshape(-1)
    if h.shape[0] != a.rep_dim:
        raise DimensionMismatch(f"h has length {h.shape[0]}, representation acts on C^{a.rep_dim}")
    return QuantumMeasure(a, np.einsum("m,imn,n->i", h.conj(), a.rep, h))


def density_measure(a: StarAlgebra, rho) -> QuantumMeasure:
    """``a -> tr(rho · rep(a))``; positive whenever ``rho`` is PSD."""
    if a.rep is None:
        raise NoRepresentation("density measures need a concrete representation")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (a.rep_dim, a.rep_dim):
        raise DimensionMismatch(f"rho has shape {rho.shape}, expected {(a.rep_dim, a.rep_dim)}")
    return QuantumMeasure(a, np.einsum("nm,imn->i", rho, a.rep))
