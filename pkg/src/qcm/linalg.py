"""Dense complex linear algebra with explicit tolerances.

Everything here is a pure function of numpy arrays.  Matrices are plain
``numpy.ndarray`` objects of dtype ``complex128``; subspaces are carried by
:class:`Frame`, an orthonormal set of column vectors.

Unbounded suprema are reported as ``math.inf`` (exported as ``UNBOUNDED``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from qcm.errors import DimensionMismatch, NoConvergence, NonHermitian, NotPsd

DEFAULT_TOL = 1e-9
UNBOUNDED = math.inf


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {a.shape}")
    return a


def hermitian_defect(m: np.ndarray) -> float:
    """Max-norm of ``m - m^H``."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    if m.shape[0] != m.shape[1]:
        raise NonHermitian(f"matrix is not square: {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    defect = hermitian_defect(m)
    if defect > tol * scale:
        raise NonHermitian(f"|m - m*|_max = {defect:.3e} exceeds {tol * scale:.3e}")


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # make the first non-negligible coordinate of each column real positive
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        if mags.size == 0 or mags.max() == 0:
            continue
        idx = int(np.argmax(mags > 1e-8 * mags.max()))
        out[:, k] = col * (abs(col[idx]) / col[idx])
    return out


@dataclass(frozen=True)
class Frame:
    """Orthonormal column vectors spanning a subspace of ``C^ambient_dim``."""

    ambient_dim: int
    vectors: np.ndarray  # shape (ambient_dim, size)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.size == 0:
            v = np.zeros((self.ambient_dim, 0), dtype=complex)
        elif v.ndim != 2 or v.shape[0] != self.ambient_dim:
            v = v.reshape(self.ambient_dim, -1)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def empty(cls, ambient_dim: int) -> "Frame":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex))

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(self.vectors.T)

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T

    def orthonormality_defect(self) -> float:
        if self.size == 0:
            return 0.0
        g = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(g - np.eye(self.size))))


def hermitian_eig(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, Frame]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns eigenvalues in ascending order and the eigenvectors as a
    :class:`Frame`.  Each eigenvector is phase-normalised so that its first
    non-negligible coordinate is real and positive, which makes the output
    reproducible across calls.
    """
    m = as_matrix(m)
    _check_hermitian(m, tol)
    n = m.shape[0]
    if n == 0:
        return np.zeros(0), Frame.empty(0)
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    v = _fix_phases(v)
    # stable ordering: ascending eigenvalue, ties by first differing coordinate
    keys = [(round(float(w[k]), 12),) + tuple(-abs(x) for x in np.round(v[:, k], 12)) for k in range(n)]
    order = sorted(range(n), key=lambda k: keys[k])
    return w[order], Frame(n, v[:, order])


def min_eig_psd(m, tol: float = DEFAULT_TOL) -> tuple[float, bool]:
    """Smallest eigenvalue of Hermitian ``m`` and whether ``m`` is PSD within ``tol``."""
    w, _ = hermitian_eig(m, tol)
    if w.size == 0:
        return 0.0, True
    lo, hi = float(w[0]), float(w[-1])
    return lo, lo >= -tol * max(1.0, hi)


def orthonormalize(vectors: Iterable, tol: float = DEFAULT_TOL, ambient_dim: int | None = None) -> Frame:
    """Gram-Schmidt with re-orthogonalisation and rank detection.

    A vector whose residual after projecting out the current frame has norm
    at most ``tol * max(1, |v|)`` is treated as dependent and dropped.
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        return Frame.empty(ambient_dim or 0)
    dim = vecs[0].shape[0]
    if ambient_dim is not None and ambient_dim != dim:
        raise DimensionMismatch(f"vectors have dim {dim}, expected {ambient_dim}")
    basis: list[np.ndarray] = []
    for v in vecs:
        if v.shape[0] != dim:
            raise DimensionMismatch("vectors do not share one ambient dimension")
        r = v.copy()
        for _ in range(2):
            for b in basis:
                r = r - b * np.vdot(b, r)
        nr = np.linalg.norm(r)
        if nr <= tol * max(1.0, float(np.linalg.norm(v))):
            continue
        basis.append(r / nr)
    if not basis:
        return Frame.empty(dim)
    return Frame(dim, np.column_stack(basis))


def split(frame: Frame, v) -> tuple[np.ndarray, np.ndarray]:
    """Decompose ``v`` into its component inside ``span(frame)`` and the orthogonal rest."""
    v = as_vector(v)
    if v.shape[0] != frame.ambient_dim:
        raise DimensionMismatch(f"vector dim {v.shape[0]} != frame dim {frame.ambient_dim}")
    if frame.size == 0:
        return np.zeros_like(v), v.copy()
    f = frame.vectors
    inside = f @ (f.conj().T @ v)
    orthogonal = v - inside
    # one correction sweep keeps the orthogonal part clean at the 1e-16 level
    fix = f @ (f.conj().T @ orthogonal)
    inside = inside + fix
    orthogonal = v - inside
    return inside, orthogonal


def complement(frame: Frame, tol: float = DEFAULT_TOL) -> Frame:
    """Orthonormal basis of the orthogonal complement of ``span(frame)``."""
    n = frame.ambient_dim
    if frame.size == 0:
        return Frame(n, np.eye(n, dtype=complex))
    w, vecs = hermitian_eig(np.eye(n) - frame.projector(), tol)
    keep = w > 0.5
    return Frame(n, vecs.vectors[:, keep])


def pencil_max(num, den, tol: float = DEFAULT_TOL) -> float:
    """``sup x*·num·x / x*·den·x`` over ``x`` with ``x*·den·x > 0``.

    Both arguments must be Hermitian PSD.  Returns ``UNBOUNDED`` when ``num``
    carries mass on the kernel of ``den``; returns 0 when ``den`` vanishes and
    ``num`` does too.
    """
    num = as_matrix(num)
    den = as_matrix(den)
    if num.shape != den.shape:
        raise DimensionMismatch(f"pencil shapes differ: {num.shape} vs {den.shape}")
    for name, m in (("num", num), ("den", den)):
        try:
            lo, ok = min_eig_psd(m, tol)
        except NonHermitian as exc:
            raise NotPsd(f"{name} is not Hermitian: {exc}") from exc
        if not ok:
            raise NotPsd(f"{name} has eigenvalue {lo:.3e}")
    n = num.shape[0]
    if n == 0:
        return 0.0
    w, vecs = hermitian_eig(den, tol)
    v = vecs.vectors
    wmax = float(w[-1])
    cutoff = tol * max(1.0, wmax)
    pos = w > cutoff
    num_scale = max(1.0, float(np.max(np.abs(num))))
    kernel = v[:, ~pos]
    if kernel.shape[1]:
        block = kernel.conj().T @ num @ kernel
        if float(np.max(np.abs(block))) > tol * num_scale:
            return UNBOUNDED
    if not pos.any():
        return 0.0
    white = v[:, pos] / np.sqrt(w[pos])
    reduced = white.conj().T @ num @ white
    reduced = 0.5 * (reduced + reduced.conj().T)
    top = float(np.linalg.eigvalsh(reduced)[-1])
    return max(top, 0.0)
