"""GNS representations and quantum conditional measures.

The GNS Hilbert space of ``(A, phi)`` is realised as ``C^r`` with ``r`` the
rank of the Gram matrix: whitening the Gram form on its positive eigenspace
gives a map ``embed`` with ``<embed x, embed y> = x^H G y``.  Conditioning on
an ideal ``I`` then splits the cyclic vector against the embedded ideal and
pairs the orthogonal part with embedded representatives of ``A/I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qcm.algebra import AlgebraElement, Ideal, Quotient, StarAlgebra, quotient, same_algebra
from qcm.errors import AlgebraMismatch, DegenerateConditioning, NotPositive
from qcm.linalg import DEFAULT_TOL, Frame, hermitian_eig, min_eig_psd, orthonormalize, split
from qcm.measure import QuantumMeasure, hom_norm, is_positive, normalize_measure


@dataclass(frozen=True, eq=False)
class GnsData:
    algebra: StarAlgebra
    measure: QuantumMeasure
    embed: np.ndarray  # r x d
    rep: np.ndarray  # d x r x r, pi(b_i)
    cyclic: np.ndarray  # r

    @property
    def rank(self) -> int:
        return self.embed.shape[0]

    def pi(self, x) -> np.ndarray:
        x = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=complex)
        return np.einsum("i,iab->ab", x, self.rep)

    def invariant_residuals(self) -> dict[str, float]:
        a, e, pi = self.algebra, self.embed, self.rep
        r = self.rank
        g = self.measure.gram
        res = {"inner_product": float(np.max(np.abs(e.conj().T @ e - g), initial=0.0))}
        prod = np.einsum("iab,jbc->ijac", pi, pi)
        via = np.einsum("ijk,kac->ijac", a.structure, pi)
        res["homomorphism"] = float(np.max(np.abs(prod - via), initial=0.0))
        res["unit"] = float(np.max(np.abs(self.pi(a.unit) - np.eye(r)), initial=0.0))
        stars = np.einsum("ji,jab->iab", a.star_matrix, pi)
        res["adjoint"] = float(np.max(np.abs(stars - np.conj(pi.transpose(0, 2, 1))), initial=0.0))
        repro = np.einsum("a,iab,b->i", self.cyclic.conj(), pi, self.cyclic)
        res["reproduction"] = float(np.max(np.abs(repro - self.measure.coeffs), initial=0.0))
        # pi(b) embed(y) = embed(b y): the defining property of the representation
        moved = np.einsum("iab,bj->iaj", pi, e)
        direct = np.stack([e @ a.left_matrix(a.basis(i)) for i in range(a.dim)]) if a.dim else moved
        res["intertwining"] = float(np.max(np.abs(moved - direct), initial=0.0))
        return res


def gns(a: StarAlgebra, phi: QuantumMeasure, tol: float = DEFAULT_TOL) -> GnsData:
    if not same_algebra(phi.algebra, a):
        raise AlgebraMismatch("functional is not on this algebra")
    if not is_positive(phi, tol):
        raise NotPositive("GNS needs a positive functional")
    w, vecs = hermitian_eig(phi.gram, tol)
    wmax = float(w[-1]) if w.size else 0.0
    keep = w > tol * max(1.0, wmax)
    v = vecs.vectors[:, keep]
    root = np.sqrt(w[keep])
    embed = (v * root).conj().T  # r x d
    pinv = v / root  # d x r, embed @ pinv = I_r
    rep = np.stack([embed @ a.left_matrix(a.basis(i)) @ pinv for i in range(a.dim)])
    return GnsData(a, phi, embed, rep, embed @ a.unit)


@dataclass(frozen=True, eq=False)
class ConditionalMeasure:
    """Result of conditioning ``(A, phi)`` on an ideal ``I``."""

    quotient: Quotient
    measure: QuantumMeasure  # phi_I on A/I
    gns: GnsData
    ideal_image: Frame  # I_phi inside C^r
    xi_inside: np.ndarray
    xi_perp: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def algebra(self) -> StarAlgebra:
        return self.quotient.algebra

    @property
    def projection(self):
        return self.quotient.projection

    @property
    def degenerate(self) -> bool:
        """True when the embedded ideal fills the whole GNS space (then ``phi_I = 0``)."""
        return self.ideal_image.size == self.gns.rank

    def value(self, x) -> complex:
        """``phi_I[x]`` for an element ``x`` of the original algebra."""
        x = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=complex)
        return complex(self.measure.coeffs @ (self.projection.matrix @ x))

    def contraction_ratio(self, x) -> float:
        """``phi_I([a*a]) / phi(a*a)`` for coefficient vector ``x`` (0 when both vanish)."""
        x = np.asarray(x, dtype=complex)
        num = float(np.real(np.vdot(x, self.projection.matrix.conj().T @ self.measure.gram @ self.projection.matrix @ x)))
        den = float(np.real(np.vdot(x, self.gns.measure.gram @ x)))
        return num / den if den > 0 else 0.0


def conditional_measure(a: StarAlgebra, phi: QuantumMeasure, ideal: Ideal,
                        tol: float = DEFAULT_TOL) -> ConditionalMeasure:
    """The quantum conditional measure ``phi_I[a] = <xi_I^perp, a_phi>`` on ``A/I``."""
    if not same_algebra(ideal.algebra, a):
        raise AlgebraMismatch("ideal belongs to another algebra")
    quo = quotient(a, ideal)
    g = gns(a, phi, tol)
    images = [g.embed @ v for v in ideal.frame]
    ideal_image = orthonormalize(images, tol, ambient_dim=g.rank)
    xi_in, xi_perp = split(ideal_image, g.cyclic)
    coeffs = xi_perp.conj() @ (g.embed @ quo.representatives)
    phi_i = QuantumMeasure(quo.algebra, coeffs)

    well = max((abs(np.vdot(xi_perp, u)) for u in images), default=0.0)
    min_eig, psd = min_eig_psd(phi_i.gram, tol) if quo.algebra.dim else (0.0, True)
    norm = hom_norm(quo.projection, phi, phi_i, tol)
    diagnostics = {
        "well_defined_residual": float(well),
        "min_gram_eigenvalue": float(min_eig),
        "positive": bool(psd),
        "projection_norm": float(norm),
        "gns_rank": g.rank,
        "ideal_image_dim": ideal_image.size,
        "degenerate": ideal_image.size == g.rank,
    }
    return ConditionalMeasure(quo, phi_i, g, ideal_image, xi_in, xi_perp, diagnostics)


@dataclass(frozen=True)
class BayesRecord:
    cond_state_value: complex
    ratio: complex
    reconstructed: complex
    residual: float


def bayes_analog(a: StarAlgebra, phi: QuantumMeasure, ideal: Ideal, x,
                 tol: float = DEFAULT_TOL, cond: ConditionalMeasure | None = None) -> BayesRecord:
    """Check ``phi([x]|I) = (phi(I|x) / phi_I[e]) · phi(x)`` with ``phi(I|x) = phi_I[x] / phi(x)``."""
    x = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=complex)
    cond = cond or conditional_measure(a, phi, ideal, tol)
    phi_x = phi(x)
    if abs(phi_x) <= tol:
        raise DegenerateConditioning("phi(x) vanishes")
    total_i = cond.value(a.unit)
    if abs(total_i) <= tol:
        raise DegenerateConditioning("phi_I[e] vanishes")
    # normalised conditional state, evaluated on its own
    cond_state = normalize_measure(cond.measure, tol)
    value = complex(cond_state.coeffs @ (cond.projection.matrix @ x))
    ratio = cond.value(x) / phi_x
    rebuilt = ratio / total_i * phi_x
    return BayesRecord(value, ratio, rebuilt, float(abs(value - rebuilt)))
