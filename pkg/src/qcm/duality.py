"""Classical/quantum duality on finite discrete spaces.

On a finite discrete space every function is continuous and essentially
bounded, so ``C(X)`` and ``L^inf(X)`` are both :func:`function_algebra`.
Lifting sends a measure space to its function algebra with the integration
functional and a map to precomposition (contravariantly).  Going back, the
characters and minimal idempotents of a commutative algebra play the role of
points, and ``phi(p_k)`` is the mass of the point ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qcm.algebra import AlgebraHom, Ideal, StarAlgebra, function_algebra, ideal_closure
from qcm.classical import FiniteMeasureSpace, MeasurableMap, is_measure_preserving, map_norm
from qcm.errors import DegenerateSpectrum, NotCommutative, NotPositive
from qcm.gns import conditional_measure
from qcm.linalg import DEFAULT_TOL
from qcm.measure import QuantumMeasure, hom_norm, is_measure_preserving_hom, is_positive, normalize_measure

CHARACTER_TOL = 1e-8
MAX_SPECTRUM_ATTEMPTS = 20


def to_quantum(s: FiniteMeasureSpace) -> tuple[StarAlgebra, QuantumMeasure]:
    a = function_algebra(len(s))
    return a, QuantumMeasure(a, s.weights.astype(complex))


def lift_map(f: MeasurableMap, source_algebra: StarAlgebra | None = None,
             target_algebra: StarAlgebra | None = None) -> AlgebraHom:
    """Precomposition ``g -> g ∘ f`` from functions on the target to functions on the source."""
    src_alg = source_algebra or function_algebra(len(f.source))
    tgt_alg = target_algebra or function_algebra(len(f.target))
    m = np.zeros((len(f.source), len(f.target)), dtype=complex)
    for x, p in enumerate(f.source.points):
        m[x, f.target.index(f(p))] = 1.0
    return AlgebraHom(tgt_alg, src_alg, m)


def norm_agreement(f: MeasurableMap, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``(|f|, |lift f|)``: the classical norm and the pencil norm of the lifted hom."""
    src_alg, phi_src = to_quantum(f.source)
    tgt_alg, phi_tgt = to_quantum(f.target)
    lifted = lift_map(f, src_alg, tgt_alg)
    # lifted: C(target) -> C(source), so phi_target is on its source side
    return map_norm(f), hom_norm(lifted, phi_tgt, phi_src, tol)


def norms_agree(classical: float, quantum: float, tol: float = DEFAULT_TOL) -> bool:
    if np.isinf(classical) or np.isinf(quantum):
        return bool(np.isinf(classical) and np.isinf(quantum))
    return abs(classical - quantum) <= tol * max(1.0, classical)


def measure_preservation_agreement(f: MeasurableMap, tol: float = DEFAULT_TOL) -> tuple[bool, bool]:
    src_alg, phi_src = to_quantum(f.source)
    tgt_alg, phi_tgt = to_quantum(f.target)
    lifted = lift_map(f, src_alg, tgt_alg)
    return is_measure_preserving(f, tol), is_measure_preserving_hom(lifted, phi_tgt, phi_src, tol)


# -- Gelfand spectrum -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectrumData:
    algebra: StarAlgebra
    characters: np.ndarray  # k x d, chi_k(b_i) = characters[k, i]
    idempotents: np.ndarray  # k x d, coordinates of p_k

    @property
    def size(self) -> int:
        return self.characters.shape[0]

    def evaluate(self, x) -> np.ndarray:
        """``(chi_1(x), ..., chi_k(x))``."""
        return self.characters @ np.asarray(x, dtype=complex)

    def invariant_residuals(self) -> dict[str, float]:
        a, chi, p = self.algebra, self.characters, self.idempotents
        k = self.size
        c = a.structure
        # chi(b_i b_j) vs chi(b_i) chi(b_j)
        lhs = np.einsum("ijm,km->kij", c, chi)
        rhs = np.einsum("ki,kj->kij", chi, chi)
        res = {"multiplicative": float(np.max(np.abs(lhs - rhs), initial=0.0))}
        res["unital"] = float(np.max(np.abs(chi @ a.unit - 1.0), initial=0.0))
        res["star"] = float(np.max(np.abs(chi @ a.star_matrix - np.conj(chi)), initial=0.0))
        prods = np.einsum("ki,lj,ijm->klm", p, p, c)
        target = np.zeros_like(prods)
        for i in range(k):
            target[i, i] = p[i]
        res["orthogonal_idempotents"] = float(np.max(np.abs(prods - target), initial=0.0))
        res["self_adjoint"] = float(max((np.max(np.abs(a.star(q) - q)) for q in p), default=0.0))
        res["partition_of_unity"] = float(np.max(np.abs(p.sum(axis=0) - a.unit), initial=0.0))
        res["pairing"] = float(np.max(np.abs(chi @ p.T - np.eye(k)), initial=0.0))
        return res


def _random_self_adjoint(a: StarAlgebra, rng: np.random.Generator) -> np.ndarray:
    d = a.dim
    h = np.zeros(d, dtype=complex)
    for i in range(d):
        b = a.basis(i)
        bs = a.star(b)
        h += rng.standard_normal() * (b + bs) + rng.standard_normal() * 1j * (b - bs)
    return h


def _sharpen(a: StarAlgebra, p: np.ndarray, steps: int = 3) -> np.ndarray:
    # p <- 3p^2 - 2p^3 converges quadratically to the nearby idempotent
    for _ in range(steps):
        p2 = a.mul(p, p)
        p = 3 * p2 - 2 * a.mul(p2, p)
        p = 0.5 * (p + a.star(p))
    return p


def spectrum(a: StarAlgebra, seed: int = 0) -> SpectrumData:
    """Characters and minimal idempotents of a commutative *-algebra.

    Left multiplication by a generic self-adjoint element is diagonalisable
    with simple eigenvalues; its eigenvectors are multiples of the minimal
    idempotents.
    """
    if not a.is_commutative():
        raise NotCommutative(f"{a.name or 'algebra'} is not commutative")
    d = a.dim
    rng = np.random.default_rng(seed)
    for _ in range(MAX_SPECTRUM_ATTEMPTS):
        h = _random_self_adjoint(a, rng)
        w, v = np.linalg.eig(a.left_matrix(h))
        if d > 1:
            gaps = np.abs(w[:, None] - w[None, :])
            np.fill_diagonal(gaps, np.inf)
            spread = float(np.max(np.abs(w - w.mean())))
            if spread == 0 or float(gaps.min()) <= 1e-6 * spread:
                continue
        idems = []
        for k in range(d):
            vk = v[:, k]
            sq = a.mul(vk, vk)
            ck = np.vdot(vk, sq) / np.vdot(vk, vk)
            if abs(ck) < 1e-10:
                break
            idems.append(_sharpen(a, vk / ck))
        if len(idems) < d:
            continue
        p = np.array(idems)
        chi = np.empty((d, d), dtype=complex)
        for k in range(d):
            # x p_k = chi_k(x) p_k
            norm = np.vdot(p[k], p[k])
            for i in range(d):
                chi[k, i] = np.vdot(p[k], a.mul(a.basis(i), p[k])) / norm
        order = sorted(range(d), key=lambda k: (int(np.argmax(np.abs(p[k]) > 0.5 * np.abs(p[k]).max())),
                                                 round(float(w[k].real), 9)))
        return SpectrumData(a, chi[order], p[order])
    raise DegenerateSpectrum("could not separate the spectrum; the algebra may not be semisimple")


# -- measure recovery ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RmkResult:
    space: FiniteMeasureSpace
    iso: AlgebraHom  # A -> function_algebra(|X|)
    spectrum: SpectrumData
    measure_residual: float

    def __iter__(self):
        return iter((self.space, self.iso))


def rmk_measure(a: StarAlgebra, phi: QuantumMeasure, seed: int = 0, tol: float = DEFAULT_TOL) -> RmkResult:
    """Point masses ``phi(p_k)`` on the characters, and the Gelfand isomorphism."""
    spec = spectrum(a, seed)
    if not is_positive(phi, tol):
        raise NotPositive("measure recovery needs a positive functional")
    masses = np.real(spec.idempotents @ phi.coeffs)
    masses = np.where(masses < 0, 0.0, masses)
    space = FiniteMeasureSpace(tuple(f"chi{k}" for k in range(spec.size)), masses)
    target = function_algebra(spec.size)
    iso = AlgebraHom(a, target, spec.characters)
    pushed = masses @ spec.characters
    return RmkResult(space, iso, spec, float(np.max(np.abs(pushed - phi.coeffs), initial=0.0)))


@dataclass(frozen=True)
class RoundTripReport:
    original: tuple
    recovered: tuple
    matching: dict  # original point -> character index
    max_weight_error: float
    multiset_error: float

    @property
    def ok(self) -> bool:
        return max(self.max_weight_error, self.multiset_error) <= DEFAULT_TOL


def round_trip_classical(s: FiniteMeasureSpace, seed: int = 0) -> RoundTripReport:
    """Space -> (function algebra, integral) -> spectrum and masses -> space."""
    a, phi = to_quantum(s)
    res = rmk_measure(a, phi, seed)
    spec = res.spectrum
    # fingerprint: a character evaluates the indicator of its own point to 1
    matching = {}
    for x, p in enumerate(s.points):
        matching[p] = int(np.argmax(np.abs(spec.characters[:, x])))
    if len(set(matching.values())) != len(s):
        raise DegenerateSpectrum("characters do not match points one-to-one")
    errs = [abs(s.weight(p) - res.space.weights[k]) for p, k in matching.items()]
    orig = tuple(sorted(float(w) for w in s.weights))
    rec = tuple(sorted(float(w) for w in res.space.weights))
    multiset = max((abs(u - v) for u, v in zip(orig, rec)), default=0.0)
    return RoundTripReport(orig, rec, matching, float(max(errs, default=0.0)), float(multiset))


@dataclass(frozen=True)
class ConditionalDualityReport:
    surviving: tuple  # characters vanishing on the ideal
    quotient_dim: int
    value_residual: float
    induced_residuals: dict
    measure_preserving: bool
    conditional_masses: tuple

    @property
    def ok(self) -> bool:
        return (self.quotient_dim == len(self.surviving)
                and self.value_residual <= DEFAULT_TOL
                and self.measure_preserving
                and max(self.induced_residuals.values(), default=0.0) <= DEFAULT_TOL)


def conditional_duality_check(a: StarAlgebra, phi: QuantumMeasure, ideal: Ideal,
                              seed: int = 0, tol: float = DEFAULT_TOL) -> ConditionalDualityReport:
    """Compare ``phi_I`` with the restriction of the recovered measure to ``B``.

    ``B`` is the set of characters vanishing on the ideal.
    """
    rmk = rmk_measure(a, phi, seed, tol)
    spec = rmk.spectrum
    masses = rmk.space.weights
    on_ideal = spec.characters @ ideal.frame.vectors if ideal.dim else np.zeros((spec.size, 0))
    surviving = tuple(k for k in range(spec.size) if np.all(np.abs(on_ideal[k]) <= CHARACTER_TOL))
    cond = conditional_measure(a, phi, ideal, tol)
    reps = cond.quotient.representatives
    chi_b = spec.characters[list(surviving)] if surviving else np.zeros((0, a.dim))
    mu_b = masses[list(surviving)]
    expected = mu_b @ (chi_b @ reps)
    value_residual = float(np.max(np.abs(expected - cond.measure.coeffs), initial=0.0))
    induced_res: dict = {}
    preserving = False
    if len(surviving) == cond.algebra.dim:
        cb = function_algebra(len(surviving)) if surviving else None
        if cb is not None:
            induced = AlgebraHom(cond.algebra, cb, chi_b @ reps)
            induced_res = induced.invariant_residuals()
            phi_b = QuantumMeasure(cb, mu_b.astype(complex))
            preserving = is_measure_preserving_hom(induced, cond.measure, phi_b, tol)
        else:
            preserving = True
    return ConditionalDualityReport(surviving, cond.algebra.dim, value_residual, induced_res,
                                    preserving, tuple(float(m) for m in mu_b))


def conditional_expectation_check(s: FiniteMeasureSpace, subset, f, tol: float = DEFAULT_TOL) -> tuple[complex, complex]:
    """``E_B(f)`` two ways: from the normalised conditional measure, and as ``sum_B f·mu / mu(B)``.

    ``f`` is a function on the points of ``s`` given as a coefficient vector.
    The ideal conditioned on is spanned by the indicators of points outside ``B``.
    """
    wanted = set(subset)
    for p in wanted:
        s.index(p)
    f = np.asarray(f, dtype=complex)
    a, phi = to_quantum(s)
    ideal = ideal_closure(a, [a.basis(k) for k, p in enumerate(s.points) if p not in wanted])
    cond = conditional_measure(a, phi, ideal, tol)
    state = normalize_measure(cond.measure, tol)
    lhs = complex(state.coeffs @ (cond.projection.matrix @ f))
    inside = [k for k, p in enumerate(s.points) if p in wanted]
    rhs = complex(f[inside] @ s.weights[inside] / s.weights[inside].sum())
    return lhs, rhs
