"""Randomised property suites.

Each suite draws seeded random instances, runs a set of named checks on
every case and aggregates pass/fail counts and worst residuals.  Results are
deterministic for a given ``(suite, cases, seed, tol)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from qcm.algebra import (compose_homs, direct_sum, function_algebra, identity_hom,
                         ideal_closure, is_simple, matrix_algebra)
from qcm.classical import (FiniteMeasureSpace, MeasurableMap, compose, conditional_space, identity_map,
                           is_measure_preserving, map_norm, map_norm_bruteforce, normalization_norm_check,
                           normalize_space)
from qcm.duality import (conditional_duality_check, lift_map, measure_preservation_agreement, norm_agreement,
                         norms_agree, rmk_measure, round_trip_classical, spectrum, to_quantum)
from qcm.errors import ImproperIdeal, QcmError, UnknownSuite
from qcm import generators as gen
from qcm.gns import bayes_analog, conditional_measure, gns
from qcm.linalg import DEFAULT_TOL, hermitian_eig
from qcm.measure import QuantumMeasure, hom_norm, normalize_measure

MAX_LOGGED_FAILURES = 5


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    max_residual: float = 0.0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, residual: float = 0.0, case=None, note: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_LOGGED_FAILURES:
                self.failures.append({"case": case, "note": note, "residual": residual})
        if residual is not None and math.isfinite(residual):
            self.max_residual = max(self.max_residual, float(residual))

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failed": self.failed,
                "max_residual": self.max_residual, "failures": self.failures}


@dataclass
class SuiteResult:
    suite: str
    cases: int
    seed: int
    checks: dict = field(default_factory=dict)

    def check(self, name: str) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name)
        return self.checks[name]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def to_dict(self) -> dict:
        return {"suite": self.suite, "cases": self.cases, "seed": self.seed, "ok": self.ok,
                "checks": [c.to_dict() for c in self.checks.values()]}


def _same_norm_exact(a: float, b: float) -> bool:
    return (math.isinf(a) and math.isinf(b)) or a == b


def _pushforward(f: MeasurableMap) -> MeasurableMap:
    """``f`` re-targeted at the image measure, making it measure-preserving."""
    target = FiniteMeasureSpace(f.target.points, f.fiber_masses())
    return MeasurableMap(f.source, target, f.mapping)


# -- suites --------------------------------------------------------------------

def suite_classical_norms(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        s, t, u = gen.random_space(rng), gen.random_space(rng), gen.random_space(rng)
        f, g = gen.random_map(rng, s, t), gen.random_map(rng, t, u)
        nf, nb = map_norm(f), map_norm_bruteforce(f)
        res.check("oracle_equivalence").record(_same_norm_exact(nf, nb), 0.0 if nf == nb else abs(nf - nb), case)
        ng, ngf = map_norm(g), map_norm(compose(g, f))
        if math.isfinite(nf) and math.isfinite(ng):
            bound = ng * nf
            res.check("submultiplicative").record(ngf <= bound * (1 + 1e-12) + 1e-15,
                                                  max(0.0, ngf - bound), case)
        p = _pushforward(f)
        if p.target.total_mass > 0:
            res.check("measure_preserving_norm_one").record(
                is_measure_preserving(p) and abs(map_norm(p) - 1.0) <= tol, abs(map_norm(p) - 1.0), case)
        if math.isfinite(nf) and s.total_mass > 0 and t.total_mass > 0:
            lhs, rhs = normalization_norm_check(f)
            r = abs(lhs - rhs)
            res.check("normalization_formula").record(r <= 1e-12 * max(1.0, rhs), r, case)


def suite_adjunction(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        s = gen.random_space(rng)
        if s.total_mass == 0:
            s = FiniteMeasureSpace(s.points, np.ones(len(s)))
        p = gen.random_space(rng, probability=True)
        f = gen.random_map(rng, s, p)
        bounded = math.isfinite(map_norm(f))
        bounded_n = math.isfinite(map_norm(MeasurableMap(normalize_space(s), p, f.mapping)))
        res.check("classical_verdicts").record(bounded == bounded_n, case=case)

        # lifted maps: C(s) -> C(p) with phi_mu on the source and the state phi_P on the target
        g = gen.random_map(rng, p, s)
        a_s, phi = to_quantum(s)
        a_p, psi = to_quantum(p)
        lifted = lift_map(g, a_p, a_s)
        v1 = math.isfinite(hom_norm(lifted, phi, psi, tol))
        v2 = math.isfinite(hom_norm(lifted, normalize_measure(phi), psi, tol))
        res.check("quantum_verdicts_lifted").record(v1 == v2, case=case)

        # identity homs on random algebras with random (possibly rank-deficient) functionals
        a = gen.random_algebra(rng)
        phi_a = gen.random_functional_mixed(rng, a)
        psi_a = normalize_measure(gen.random_functional_mixed(rng, a))
        ident = identity_hom(a)
        w1 = math.isfinite(hom_norm(ident, phi_a, psi_a, tol))
        w2 = math.isfinite(hom_norm(ident, normalize_measure(phi_a), psi_a, tol))
        res.check("quantum_verdicts_identity").record(w1 == w2, case=case)
        if w1:
            # scaling the source by 1/phi(e) scales the norm by phi(e)
            n1 = hom_norm(ident, phi_a, psi_a, tol)
            n2 = hom_norm(ident, normalize_measure(phi_a), psi_a, tol)
            r = abs(n2 - phi_a.total.real * n1)
            res.check("quantum_normalization_formula").record(r <= 1e-9 * max(1.0, n2), r, case)


def suite_gns(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        a = gen.random_algebra(rng)
        phi = gen.random_functional_mixed(rng, a)
        g = gns(a, phi, tol)
        r = g.invariant_residuals()
        for key in ("reproduction", "homomorphism", "adjoint", "unit", "inner_product", "intertwining"):
            res.check(key).record(r[key] <= 1e-9, r[key], case)
        x, y = gen.random_element(rng, a), gen.random_element(rng, a)
        b = gen.random_element(rng, a)
        ex, ey = g.embed @ x, g.embed @ y
        lhs = np.vdot(ex, g.pi(b) @ ey)
        rhs = np.vdot(g.pi(a.star(b)) @ ex, ey)
        scale = max(1.0, abs(lhs))
        res.check("adjoint_identity").record(abs(lhs - rhs) <= 1e-9 * scale, abs(lhs - rhs) / scale, case)
        # kernel of embed is the null space of the Gram form
        w, vecs = hermitian_eig(phi.gram, tol)
        null = vecs.vectors[:, w <= tol * max(1.0, float(w[-1]))]
        ok = g.rank == a.dim - null.shape[1]
        worst = 0.0
        for v in null.T:
            worst = max(worst, float(np.linalg.norm(g.embed @ v)))
        res.check("kernel_is_null_space").record(ok and worst <= 1e-6, worst, case)


def _structural_checks(res: SuiteResult, cond, phi, rng, case, tol) -> None:
    d = cond.diagnostics
    res.check("positivity").record(d["positive"], max(0.0, -d["min_gram_eigenvalue"]), case)
    res.check("well_defined").record(d["well_defined_residual"] <= 1e-9, d["well_defined_residual"], case)
    norm = d["projection_norm"]
    res.check("contraction_norm").record(norm <= 1 + 1e-9, max(0.0, norm - 1), case)
    a = phi.algebra
    worst = 0.0
    for _ in range(4):
        x = gen.random_element(rng, a)
        x = x / np.linalg.norm(x)
        lhs = float(np.real(np.vdot(x, cond.projection.matrix.conj().T @ cond.measure.gram
                                    @ cond.projection.matrix @ x)))
        rhs = float(np.real(np.vdot(x, phi.gram @ x)))
        worst = max(worst, lhs - rhs)
    res.check("contraction_pointwise").record(worst <= 1e-9, max(0.0, worst), case)
    expected = 0.0 if cond.degenerate else 1.0
    name = "dichotomy_degenerate" if cond.degenerate else "dichotomy_norm_one"
    res.check(name).record(abs(norm - expected) <= 1e-9, abs(norm - expected), case)


def suite_conditioning(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        kind = case % 4
        if kind in (0, 1, 2):
            # commutative: random subalgebra or lifted space; kind 2 forces the degenerate regime
            if kind == 0:
                a = gen.random_commutative_algebra(rng)
                phi = gen.random_functional_mixed(rng, a)
            else:
                a, phi = to_quantum(gen.random_space(rng))
            spec = spectrum(a, seed=case)
            subset = gen.random_subset(rng, spec.size)
            ideal = gen.character_subset_ideal(a, spec.idempotents, subset)
            if kind == 2 and subset:
                w = rng.uniform(0.1, 1.0, len(subset))
                phi = QuantumMeasure(a, w @ spec.characters[subset])
            rep = conditional_duality_check(a, phi, ideal, seed=case, tol=tol)
            res.check("dim_quotient_equals_B").record(rep.quotient_dim == len(rep.surviving), case=case)
            res.check("classical_restriction").record(rep.value_residual <= 1e-9, rep.value_residual, case)
            res.check("induced_measure_preserving").record(
                rep.measure_preserving and max(rep.induced_residuals.values(), default=0.0) <= 1e-9,
                max(rep.induced_residuals.values(), default=0.0), case)
        else:
            a = gen.random_block_algebra(rng)
            phi = gen.random_functional_mixed(rng, a)
            ideal = gen.random_block_ideal(rng, a)
        cond = conditional_measure(a, phi, ideal, tol)
        _structural_checks(res, cond, phi, rng, case, tol)
    # simplicity barrier on full matrix algebras
    for n in (2, 3, 4):
        m = matrix_algebra(n)
        phi = QuantumMeasure(m, m.unit.copy())
        x = gen.random_element(rng, m)
        ideal = ideal_closure(m, [x])
        try:
            conditional_measure(m, phi, ideal, tol)
            res.check("simple_algebra_improper").record(False, case=f"M_{n}")
        except ImproperIdeal:
            res.check("simple_algebra_improper").record(ideal.dim == m.dim and is_simple(m), case=f"M_{n}")


def suite_duality(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        s, t, u = gen.random_space(rng), gen.random_space(rng), gen.random_space(rng)
        f, g = gen.random_map(rng, s, t), gen.random_map(rng, t, u)
        c, q = norm_agreement(f, tol)
        r = 0.0 if math.isinf(c) or math.isinf(q) else abs(c - q)
        res.check("norm_transport").record(norms_agree(c, q, tol), r, case)
        for h in (f, _pushforward(f)):
            mc, mq = measure_preservation_agreement(h, tol)
            res.check("measure_preserving_equivalence").record(mc == mq, case=case)
        a_s, a_t, a_u = function_algebra(len(s)), function_algebra(len(t)), function_algebra(len(u))
        lf, lg = lift_map(f, a_s, a_t), lift_map(g, a_t, a_u)
        lgf = lift_map(compose(g, f), a_s, a_u)
        r = float(np.max(np.abs(lgf.matrix - compose_homs(lf, lg).matrix)))
        res.check("contravariant_functoriality").record(r <= 1e-12, r, case)
        r = float(np.max(np.abs(lift_map(identity_map(s), a_s, a_s).matrix - np.eye(len(s)))))
        res.check("identity_lifts_to_identity").record(r <= 1e-12, r, case)
        hom_r = max(lf.invariant_residuals().values())
        res.check("lift_is_star_hom").record(hom_r <= 1e-12, hom_r, case)

        rt = round_trip_classical(s, seed=case)
        err = max(rt.max_weight_error, rt.multiset_error)
        res.check("round_trip_weights").record(err <= 1e-9, err, case)

        a = gen.random_commutative_algebra(rng)
        phi = gen.random_functional_mixed(rng, a)
        rmk = rmk_measure(a, phi, seed=case, tol=tol)
        spec_r = max(rmk.spectrum.invariant_residuals().values())
        res.check("spectrum_invariants").record(spec_r <= 1e-8, spec_r, case)
        iso_r = max(rmk.iso.invariant_residuals().values())
        res.check("rmk_iso_is_star_hom").record(iso_r <= 1e-9, iso_r, case)
        res.check("rmk_measure_preserving").record(rmk.measure_residual <= 1e-9, rmk.measure_residual, case)
        res.check("spectrum_size_is_dim").record(rmk.spectrum.size == a.dim, case=case)

        # direct sums of scalars: characters must be the coordinate projections
        k = int(rng.integers(1, 6))
        ds = function_algebra(1)
        for _ in range(k - 1):
            ds = direct_sum(ds, function_algebra(1))
        chi = spectrum(ds, seed=case).characters
        perm_ok = np.allclose(np.sort(np.abs(chi), axis=1)[:, -1], 1.0) and \
            np.allclose(np.abs(chi).sum(axis=0), 1.0) and np.allclose(np.abs(chi).sum(axis=1), 1.0)
        res.check("scalar_sum_coordinate_projections").record(bool(perm_ok), case=case)


def suite_bayes(res: SuiteResult, rng: np.random.Generator, tol: float) -> None:
    for case in range(res.cases):
        if case % 2 == 0:
            p = gen.random_space(rng, probability=True)
            a, phi = to_quantum(p)
            positive = [k for k in range(len(p)) if p.weights[k] > 0]
            keep = set(gen.random_subset(rng, len(p), proper=False)) | {positive[int(rng.integers(len(positive)))]}
            ideal = ideal_closure(a, [a.basis(k) for k in range(len(p)) if k not in keep])
        else:
            a = gen.random_block_algebra(rng)
            phi = normalize_measure(gen.random_positive_functional(rng, a))
            ideal = gen.random_block_ideal(rng, a)
        cond = conditional_measure(a, phi, ideal, tol)
        x = gen.random_element(rng, a)
        try:
            rec = bayes_analog(a, phi, ideal, x, tol, cond=cond)
        except QcmError as exc:
            res.check("bayes_identity").record(False, case=case, note=type(exc).__name__)
            continue
        scaled = rec.residual / max(1.0, abs(rec.cond_state_value))
        res.check("bayes_identity").record(scaled <= 1e-12, scaled, case)
    # classical instance: P(A|B) = P(B|A) P(A) / P(B)
    rec, classical = classical_bayes_instance()
    r = abs(rec.cond_state_value - classical)
    res.check("classical_bayes_instance").record(r <= 1e-12, r, "P=(0.2,0.3,0.5),B={1,2},A={1}")


def classical_bayes_instance():
    """The three-point example; returns the Bayes record and ``P(A|B)`` from the classical formula."""
    p = FiniteMeasureSpace.from_weights([0.2, 0.3, 0.5])
    a, phi = to_quantum(p)
    ideal = ideal_closure(a, [a.basis(2)])
    rec = bayes_analog(a, phi, ideal, a.basis(0))
    sub, _ = conditional_space(p, [1, 2])
    p_a, p_b = p.measure([1]), sub.total_mass
    p_b_given_a = p.measure({1} & {1, 2}) / p_a
    return rec, p_b_given_a * p_a / p_b


SUITES: dict[str, Callable] = {
    "classical-norms": suite_classical_norms,
    "adjunction": suite_adjunction,
    "gns": suite_gns,
    "conditioning": suite_conditioning,
    "duality": suite_duality,
    "bayes": suite_bayes,
}


def run_property_suite(suite: str, cases: int, seed: int, tol: float = DEFAULT_TOL) -> list[SuiteResult]:
    """Run one suite (or ``"all"``); each suite gets its own generator seeded by ``(seed, index)``."""
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {sorted(SUITES) + ['all']}")
    out = []
    for name in names:
        res = SuiteResult(name, cases, seed)
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        try:
            SUITES[name](res, rng, tol)
        except QcmError as exc:
            res.check("suite_completed").record(False, note=f"{type(exc).__name__}: {exc}")
        out.append(res)
    return out
