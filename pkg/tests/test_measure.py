import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcm.algebra import (AlgebraHom, StarAlgebra, function_algebra, identity_hom, matrix_algebra,
                         subalgebra_from_generators)
from qcm.errors import AlgebraMismatch, DimensionMismatch, NoRepresentation, ZeroMeasure
from qcm.generators import random_algebra, random_complex, random_positive_functional
from qcm.measure import (QuantumMeasure, density_measure, evaluate, hom_norm, is_measure_preserving_hom,
                         is_positive, is_state, normalize_measure, trace_measure, vector_measure)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_trace_measure():
    phi = trace_measure(2)
    m = phi.algebra
    assert phi(m.basis(0)) == 1 and phi(m.basis(1)) == 0
    assert phi.total == 2
    assert is_positive(phi) and not is_state(phi)
    state = normalize_measure(phi)
    assert is_state(state) and state.total == pytest.approx(1.0)
    for n in (1, 3, 4):
        assert trace_measure(n).total == n


def test_evaluate_basics():
    a = function_algebra(3)
    phi = QuantumMeasure(a, [0.2, 0.3, 0.5])
    assert phi(np.zeros(3)) == 0
    # the integral of an indicator is the measure of the set
    assert evaluate(phi, np.array([1, 0, 1])) == pytest.approx(0.7)
    assert phi(a.element([1, 1, 1])) == pytest.approx(1.0)
    with pytest.raises(AlgebraMismatch):
        phi(function_algebra(2).element([1, 1]))
    with pytest.raises(DimensionMismatch):
        QuantumMeasure(a, [1, 2])


def test_gram_of_trace_is_identity():
    assert np.allclose(trace_measure(3).gram, np.eye(9))


def test_positivity_examples():
    assert not is_positive(QuantumMeasure(function_algebra(2), [1, -1]))
    assert not is_positive(QuantumMeasure(function_algebra(1), [1j]))
    assert is_positive(vector_measure(matrix_algebra(2), [1, 2j]))
    phi = QuantumMeasure(function_algebra(3), [0.2, 0.3, 0.5])
    assert is_state(phi) and np.allclose(normalize_measure(phi).coeffs, phi.coeffs)


def test_vector_measure():
    m = matrix_algebra(2)
    w = vector_measure(m, [1, 0])
    assert w(m.basis(0)) == 1 and w(m.basis(3)) == 0
    assert is_state(vector_measure(m, np.array([1, 1j]) / np.sqrt(2)))
    with pytest.raises(DimensionMismatch):
        vector_measure(m, [1, 0, 0])
    no_rep = StarAlgebra(m.structure, m.unit, m.star_matrix)
    with pytest.raises(NoRepresentation):
        vector_measure(no_rep, [1, 0])
    with pytest.raises(NoRepresentation):
        density_measure(no_rep, np.eye(2))


@settings(max_examples=40)
@given(seeds)
def test_sum_of_vector_measures_is_positive(seed):
    rng = np.random.default_rng(seed)
    a = random_algebra(rng)
    coeffs = sum(vector_measure(a, random_complex(rng, a.rep_dim)).coeffs for _ in range(3))
    assert is_positive(QuantumMeasure(a, coeffs))


@settings(max_examples=40)
@given(seeds)
def test_density_functionals_are_positive(seed):
    rng = np.random.default_rng(seed)
    a = random_algebra(rng)
    phi = random_positive_functional(rng, a)
    assert is_positive(phi)
    assert is_state(normalize_measure(phi))


def test_normalize_zero_measure():
    with pytest.raises(ZeroMeasure):
        normalize_measure(QuantumMeasure(function_algebra(2), [0, 0]))


def test_hom_norm_examples():
    a = function_algebra(2)
    phi = QuantumMeasure(a, [1, 1])
    ident = identity_hom(a)
    assert hom_norm(ident, phi, phi.scaled(2)) == pytest.approx(2.0)
    assert hom_norm(ident, phi, phi) == pytest.approx(1.0)
    # phi vanishes on d2 but phi' does not
    assert math.isinf(hom_norm(ident, QuantumMeasure(a, [1, 0]), phi))
    with pytest.raises(AlgebraMismatch):
        hom_norm(ident, QuantumMeasure(function_algebra(3), [1, 1, 1]), phi)


def test_measure_preserving_hom():
    a = function_algebra(2)
    phi = QuantumMeasure(a, [0.4, 0.6])
    assert is_measure_preserving_hom(identity_hom(a), phi, phi)
    assert not is_measure_preserving_hom(identity_hom(a), phi, phi.scaled(2))


def test_hom_norm_on_subalgebra_inclusion():
    # diagonal subalgebra into M_2, trace on both sides: norm 1
    d = subalgebra_from_generators(2, [np.diag([1.0, 2.0])])
    m = matrix_algebra(2)
    inc = AlgebraHom(d, m, np.stack([m.coords_of_matrix(d.represent(d.basis(i))) for i in range(d.dim)], axis=1))
    assert max(inc.invariant_residuals().values()) <= 1e-12
    phi_d = density_measure(d, np.eye(2))
    assert hom_norm(inc, phi_d, trace_measure(2)) == pytest.approx(1.0)
