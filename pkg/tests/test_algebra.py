import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcm.algebra import (AlgebraHom, center, compose_homs, direct_sum, function_algebra, ideal_closure,
                         ideal_from_vectors, identity_hom, is_simple, matrix_algebra, multiply, quotient,
                         same_algebra, star, subalgebra_from_generators, unit)
from qcm.errors import AlgebraMismatch, DimensionMismatch, ImproperIdeal, NotStarClosed
from qcm.generators import random_algebra, random_complex, random_element

seeds = st.integers(min_value=0, max_value=2**32 - 1)
TOL = 1e-9


def assert_algebra_ok(a, tol=TOL):
    res = a.invariant_residuals()
    assert all(v <= tol for v in res.values()), res


def test_function_algebra_small_cases():
    one = function_algebra(1)
    assert one.dim == 1 and np.allclose(one.unit, [1])
    two = function_algebra(2)
    d1, d2 = two.basis(0), two.basis(1)
    assert np.allclose(two.mul(d1, d2), 0)
    assert np.allclose(two.mul(d1, d1), d1)
    assert_algebra_ok(function_algebra(3))
    with pytest.raises(ValueError):
        function_algebra(0)


def test_function_algebra_is_pointwise():
    a = function_algebra(4)
    x, y = np.array([1, 2j, 3, -1]), np.array([2, 1, 1j, 5])
    assert np.allclose(a.mul(x, y), x * y)
    assert np.allclose(a.star(x), np.conj(x))


def test_matrix_units():
    m = matrix_algebra(2)
    e12, e21, e11 = m.basis(1), m.basis(2), m.basis(0)
    assert np.allclose(m.mul(e12, e21), e11)
    assert not np.allclose(m.mul(e12, e21), m.mul(e21, e12))
    assert not m.is_commutative()
    assert matrix_algebra(1).dim == 1
    for n in (1, 2, 3):
        assert_algebra_ok(matrix_algebra(n))


def test_element_operators():
    m = matrix_algebra(2)
    x, y = m.element([1, 2, 3, 4]), m.element([0, 1j, 0, 1])
    assert (x * unit(m)).allclose(x)
    assert (unit(m) * x).allclose(x)
    assert np.allclose(m.represent(multiply(x, y).coords), m.represent(x.coords) @ m.represent(y.coords))
    assert np.allclose(m.represent(star(x).coords), m.represent(x.coords).conj().T)
    assert ((x + y) - y).allclose(x)
    assert (2 * x).allclose(x * 2)
    with pytest.raises(AlgebraMismatch):
        x + function_algebra(4).element([1, 1, 1, 1])
    with pytest.raises(DimensionMismatch):
        m.element([1, 2])


@settings(max_examples=50)
@given(seeds)
def test_random_products_follow_representation(seed):
    rng = np.random.default_rng(seed)
    a = random_algebra(rng)
    assert_algebra_ok(a)
    x, y = random_element(rng, a), random_element(rng, a)
    lhs = a.represent(a.mul(x, y))
    rhs = a.represent(x) @ a.represent(y)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_subalgebra_examples():
    assert subalgebra_from_generators(3, []).dim == 1
    diag = subalgebra_from_generators(2, [np.diag([1, 2])])
    assert diag.dim == 2 and diag.is_commutative()
    full = subalgebra_from_generators(2, [np.array([[0, 1], [0, 0]])])
    assert full.dim == 4
    for a in (diag, full):
        assert_algebra_ok(a)


def test_direct_sum_examples():
    assert np.array_equal(direct_sum(function_algebra(1), function_algebra(1)).structure,
                          function_algebra(2).structure)
    assert direct_sum(matrix_algebra(2), function_algebra(1)).dim == 5
    s = direct_sum(function_algebra(2), function_algebra(3))
    assert same_algebra(s, function_algebra(5))
    assert_algebra_ok(s)


def test_ideal_closure_examples():
    assert ideal_closure(function_algebra(3), [np.zeros(3)]).dim == 0
    i = ideal_closure(function_algebra(2), [np.array([1, 0])])
    assert i.dim == 1 and i.contains(np.array([5, 0])) and not i.contains(np.array([0, 1]))
    assert ideal_closure(matrix_algebra(2), [matrix_algebra(2).basis(0)]).dim == 4


@settings(max_examples=50)
@given(seeds)
def test_ideal_closure_is_two_sided_and_star_closed(seed):
    rng = np.random.default_rng(seed)
    a = random_algebra(rng)
    i = ideal_closure(a, [random_element(rng, a) * (rng.uniform() < 0.7)])
    assert i.two_sided_residual() <= 1e-9
    assert i.star_residual() <= 1e-9


def test_quotient_examples():
    a = function_algebra(3)
    q, p = quotient(a, ideal_closure(a, []))
    assert q.dim == 3
    assert np.allclose(p.matrix.conj().T @ p.matrix, np.eye(3))
    q, p = quotient(a, ideal_closure(a, [a.basis(2)]))
    assert q.dim == 2 and q.is_commutative()
    assert_algebra_ok(q)
    assert max(p.invariant_residuals().values()) <= TOL
    m = matrix_algebra(2)
    with pytest.raises(ImproperIdeal):
        quotient(m, ideal_closure(m, [m.basis(1)]))


def test_quotient_rejects_non_star_closed_span():
    m = direct_sum(matrix_algebra(2), function_algebra(1))
    with pytest.raises(NotStarClosed):
        quotient(m, ideal_from_vectors(m, [m.basis(1)]))
    with pytest.raises(AlgebraMismatch):
        quotient(function_algebra(2), ideal_closure(function_algebra(3), []))


@settings(max_examples=40)
@given(seeds)
def test_quotient_of_random_block_ideal(seed):
    rng = np.random.default_rng(seed)
    a = direct_sum(matrix_algebra(2), direct_sum(function_algebra(1), matrix_algebra(1)))
    keep = int(rng.integers(0, 3))
    gens = [a.basis(k) for k in ([0, 3], [4], [5])[keep]]
    i = ideal_closure(a, gens)
    q, p = quotient(a, i)
    assert q.dim == a.dim - i.dim
    assert_algebra_ok(q)
    assert max(p.invariant_residuals().values()) <= TOL
    for v in i.frame:
        assert np.allclose(p(v), 0, atol=1e-10)


def test_simplicity():
    assert is_simple(matrix_algebra(2)) and is_simple(matrix_algebra(3))
    assert is_simple(function_algebra(1))
    assert not is_simple(function_algebra(2))
    assert not is_simple(direct_sum(matrix_algebra(2), function_algebra(1)))
    assert center(matrix_algebra(3)).size == 1
    assert center(function_algebra(4)).size == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nonzero_elements_generate_full_matrix_algebra(n):
    rng = np.random.default_rng(n)
    m = matrix_algebra(n)
    for _ in range(5):
        assert ideal_closure(m, [random_complex(rng, m.dim)]).dim == m.dim


def test_homs():
    a = function_algebra(3)
    assert max(identity_hom(a).invariant_residuals().values()) == 0.0
    swap = AlgebraHom(a, a, np.eye(3)[[1, 0, 2]])
    assert max(swap.invariant_residuals().values()) == 0.0
    assert np.allclose(compose_homs(swap, swap).matrix, np.eye(3))
    bad = AlgebraHom(a, a, 2 * np.eye(3))
    with pytest.raises(ValueError):
        bad.check()
    with pytest.raises(DimensionMismatch):
        AlgebraHom(a, function_algebra(2), np.eye(3))
    with pytest.raises(AlgebraMismatch):
        compose_homs(identity_hom(a), identity_hom(function_algebra(2)))
