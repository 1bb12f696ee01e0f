import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcm.errors import DimensionMismatch, NonHermitian, NotPsd
from qcm.linalg import (UNBOUNDED, Frame, complement, hermitian_eig, min_eig_psd, orthonormalize, pencil_max,
                        split)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return z + z.conj().T


def random_psd(rng, n, rank=None):
    g = rng.standard_normal((rank or n, n)) + 1j * rng.standard_normal((rank or n, n))
    return g.conj().T @ g


def test_eig_identity():
    w, v = hermitian_eig(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    assert v.orthonormality_defect() < 1e-12


def test_eig_diagonal_gives_standard_basis():
    w, v = hermitian_eig(np.diag([1.0, 2.0]))
    assert np.allclose(w, [1, 2])
    assert np.allclose(v.vectors, np.eye(2))


def test_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonHermitian):
        hermitian_eig(np.zeros((2, 3)))


def test_eig_rejects_nonfinite():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[np.nan, 0], [0, 1]]))


@given(seeds, st.integers(1, 6))
def test_eig_reconstruction(seed, n):
    m = random_hermitian(np.random.default_rng(seed), n)
    w, v = hermitian_eig(m)
    assert np.all(np.diff(w) >= -1e-12)
    rebuilt = (v.vectors * w) @ v.vectors.conj().T
    assert np.max(np.abs(rebuilt - m)) <= 1e-9 * max(1.0, np.max(np.abs(m)))


def test_eig_is_deterministic():
    m = random_hermitian(np.random.default_rng(4), 5)
    a, b = hermitian_eig(m), hermitian_eig(m.copy())
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1].vectors, b[1].vectors)


def test_min_eig_examples():
    assert min_eig_psd(np.diag([0.0, 1.0])) == (0.0, True)
    lo, ok = min_eig_psd(np.diag([-1.0, 1.0]))
    assert lo == pytest.approx(-1.0) and not ok


@given(seeds, st.integers(1, 5), st.integers(1, 7))
def test_gram_of_vectors_is_psd(seed, n, k):
    rng = np.random.default_rng(seed)
    vs = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
    assert min_eig_psd(vs.conj() @ vs.T)[1]


def test_orthonormalize_examples():
    assert orthonormalize([np.array([1, 0]), np.array([2, 0])]).size == 1
    assert orthonormalize([np.array([1, 0]), np.array([0, 1])]).size == 2
    assert orthonormalize([], ambient_dim=3).size == 0


def test_orthonormalize_dimension_checks():
    with pytest.raises(DimensionMismatch):
        orthonormalize([np.ones(2), np.ones(3)])
    with pytest.raises(DimensionMismatch):
        orthonormalize([np.ones(2)], ambient_dim=3)


@given(seeds, st.integers(1, 5), st.integers(1, 10))
def test_orthonormalize_rank_matches_gram_rank(seed, n, k):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, n + 1))
    low = rng.standard_normal((k, r)) @ rng.standard_normal((r, n))
    frame = orthonormalize(list(low))
    w = np.linalg.eigvalsh(low.T @ low)
    assert frame.size == int(np.sum(w > 1e-8 * max(1.0, w[-1])))
    assert frame.orthonormality_defect() < 1e-10


def test_split_examples():
    f = Frame(2, np.array([[1.0], [0.0]]))
    inside, orth = split(f, np.array([3.0, 4.0]))
    assert np.allclose(inside, [3, 0]) and np.allclose(orth, [0, 4])
    inside, orth = split(Frame.empty(2), np.array([3.0, 4.0]))
    assert np.allclose(inside, 0) and np.allclose(orth, [3, 4])
    with pytest.raises(DimensionMismatch):
        split(f, np.ones(3))


@given(seeds, st.integers(1, 6))
def test_split_pythagoras(seed, n):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, n + 1))
    f = orthonormalize(list(rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))), ambient_dim=n)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    inside, orth = split(f, v)
    assert abs(np.vdot(v, v) - np.vdot(inside, inside) - np.vdot(orth, orth)) <= 1e-9 * max(1.0, np.vdot(v, v).real)
    assert np.max(np.abs(f.vectors.conj().T @ orth), initial=0.0) < 1e-12


def test_complement_spans_the_rest():
    f = orthonormalize([np.array([1, 1, 0])])
    c = complement(f)
    assert c.size == 2
    assert np.allclose(f.projector() + c.projector(), np.eye(3))


def test_pencil_examples():
    assert pencil_max(np.eye(3), np.eye(3)) == pytest.approx(1.0)
    assert pencil_max(2 * np.eye(3), np.eye(3)) == pytest.approx(2.0)
    assert pencil_max(np.eye(2), np.diag([1.0, 0.0])) == UNBOUNDED
    assert pencil_max(np.diag([1.0, 0.0]), np.diag([1.0, 0.0])) == pytest.approx(1.0)
    assert pencil_max(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0


def test_pencil_rejects_non_psd():
    with pytest.raises(NotPsd):
        pencil_max(np.diag([-1.0, 1.0]), np.eye(2))
    with pytest.raises(NotPsd):
        pencil_max(np.eye(2), np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionMismatch):
        pencil_max(np.eye(2), np.eye(3))


@pytest.mark.parametrize("seed", range(5))
def test_pencil_matches_sampling(seed):
    rng = np.random.default_rng(seed)
    n = 4
    num, den = random_psd(rng, n), random_psd(rng, n)
    x = rng.standard_normal((100_000, n)) + 1j * rng.standard_normal((100_000, n))
    ratios = np.einsum("ki,ij,kj->k", x.conj(), num, x).real / np.einsum("ki,ij,kj->k", x.conj(), den, x).real
    exact = pencil_max(num, den)
    assert ratios.max() <= exact * (1 + 1e-9)
    # the supremum is attained by the top whitened eigenvector (Cholesky whitening)
    ci = np.linalg.inv(np.linalg.cholesky(den))
    w, u = np.linalg.eigh(ci @ num @ ci.conj().T)
    best = ci.conj().T @ u[:, -1]
    attained = np.vdot(best, num @ best).real / np.vdot(best, den @ best).real
    assert exact == pytest.approx(attained, rel=1e-9)
    assert exact == pytest.approx(w[-1], rel=1e-9)


@settings(max_examples=50)
@given(seeds)
def test_pencil_kernel_mass_is_unbounded(seed):
    rng = np.random.default_rng(seed)
    den = random_psd(rng, 3, rank=2)
    assert math.isinf(pencil_max(np.eye(3), den))
