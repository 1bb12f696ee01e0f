import math

import numpy as np
import pytest

from qcm import generators as gen
from qcm.classical import map_norm
from qcm.duality import spectrum
from qcm.errors import UnknownSuite
from qcm.properties import SUITES, run_property_suite


def test_generation_is_reproducible():
    def draw(seed):
        rng = np.random.default_rng(seed)
        s, t = gen.random_space(rng), gen.random_space(rng)
        f = gen.random_map(rng, s, t)
        a = gen.random_algebra(rng)
        phi = gen.random_positive_functional(rng, a)
        return s.weights.tobytes() + t.weights.tobytes() + repr(sorted(f.mapping.items())).encode() \
            + a.structure.tobytes() + phi.coeffs.tobytes()
    assert draw(11) == draw(11)
    assert draw(11) != draw(12)


def test_space_generator_ranges():
    rng = np.random.default_rng(0)
    sizes, zeros = set(), 0
    for _ in range(300):
        s = gen.random_space(rng)
        sizes.add(len(s))
        zeros += int(np.sum(s.weights == 0))
        assert np.all((s.weights >= 0) & (s.weights <= 1))
    assert sizes == {2, 3, 4, 5, 6}
    assert zeros > 0


def test_zero_weights_reach_unbounded_branch():
    rng = np.random.default_rng(1)
    hits = sum(math.isinf(map_norm(gen.random_map(rng, gen.random_space(rng), gen.random_space(rng))))
               for _ in range(200))
    assert hits > 0


def test_commutative_generator_is_semisimple():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a = gen.random_commutative_algebra(rng)
        assert a.dim <= 4 and a.is_commutative()
        assert spectrum(a).size == a.dim


def test_random_algebras_stay_small():
    rng = np.random.default_rng(3)
    for _ in range(100):
        assert gen.random_algebra(rng).dim <= 10


def test_random_subset_is_proper():
    rng = np.random.default_rng(4)
    for _ in range(100):
        assert len(gen.random_subset(rng, 3)) < 3


def test_block_ideal_is_proper():
    rng = np.random.default_rng(5)
    for _ in range(30):
        a = gen.random_block_algebra(rng)
        assert gen.random_block_ideal(rng, a).is_proper()


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_each_suite_passes(suite):
    (result,) = run_property_suite(suite, 40, seed=7)
    assert result.ok, result.to_dict()
    assert result.checks


def test_classical_norms_suite_seed_7():
    (result,) = run_property_suite("classical-norms", 200, seed=7)
    assert result.ok
    assert all(c.passed == 200 for c in result.checks.values() if c.name.startswith("oracle"))


def test_gns_suite_reproduction():
    (result,) = run_property_suite("gns", 200, seed=0)
    assert result.check("reproduction").max_residual <= 1e-9


def test_all_suites_aggregate():
    results = run_property_suite("all", 50, seed=0)
    assert [r.suite for r in results] == list(SUITES)
    assert all(r.ok for r in results)


def test_suite_is_deterministic():
    a = run_property_suite("conditioning", 30, seed=3)[0].to_dict()
    b = run_property_suite("conditioning", 30, seed=3)[0].to_dict()
    assert a == b


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_property_suite("nope", 1, 0)
