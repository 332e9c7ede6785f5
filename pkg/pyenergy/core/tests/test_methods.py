import pytest
import numpy as np
import numpy.testing as npt

from pyenergy.core.samples import Sample, pool
from pyenergy.core.methods import (supported_methods, get_method, parse_methods, PoolGeometry, prepare_statistic,
                                   observed_statistic, two_sample_test)
from pyenergy.core.permutation import TAIL_HIGH, TAIL_LOW
from pyenergy.core.errors import UnsupportedDimension, SingularDistance, InsufficientPermutations


def test_supported_methods():
    assert supported_methods() == ("energy", "fr", "nn", "ks", "cvm", "chi2"), "List of methods is incorrect"
    assert get_method("fr").tail == TAIL_LOW, "The FR statistic rejects for small values"
    assert get_method("energy").tail == TAIL_HIGH, "The energy statistic rejects for large values"
    assert [_ for _ in supported_methods() if get_method(_).univariate] == ["ks", "cvm", "chi2"]


def test_get_method_fail():
    with pytest.raises(ValueError, match="Unknown method 'abc'"):
        get_method("abc")


@pytest.mark.parametrize("methods, expected", [
    ("energy", ["energy"]),
    ("energy, fr,nn", ["energy", "fr", "nn"]),
    ("fr,energy,fr", ["fr", "energy"]),
    (["ks", "cvm"], ["ks", "cvm"]),
])
def test_parse_methods(methods, expected):
    assert parse_methods(methods) == expected, "Methods are parsed incorrectly"


@pytest.mark.parametrize("methods", ["", " , ", [], "energy,xyz"])
def test_parse_methods_fail(methods):
    with pytest.raises(ValueError):
        parse_methods(methods)


def test_PoolGeometry():
    lpool = pool(Sample([0.0, 2.0]), Sample([1.0]))
    geometry = PoolGeometry(lpool)
    npt.assert_array_equal(geometry.neighbors, [2, 2, 0])
    assert geometry.mst is geometry.mst, "Minimum spanning tree must be computed only once"
    assert geometry.mst.count == 2


@pytest.mark.parametrize("method, expected", [
    ("energy", -0.173287),
    ("fr", 2.0),
    ("nn", 0.0),
    ("ks", 0.5),
])
def test_observed_statistic(method, expected):
    lpool = pool(Sample([0.0, 2.0]), Sample([1.0]))
    geometry = PoolGeometry(lpool)
    fn = prepare_statistic(method, geometry)
    npt.assert_almost_equal(observed_statistic(fn, geometry), expected, decimal=6)


@pytest.mark.parametrize("method", ["ks", "cvm", "chi2"])
def test_prepare_statistic_fail(method):
    lpool = pool(Sample(np.arange(20.0).reshape(10, 2)), Sample(np.arange(20.0).reshape(10, 2) + 0.5))
    with pytest.raises(UnsupportedDimension, match="one-dimensional data"):
        prepare_statistic(method, PoolGeometry(lpool))


def test_two_sample_test_separated():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(30, 2))
    b = rng.normal(size=(30, 2)) + 100.0
    for method in ("energy", "fr", "nn"):
        outcome = two_sample_test(a, b, method, seed=42, permutations=999)
        assert outcome.p_value == 0.001, f"Method '{method}': p-value for separated clusters is incorrect"
        assert outcome.rejected, f"Method '{method}': the null hypothesis must be rejected"
        assert (outcome.n, outcome.m, outcome.d, outcome.B) == (30, 30, 2, 999)
        assert not outcome.exhaustive


@pytest.mark.parametrize("method", ["ks", "cvm", "chi2"])
def test_two_sample_test_univariate(method):
    rng = np.random.default_rng(2)
    outcome = two_sample_test(rng.normal(size=40), rng.normal(size=40) + 50.0, method, seed=7,
                              permutations=199)
    assert outcome.p_value == 1 / 200, "p-value for separated samples is incorrect"
    assert outcome.tail == TAIL_HIGH


def test_two_sample_test_options():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=20), rng.normal(size=25)
    outcome = two_sample_test(a, b, "energy", seed=1, permutations=99, kernel="power:0.5", min_distance=1e-8)
    assert outcome.options == {"standardized": False, "kernel": "power:0.5", "min_distance": 1e-8}
    outcome = two_sample_test(a, b, "chi2", seed=1, permutations=99, bins=3, standardize=True)
    assert outcome.options == {"standardized": True, "bins": 3}
    assert outcome.to_dict()["method"] == "chi2"


def test_two_sample_test_determinism():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=(15, 3)), rng.normal(0.3, size=(15, 3))
    p = [two_sample_test(a, b, "energy", seed=11, permutations=200, threads=t).p_value for t in (1, 3)]
    assert p[0] == p[1], "p-value depends on the number of threads"


def test_two_sample_test_exhaustive():
    outcome = two_sample_test([0.0, 2.0], [1.0], "energy", seed=1, permutations=1000)
    assert outcome.exhaustive and outcome.B == 3, "Small pools must be processed exhaustively"
    assert np.isnan(outcome.critical_value), "Critical value is undefined for B * alpha < 1"


def test_two_sample_test_scaling():
    # p-values of all methods are invariant under scaling of the pooled sample
    rng = np.random.default_rng(5)
    a, b = rng.normal(size=(20, 2)), rng.normal(0.5, size=(20, 2))
    for method in ("energy", "fr", "nn"):
        p1 = two_sample_test(a, b, method, seed=3, permutations=199).p_value
        p2 = two_sample_test(5 * a, 5 * b, method, seed=3, permutations=199).p_value
        assert p1 == p2, f"Method '{method}': p-value is not scale invariant"


def test_two_sample_test_standardize():
    rng = np.random.default_rng(6)
    a, b = rng.normal(size=(20, 2)), rng.normal(0.5, size=(20, 2))
    scale = np.array([1.0, 1000.0])
    p1 = two_sample_test(a, b, "energy", seed=3, permutations=199, standardize=True).p_value
    p2 = two_sample_test(a * scale, b * scale, "energy", seed=3, permutations=199, standardize=True).p_value
    npt.assert_almost_equal(p1, p2)


def test_two_sample_test_null_level():
    rng = np.random.default_rng(7)
    n_rep, n_reject = 100, 0
    for r in range(n_rep):
        x = rng.random((30, 2))
        n_reject += two_sample_test(x[:15], x[15:], "energy", seed=r, permutations=99).rejected
    assert n_reject <= 14, f"Too many rejections under the null hypothesis: {n_reject} of {n_rep}"


def test_two_sample_test_fail():
    with pytest.raises(SingularDistance):
        two_sample_test([0.0, 1.0, 2.0], [2.0, 3.0], "energy", seed=1, permutations=99)
    with pytest.raises(InsufficientPermutations):
        two_sample_test(np.arange(10.0), np.arange(10.0) + 0.5, "energy", seed=1, permutations=0)
    with pytest.raises(UnsupportedDimension):
        two_sample_test(np.ones((5, 2)), np.zeros((5, 2)), "ks", seed=1)


def test_two_sample_test_coincident():
    # Observations 1 and 3, 2 and 4 coincide
    with pytest.raises(SingularDistance, match=r"2 pair\(s\): \(1, 3\), \(2, 4\)") as ex_info:
        two_sample_test([0.0, 1.0, 2.0], [1.0, 2.0, 5.0], "energy", seed=1, permutations=99)
    assert ex_info.value.pair == (1, 3), "The first pair of coincident points is not identified"

    outcome = two_sample_test([0.0, 1.0, 2.0], [1.0, 2.0, 5.0], "energy", seed=1, permutations=99,
                              min_distance=1e-6)
    assert np.isfinite(outcome.statistic), "The statistic must be finite if the minimum distance is set"
