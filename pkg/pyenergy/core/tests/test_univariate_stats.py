import pytest
import numpy as np
import numpy.testing as npt
from scipy import stats

from pyenergy.core.univariate_stats import (UnivariateSamplePair, RankedPool, EqualProbabilityBins, ks_statistic,
                                            cvm_statistic, chi2_equal_prob_statistic)
from pyenergy.core.errors import InsufficientSample, DegenerateBins, UnsupportedDimension


def test_UnivariateSamplePair():
    pair = UnivariateSamplePair([3.0, 1.0, 2.0], [[5.0], [4.0]])
    npt.assert_array_equal(pair.a, [1.0, 2.0, 3.0])
    npt.assert_array_equal(pair.b, [4.0, 5.0])
    assert (pair.n, pair.m) == (3, 2), "Sample sizes are incorrect"

    values, labels = pair.pooled()
    npt.assert_array_equal(values, [1.0, 2.0, 3.0, 4.0, 5.0])
    npt.assert_array_equal(labels, [True, True, True, False, False])


@pytest.mark.parametrize("a, b, exc", [
    ([], [1.0], InsufficientSample),
    ([[1.0, 2.0]], [1.0], UnsupportedDimension),
    ([1.0, np.nan], [1.0], ValueError),
])
def test_UnivariateSamplePair_fail(a, b, exc):
    with pytest.raises(exc):
        UnivariateSamplePair(a, b)


@pytest.mark.parametrize("a, b, expected", [
    ([1.0, 2.0], [3.0, 4.0], 1.0),
    ([1.0, 3.0], [2.0, 4.0], 0.5),
    ([1.0, 2.0, 2.0, 5.0], [5.0, 2.0, 1.0, 2.0], 0.0),
])
def test_ks_statistic(a, b, expected):
    npt.assert_almost_equal(ks_statistic((a, b)), expected)


def test_ks_statistic_scipy():
    rng = np.random.default_rng(71)
    for _ in range(20):
        a = np.round(rng.normal(size=int(rng.integers(5, 40))), 1)
        b = np.round(rng.normal(0.3, size=int(rng.integers(5, 40))), 1)
        npt.assert_almost_equal(ks_statistic((a, b)), stats.ks_2samp(a, b).statistic)


@pytest.mark.parametrize("a, b, expected", [
    ([1.0, 2.0, 3.0], [3.0, 2.0, 1.0], 0.0),
    ([1.0], [2.0], 0.25),
    ([1.0, 2.0], [3.0, 4.0], 0.375),
])
def test_cvm_statistic(a, b, expected):
    npt.assert_almost_equal(cvm_statistic((a, b)), expected)


def test_cvm_statistic_ties():
    # Tied values: each distinct value is counted with the multiplicity of the tie
    a, b = [1.0, 1.0, 2.0], [1.0, 3.0]
    # Distinct values 1, 2, 3: F = 2/3, 1, 1; G = 1/2, 1/2, 1; multiplicities 3, 1, 1
    expected = 3 * 2 / 25 * (3 * (2 / 3 - 1 / 2) ** 2 + (1 - 1 / 2) ** 2)
    npt.assert_almost_equal(cvm_statistic((a, b)), expected)


def test_RankedPool_block():
    rng = np.random.default_rng(5)
    values = rng.normal(size=12)
    ranked = RankedPool(values)
    labels = np.array([rng.permutation(np.arange(12) < 5) for _ in range(10)])
    ks_block, cvm_block = ranked.ks(labels, 5, 7), ranked.cvm(labels, 5, 7)
    for k in range(10):
        pair = (values[labels[k]], values[~labels[k]])
        npt.assert_almost_equal(ks_block[k], ks_statistic(pair))
        npt.assert_almost_equal(cvm_block[k], cvm_statistic(pair))


def test_chi2_statistic_1():
    npt.assert_almost_equal(chi2_equal_prob_statistic(([1, 2, 3, 4], [5, 6, 7, 8]), 2), 8.0)


def test_chi2_statistic_2():
    # Identical samples with N divisible by 2k: perfect balance
    a = np.arange(10, dtype=float)
    npt.assert_almost_equal(chi2_equal_prob_statistic((a, a + 0.5), 5), 0.0)


def test_EqualProbabilityBins():
    bins = EqualProbabilityBins([4.0, 1.0, 3.0, 2.0, 6.0, 5.0], 3)
    npt.assert_array_almost_equal(bins.edges, [2.5, 4.5])
    npt.assert_array_equal(bins.pooled_counts, [2, 2, 2])
    labels = np.array([[True, True, False, False, True, False]])
    npt.assert_array_equal(bins.counts(labels), [[1, 1, 1]])


def test_EqualProbabilityBins_edge_values():
    # Observations equal to an edge are placed in the lower bin
    bins = EqualProbabilityBins([1.0, 2.0, 3.0, 3.0, 3.0, 4.0, 5.0, 6.0], 2)
    npt.assert_array_almost_equal(bins.edges, [3.0])
    npt.assert_array_equal(bins.pooled_counts, [5, 3])


@pytest.mark.parametrize("values, n_bins, exc", [
    ([1.0, 2.0, 3.0], 2, InsufficientSample),
    ([1.0, 2.0, 3.0, 4.0], 1, ValueError),
    ([1.0, 1.0, 1.0, 1.0, 2.0, 3.0], 3, DegenerateBins),
    ([5.0] * 8, 2, DegenerateBins),
])
def test_EqualProbabilityBins_fail(values, n_bins, exc):
    with pytest.raises(exc):
        EqualProbabilityBins(values, n_bins)


@pytest.mark.parametrize("transform", [np.exp, lambda x: x ** 3, lambda x: 10.0 * x - 4.0, np.arctan])
def test_statistics_rank_invariance(transform):
    rng = np.random.default_rng(83)
    a, b = rng.normal(size=17), rng.normal(0.5, 1.5, size=23)
    a2, b2 = transform(a), transform(b)
    npt.assert_almost_equal(ks_statistic((a2, b2)), ks_statistic((a, b)))
    npt.assert_almost_equal(cvm_statistic((a2, b2)), cvm_statistic((a, b)))
    npt.assert_almost_equal(chi2_equal_prob_statistic((a2, b2), 5), chi2_equal_prob_statistic((a, b), 5))
    assert 0 <= ks_statistic((a, b)) <= 1, "KS statistic is out of range"
