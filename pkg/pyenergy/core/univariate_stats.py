r"""
One-dimensional two-sample statistics: Kolmogorov-Smirnov, Cramer-von Mises and
chi-square with equal probability bins.

All statistics depend only on the ranks of the pooled observations. Sorting and binning
of the pooled sample is done once (``RankedPool``, ``EqualProbabilityBins``), after which
the statistics may be evaluated for blocks of relabelings of the pool.
"""
from dataclasses import dataclass
import numpy as np

from .errors import InsufficientSample, DegenerateBins, UnsupportedDimension

import logging
logger = logging.getLogger()


def _as_1d(values, name="values"):
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        if values.shape[1] != 1:
            raise UnsupportedDimension(f"Univariate statistics require one-dimensional data: "
                                       f"'{name}' has {values.shape[1]} coordinates")
        values = values[:, 0]
    if values.ndim != 1:
        raise UnsupportedDimension(f"Univariate statistics require one-dimensional data: "
                                   f"'{name}' has shape {values.shape}")
    return values


@dataclass(frozen=True, eq=False)
class UnivariateSamplePair:
    r"""
    Pair of one-dimensional samples, each sorted in ascending order.
    """
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.sort(_as_1d(self.a, "a"))
        b = np.sort(_as_1d(self.b, "b"))
        if a.size < 1 or b.size < 1:
            raise InsufficientSample(f"Both samples must contain at least one observation: "
                                     f"n={a.size}, m={b.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("Samples contain non-finite values")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return self.a.size

    @property
    def m(self):
        return self.b.size

    def pooled(self):
        r"""
        Returns pooled values and labels (``True`` - sample ``a``).
        """
        values = np.concatenate((self.a, self.b))
        labels = np.concatenate((np.ones(self.n, dtype=bool), np.zeros(self.m, dtype=bool)))
        return values, labels


class RankedPool:
    r"""
    Sorted pooled sample. Empirical CDFs of the two samples are evaluated at
    the distinct pooled values (right-continuous CDFs, tied observations share the value).

    Parameters
    ----------

    values : array-like
        pooled one-dimensional observations (N values)
    """

    def __init__(self, values):
        values = _as_1d(values)
        self.N = values.size
        self._order = np.argsort(values, kind="stable")
        v_sorted = values[self._order]
        # Index of the last element of each group of tied values in the sorted array
        is_last = np.ones(self.N, dtype=bool)
        is_last[:-1] = v_sorted[1:] != v_sorted[:-1]
        self._group_end = np.flatnonzero(is_last)
        self._group_size = np.diff(np.concatenate(([-1], self._group_end)))

    def cdf_differences(self, labels_block, n, m):
        r"""
        Returns the differences ``F_n(z) - G_m(z)`` evaluated at the distinct pooled values
        for each row of the ``(K, N)`` block of labelings. Shape of the result is ``(K, G)``,
        where ``G`` is the number of distinct values.
        """
        if n < 1 or m < 1:
            raise InsufficientSample(f"Both samples must contain at least one observation: n={n}, m={m}")
        labels_block = np.asarray(labels_block, dtype=bool)
        labels_sorted = labels_block[:, self._order]
        count_a = np.cumsum(labels_sorted, axis=1)[:, self._group_end]
        count_b = (self._group_end + 1) - count_a
        return count_a / n - count_b / m

    def ks(self, labels_block, n, m):
        """Kolmogorov-Smirnov statistic for each labeling of the block"""
        return np.max(np.abs(self.cdf_differences(labels_block, n, m)), axis=1)

    def cvm(self, labels_block, n, m):
        """Cramer-von Mises statistic for each labeling of the block"""
        dif = self.cdf_differences(labels_block, n, m)
        return n * m / self.N ** 2 * np.sum(np.square(dif) * self._group_size, axis=1)


class EqualProbabilityBins:
    r"""
    Bins with equal pooled content: the edge ``i`` (``i = 1 .. k-1``) is the midpoint between
    the order statistics of the pooled sample straddling the rank ``i * N / k``.
    Observations equal to an edge are placed in the lower bin.

    Parameters
    ----------

    values : array-like
        pooled one-dimensional observations (N values)

    bins : int
        the number of bins k, ``k >= 2``, ``N >= 2k``

    Raises
    ------

    InsufficientSample
        ``N < 2k``

    DegenerateBins
        ties of the pooled values leave some bin with zero width (no pooled observations)
    """

    def __init__(self, values, bins):
        values = _as_1d(values)
        bins = int(bins)
        if bins < 2:
            raise ValueError(f"The number of bins must be at least 2: {bins}")
        n_pts = values.size
        if n_pts < 2 * bins:
            raise InsufficientSample(f"Chi-square test with {bins} bins requires at least {2 * bins} "
                                     f"pooled observations: N={n_pts}")
        v_sorted = np.sort(values)
        # 0-based index of the order statistic of rank floor(i * N / k)
        lower = (np.arange(1, bins) * n_pts) // bins - 1
        self.edges = (v_sorted[lower] + v_sorted[lower + 1]) / 2
        self.bins = bins
        self.N = n_pts

        self._bin_index = np.searchsorted(self.edges, values, side="left")
        self._one_hot = np.zeros((n_pts, bins), dtype=np.int64)
        self._one_hot[np.arange(n_pts), self._bin_index] = 1
        self.pooled_counts = self._one_hot.sum(axis=0)
        if np.any(np.diff(self.edges) <= 0) or np.any(self.pooled_counts == 0):
            raise DegenerateBins(f"Equal probability bins can not be constructed because of tied "
                                 f"observations: pooled bin counts {self.pooled_counts.tolist()}")

    def counts(self, labels_block):
        r"""
        Returns the counts of A-labeled observations per bin, array of shape ``(K, k)``.
        """
        labels_block = np.asarray(labels_block, dtype=bool)
        return labels_block.astype(np.int64) @ self._one_hot

    def chi2(self, labels_block, n, m):
        """Chi-square statistic for each labeling of the block"""
        count_a = self.counts(labels_block)
        count_b = self.pooled_counts - count_a
        exp_a, exp_b = n / self.bins, m / self.bins
        return np.sum(np.square(count_a - exp_a) / exp_a + np.square(count_b - exp_b) / exp_b, axis=1)


def _pooled(pair):
    if not isinstance(pair, UnivariateSamplePair):
        pair = UnivariateSamplePair(*pair)
    values, labels = pair.pooled()
    return pair, values, labels.reshape(1, -1)


def ks_statistic(pair):
    r"""
    Two-sample Kolmogorov-Smirnov statistic ``D = sup |F_n(x) - G_m(x)|``.

    Parameters
    ----------

    pair : UnivariateSamplePair or tuple(array-like, array-like)
        two one-dimensional samples

    Returns
    -------

    float
        ``0 <= D <= 1``
    """
    pair, values, labels = _pooled(pair)
    return float(RankedPool(values).ks(labels, pair.n, pair.m)[0])


def cvm_statistic(pair):
    r"""
    Two-sample Cramer-von Mises statistic

        T = n*m/N**2 * sum_z (F_n(z) - G_m(z))**2

    where the sum runs over all N pooled observations.
    """
    pair, values, labels = _pooled(pair)
    return float(RankedPool(values).cvm(labels, pair.n, pair.m)[0])


def chi2_equal_prob_statistic(pair, bins):
    r"""
    Chi-square statistic with ``bins`` equal probability bins built from the pooled sample

        X2 = sum_i (a_i - n/k)**2 / (n/k) + (b_i - m/k)**2 / (m/k)

    where ``a_i`` and ``b_i`` are the numbers of observations of the two samples in bin ``i``.
    See ``EqualProbabilityBins`` for the construction of the bins and raised exceptions.
    """
    pair, values, labels = _pooled(pair)
    return float(EqualProbabilityBins(values, bins).chi2(labels, pair.n, pair.m)[0])
