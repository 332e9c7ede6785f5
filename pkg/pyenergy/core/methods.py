r"""
Registry of the two-sample test methods. Each method binds a name to a vectorized
statistic (see ``permutation`` module) and the rejection tail.
"""
from dataclasses import dataclass

from .errors import UnsupportedDimension
from .samples import Sample, pool, standardize as standardize_pool, distance_matrix
from .kernels import EnergyEvaluator, parse_kernel
from .graph_stats import minimum_spanning_tree, friedman_rafsky_block, nearest_neighbors, nearest_neighbor_block
from .univariate_stats import RankedPool, EqualProbabilityBins
from .permutation import (permutation_null, p_value, critical_value, TestOutcome, TAIL_HIGH, TAIL_LOW,
                          EXHAUSTIVE_CAP_DEFAULT)

import logging
logger = logging.getLogger()


@dataclass(frozen=True)
class Method:
    name: str
    tail: str
    univariate: bool
    description: str


_methods = {
    "energy": Method("energy", TAIL_HIGH, False, "energy statistic"),
    "fr": Method("fr", TAIL_LOW, False, "Friedman-Rafsky minimum spanning tree statistic"),
    "nn": Method("nn", TAIL_HIGH, False, "nearest neighbor statistic"),
    "ks": Method("ks", TAIL_HIGH, True, "Kolmogorov-Smirnov statistic"),
    "cvm": Method("cvm", TAIL_HIGH, True, "Cramer-von Mises statistic"),
    "chi2": Method("chi2", TAIL_HIGH, True, "chi-square statistic with equal probability bins"),
}


def supported_methods():
    """Returns the tuple of names of supported methods"""
    return tuple(_methods.keys())


def get_method(name):
    r"""
    Returns the method with the given name.

    Raises
    ------

    ValueError
        the method is not supported
    """
    try:
        return _methods[name]
    except KeyError:
        raise ValueError(f"Unknown method '{name}'. Supported methods: {supported_methods()}")


def parse_methods(methods):
    r"""
    Converts comma-separated string (e.g. ``"energy,fr,nn"``) or a list of method names
    to the list of validated names. Repeated names are removed.
    """
    if isinstance(methods, str):
        methods = [_.strip() for _ in methods.split(",") if _.strip()]
    names = []
    for name in methods:
        get_method(name)
        if name not in names:
            names.append(name)
    if not names:
        raise ValueError("At least one method must be specified")
    return names


class PoolGeometry:
    r"""
    Label-independent structures of one pooled sample shared by all methods and all
    relabelings: the distance matrix, the minimum spanning tree and the nearest neighbors.
    The tree and the neighbors are built on first use.
    """

    def __init__(self, lpool, dm=None):
        self.lpool = lpool
        self.dm = dm if dm is not None else distance_matrix(lpool)
        self._mst = None
        self._neighbors = None

    @property
    def mst(self):
        if self._mst is None:
            self._mst = minimum_spanning_tree(self.dm)
        return self._mst

    @property
    def neighbors(self):
        if self._neighbors is None:
            self._neighbors = nearest_neighbors(self.dm)
        return self._neighbors


def prepare_statistic(name, geometry, *, kernel="log", bins=5):
    r"""
    Creates the vectorized statistic of the method for the pooled sample.

    Parameters
    ----------

    name : str
        method name

    geometry : PoolGeometry
        pooled sample and its label-independent structures

    kernel : str or DistanceKernel
        distance kernel of the energy statistic

    bins : int
        the number of chi-square bins

    Returns
    -------

    callable
        ``statistic_fn(dm, labels_block, n, m)`` returning the array of statistic values

    Raises
    ------

    UnsupportedDimension
        one-dimensional method is applied to multivariate data
    """
    method = get_method(name)
    if method.univariate and geometry.lpool.d != 1:
        raise UnsupportedDimension(f"Method '{name}' requires one-dimensional data: d={geometry.lpool.d}")

    if name == "energy":
        evaluator = EnergyEvaluator(geometry.dm, parse_kernel(kernel))
        return lambda dm, labels, n, m: evaluator.evaluate_block(labels, n, m)
    elif name == "fr":
        mst = geometry.mst
        return lambda dm, labels, n, m: friedman_rafsky_block(mst, labels)
    elif name == "nn":
        neighbors = geometry.neighbors
        return lambda dm, labels, n, m: nearest_neighbor_block(neighbors, labels)
    elif name in ("ks", "cvm"):
        ranked = RankedPool(geometry.lpool.points[:, 0])
        fn = ranked.ks if name == "ks" else ranked.cvm
        return lambda dm, labels, n, m: fn(labels, n, m)
    else:
        ep_bins = EqualProbabilityBins(geometry.lpool.points[:, 0], bins)
        return lambda dm, labels, n, m: ep_bins.chi2(labels, n, m)


def observed_statistic(statistic_fn, geometry):
    r"""
    Evaluates the statistic for the observed labeling of the pool.
    """
    lpool = geometry.lpool
    return float(statistic_fn(geometry.dm, lpool.labels.reshape(1, -1), lpool.n, lpool.m)[0])


def two_sample_test(a, b, method="energy", *, seed, permutations=1000, alpha=0.05, kernel="log",
                    min_distance=None, standardize=False, bins=5, exhaustive_cap=EXHAUSTIVE_CAP_DEFAULT,
                    threads=1):
    r"""
    Permutation test of the hypothesis that the samples ``a`` and ``b`` are drawn from
    the same distribution.

    Parameters
    ----------

    a, b : Sample or array-like
        the samples, arrays of shape ``(n, d)`` and ``(m, d)`` (1D arrays are treated as ``d=1``)

    method : str
        the name of the test statistic: ``energy``, ``fr``, ``nn``, ``ks``, ``cvm`` or ``chi2``

    seed : int
        seed of the random stream used to draw permutations

    permutations : int
        the number of random relabelings B

    alpha : float
        significance level used to compute the critical value

    kernel : str
        distance kernel of the energy statistic: ``log``, ``power:<kappa>`` or ``gauss:<sigma>``

    min_distance : float or None
        distance floor for kernels singular at zero distance

    standardize : bool
        normalize each coordinate of the pooled sample to zero mean and unit variance

    bins : int
        the number of bins of the chi-square statistic

    exhaustive_cap : int
        all partitions are enumerated if their number does not exceed the cap

    threads : int
        the number of threads used to evaluate the statistic for relabelings

    Returns
    -------

    TestOutcome
    """
    a = a if isinstance(a, Sample) else Sample(a)
    b = b if isinstance(b, Sample) else Sample(b)
    lpool = pool(a, b)
    if standardize:
        lpool = standardize_pool(lpool)
    geometry = PoolGeometry(lpool)

    m_info = get_method(method)
    kernel = parse_kernel(kernel, min_distance=min_distance)
    statistic_fn = prepare_statistic(method, geometry, kernel=kernel, bins=bins)
    observed = observed_statistic(statistic_fn, geometry)
    null = permutation_null(lpool, geometry.dm, statistic_fn, permutations, seed, tail=m_info.tail,
                            exhaustive_cap=exhaustive_cap, threads=threads)

    options = {"standardized": bool(standardize)}
    if method == "energy":
        options["kernel"] = str(kernel)
        if kernel.min_distance is not None:
            options["min_distance"] = kernel.min_distance
    if method == "chi2":
        options["bins"] = int(bins)

    crit = critical_value(null, alpha) if null.B * alpha >= 1 else float("nan")
    outcome = TestOutcome(method=method, statistic=observed, p_value=p_value(null, observed),
                          critical_value=crit, alpha=alpha, B=null.B, seed=seed,
                          n=lpool.n, m=lpool.m, d=lpool.d, tail=m_info.tail,
                          exhaustive=null.exhaustive, options=options)
    logger.debug(f"Test '{method}': statistic={observed:.6g}, p-value={outcome.p_value:.6g}")
    return outcome
