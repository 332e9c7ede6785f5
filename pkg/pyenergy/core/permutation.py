r"""
Permutation tests: null distributions obtained by relabeling of the pooled sample,
p-values, critical values and calibration of the achieved significance level.

Statistic functions used with this module are vectorized over labelings:
``statistic_fn(dm, labels_block, n, m)`` receives a boolean array of shape ``(K, N)``
(``True`` marks sample A) and returns the array of K statistic values. The distance
matrix is never modified or recomputed, only the labels change.
"""
import itertools
import multiprocessing.pool
from dataclasses import dataclass, field, asdict
import numpy as np

from .errors import InsufficientPermutations
from .utils import make_stream, n_partitions, STREAM_PERMUTATION
from .samples import Sample, pool, distance_matrix
from .kernels import EnergyEvaluator, DistanceKernel

import logging
logger = logging.getLogger()


TAIL_HIGH = "high"
TAIL_LOW = "low"

# Nulls are computed by enumeration of all partitions if their number does not exceed the cap
EXHAUSTIVE_CAP_DEFAULT = 100_000

# The number of labelings evaluated by one task of the thread pool
_labelings_per_task = 256


@dataclass(frozen=True, eq=False)
class NullDistribution:
    r"""
    Values of a statistic computed for random (or all) relabelings of the pooled sample.
    ``B`` is the number of values. ``exhaustive`` is ``True`` if ``values`` were computed
    for all ``C(N, n)`` partitions of the pool.
    """
    values: np.ndarray
    B: int
    tail: str
    seed: int
    exhaustive: bool = False

    def __post_init__(self):
        if self.tail not in (TAIL_HIGH, TAIL_LOW):
            raise ValueError(f"Unknown rejection tail: '{self.tail}'")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != self.B:
            raise ValueError(f"The number of null values ({values.size}) is not equal to B={self.B}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class TestOutcome:
    r"""
    The result of a permutation test.
    """
    __test__ = False  # Not a test class (prevents collection by pytest)

    method: str
    statistic: float
    p_value: float
    critical_value: float
    alpha: float
    B: int
    seed: int
    n: int
    m: int
    d: int
    tail: str = TAIL_HIGH
    exhaustive: bool = False
    options: dict = field(default_factory=dict)

    @property
    def rejected(self):
        return self.p_value <= self.alpha

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class CalibrationResult:
    r"""
    Central 95% interval of the achieved significance level of the permutation test
    with ``B`` permutations, estimated from ``repeats`` independent critical values.
    """
    B: int
    interval_low: float
    interval_high: float
    repeats: int
    seed: int
    alpha: float = 0.05
    achieved_alpha: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {"B": self.B, "interval_low": self.interval_low, "interval_high": self.interval_high,
                "repeats": self.repeats, "seed": self.seed}


def random_labelings(N, n, B, stream):
    r"""
    Draws ``B`` independent labelings of ``N`` observations, each with exactly ``n``
    A-labels chosen uniformly without replacement. Row ``b`` of the result is labeling ``b``.

    Parameters
    ----------

    N, n : int
        pool size and the size of sample A

    B : int
        the number of labelings

    stream : numpy.random.Generator
        random number generator

    Returns
    -------

    ndarray(bool)
        array of shape ``(B, N)``
    """
    keys = stream.random((B, N))
    selected = np.argsort(keys, axis=1, kind="stable")[:, :n]
    labels = np.zeros((B, N), dtype=bool)
    np.put_along_axis(labels, selected, True, axis=1)
    return labels


def all_labelings(N, n):
    r"""
    Enumerates all ``C(N, n)`` labelings of ``N`` observations with ``n`` A-labels
    (lexicographic order of the sets of A-indices). Returns array of shape ``(C(N, n), N)``.
    """
    n_total = n_partitions(N, n)
    labels = np.zeros((n_total, N), dtype=bool)
    for k, selected in enumerate(itertools.combinations(range(N), n)):
        labels[k, list(selected)] = True
    return labels


def evaluate_labelings(statistic_fn, dm, labels_block, n, m, *, threads=1):
    r"""
    Evaluates the statistic for each row of ``labels_block``. The work is split into
    chunks of labelings processed by a pool of ``threads`` threads. The values are
    assembled in the order of the labelings, so the result does not depend on ``threads``.
    """
    n_rows = labels_block.shape[0]
    chunks = [labels_block[k: k + _labelings_per_task] for k in range(0, n_rows, _labelings_per_task)]
    if threads is None or threads < 1:
        threads = multiprocessing.cpu_count()
    threads = min(threads, len(chunks))

    if threads <= 1:
        results = [statistic_fn(dm, _, n, m) for _ in chunks]
    else:
        thread_pool = multiprocessing.pool.ThreadPool(threads)
        try:
            results = thread_pool.starmap(statistic_fn, [(dm, _, n, m) for _ in chunks])
        finally:
            thread_pool.close()
            thread_pool.join()

    if not results:
        return np.zeros(0)
    return np.concatenate([np.asarray(_, dtype=float).reshape(-1) for _ in results])


def permutation_null(lpool, dm, statistic_fn, B, seed, *, tail=TAIL_HIGH, stream_keys=(),
                     exhaustive_cap=EXHAUSTIVE_CAP_DEFAULT, threads=1):
    r"""
    Computes the null distribution of a statistic by relabeling of the pooled sample.

    If the number of partitions ``C(N, n)`` does not exceed ``exhaustive_cap``, the statistic
    is evaluated for all partitions (``B`` is ignored). Otherwise ``B`` labelings are drawn
    independently from the random stream ``(seed, *stream_keys, "perm")``; identical labelings
    may appear in different draws.

    Parameters
    ----------

    lpool : LabeledPool
        pooled sample (only ``n``, ``m`` and ``N`` are used)

    dm : DistanceMatrix
        distance matrix passed to the statistic function

    statistic_fn : callable
        ``statistic_fn(dm, labels_block, n, m)`` returns the array of statistic values

    B : int
        the number of random labelings, ``B >= 1``

    seed : int
        seed of the random stream

    tail : str
        rejection tail of the statistic: ``"high"`` or ``"low"``

    stream_keys : tuple
        additional keys of the random stream, e.g. ``(case_id, replication)``

    exhaustive_cap : int
        maximum number of partitions for exhaustive enumeration, 0 disables enumeration

    threads : int
        the number of threads used for evaluation of the statistic

    Returns
    -------

    NullDistribution
    """
    B = int(B)
    if B < 1:
        raise InsufficientPermutations(f"The number of permutations must be positive: B={B}")
    n, m = lpool.n, lpool.m
    N = n + m

    n_total = n_partitions(N, n)
    if n_total <= exhaustive_cap:
        logger.debug(f"Null distribution: enumeration of all {n_total} partitions (N={N}, n={n})")
        labels = all_labelings(N, n)
        exhaustive = True
    else:
        logger.debug(f"Null distribution: {B} random partitions (N={N}, n={n})")
        stream = make_stream(seed, *stream_keys, STREAM_PERMUTATION)
        labels = random_labelings(N, n, B, stream)
        exhaustive = False

    values = evaluate_labelings(statistic_fn, dm, labels, n, m, threads=threads)
    return NullDistribution(values=values, B=values.size, tail=tail, seed=seed, exhaustive=exhaustive)


def _count_extreme(null, observed):
    if null.tail == TAIL_HIGH:
        return int(np.count_nonzero(null.values >= observed))
    return int(np.count_nonzero(null.values <= observed))


def p_value(null, observed):
    r"""
    Computes the p-value of the observed statistic. For sampled nulls

        p = (1 + #{values at least as extreme as observed}) / (B + 1)

    which is never smaller than ``1 / (B + 1)``. For exhaustive nulls the exact fraction
    of partitions with values at least as extreme as observed is returned.

    Parameters
    ----------

    null : NullDistribution

    observed : float
        the value of the statistic for the observed labeling

    Returns
    -------

    float
    """
    count = _count_extreme(null, observed)
    if null.exhaustive:
        return count / null.B
    return (1 + count) / (null.B + 1)


def critical_value(null, alpha):
    r"""
    Computes the critical value of the statistic at significance level ``alpha``.
    For the ``high`` tail it is the ``floor(alpha * (B + 1))``-th largest null value (the null
    hypothesis is rejected if the observed value is greater or equal). For the ``low``
    tail it is the same-rank smallest value. For exhaustive nulls the rank is
    ``floor(alpha * B)``.

    Raises
    ------

    InsufficientPermutations
        too few null values for the requested level (``B * alpha < 1``)
    """
    if not 0 < alpha < 1:
        raise ValueError(f"Significance level must be in the range (0, 1): alpha={alpha}")
    n_values = null.B if null.exhaustive else null.B + 1
    # The small offset protects the rank against rounding of alpha * B
    rank = int(np.floor(alpha * n_values + 1e-9))
    if null.B * alpha < 1 or rank < 1:
        raise InsufficientPermutations(f"Critical value at alpha={alpha} requires at least "
                                       f"{int(np.ceil(1 / alpha))} permutations: B={null.B}")
    rank = min(rank, null.B)
    v_sorted = np.sort(null.values)
    if null.tail == TAIL_HIGH:
        return float(v_sorted[-rank])
    return float(v_sorted[rank - 1])


def rejects_at_critical_value(tail, observed, critical):
    r"""
    Returns ``True`` if the observed value lies in the rejection region defined by the critical value.
    """
    if tail == TAIL_HIGH:
        return observed >= critical
    return observed <= critical


def _achieved_alpha(reference_sorted, tail, critical):
    r"""
    Fraction of the reference null values in the rejection region of the critical value.
    ``reference_sorted`` must be sorted in ascending order.
    """
    n_ref = reference_sorted.size
    if tail == TAIL_HIGH:
        count = n_ref - np.searchsorted(reference_sorted, critical, side="left")
    else:
        count = np.searchsorted(reference_sorted, critical, side="right")
    return count / n_ref


def calibration_table(permutations, *, n=50, m=50, repeats=100, seed, alpha=0.05, d=1,
                      statistic_fn=None, tail=TAIL_HIGH, reference_size=100_000, threads=1):
    r"""
    Estimates the spread of the achieved significance level of the permutation test
    for several numbers of permutations.

    One pooled sample of ``n + m`` observations uniformly distributed in the unit cube
    (dimension ``d``) is generated. The reference null distribution is estimated
    from ``reference_size`` relabelings. For each ``B`` from ``permutations`` the critical
    value is estimated ``repeats`` times, each time from a fresh batch of ``B`` relabelings,
    and converted to the achieved level (fraction of the reference null in the rejection
    region). The result contains the central 95% interval of the achieved levels.

    Parameters
    ----------

    permutations : iterable(int)
        the numbers of permutations B

    n, m : int
        sample sizes

    repeats : int
        the number of critical values estimated for each B, ``repeats >= 30``

    seed : int
        seed of the random streams

    alpha : float
        nominal significance level

    d : int
        dimension of the observations

    statistic_fn : callable or None
        vectorized statistic ``statistic_fn(dm, labels_block, n, m)``. The energy statistic
        with logarithmic kernel is used if ``None``.

    tail : str
        rejection tail of the statistic

    reference_size : int
        the number of relabelings in the reference null distribution

    threads : int
        the number of threads used for evaluation of the statistic

    Returns
    -------

    list(CalibrationResult)
        results in the order of ``permutations``
    """
    permutations = [int(_) for _ in permutations]
    if not permutations:
        raise ValueError("At least one number of permutations must be specified")
    if repeats < 30:
        raise ValueError(f"Calibration requires at least 30 repeats: repeats={repeats}")
    if n < 1 or m < 1:
        raise ValueError(f"Sample sizes must be positive: n={n}, m={m}")
    for b in permutations:
        if b * alpha < 1:
            raise InsufficientPermutations(f"Calibration at alpha={alpha} requires at least "
                                           f"{int(np.ceil(1 / alpha))} permutations: B={b}")

    stream = make_stream(seed, "calibration", "sample")
    data = stream.random((n + m, d))
    lpool = pool(Sample(data[:n]), Sample(data[n:]))
    dm = distance_matrix(lpool)

    if statistic_fn is None:
        evaluator = EnergyEvaluator(dm, DistanceKernel())

        def statistic_fn(dm, labels_block, n, m):
            return evaluator.evaluate_block(labels_block, n, m)

    N = n + m
    logger.info(f"Calibration: computing the reference null distribution ({reference_size} relabelings) ...")
    labels = random_labelings(N, n, reference_size, make_stream(seed, "calibration", "reference"))
    reference = np.sort(evaluate_labelings(statistic_fn, dm, labels, n, m, threads=threads))

    results = []
    for b in permutations:
        achieved = []
        for k in range(repeats):
            labels = random_labelings(N, n, b, make_stream(seed, "calibration", b, k, STREAM_PERMUTATION))
            values = evaluate_labelings(statistic_fn, dm, labels, n, m, threads=threads)
            null = NullDistribution(values=values, B=b, tail=tail, seed=seed)
            achieved.append(_achieved_alpha(reference, tail, critical_value(null, alpha)))
        low, high = np.quantile(achieved, [0.025, 0.975])
        logger.info(f"Calibration: B={b}, 95% interval of the achieved level: [{low:.4f}, {high:.4f}]")
        results.append(CalibrationResult(B=b, interval_low=float(low), interval_high=float(high),
                                         repeats=repeats, seed=seed, alpha=alpha,
                                         achieved_alpha=tuple(float(_) for _ in achieved)))
    return results


def calibrate_alpha(n, m, B, repeats, seed, **kwargs):
    r"""
    Estimates the central 95% interval of the achieved significance level of the permutation
    test with ``B`` permutations. See ``calibration_table`` for the description of
    the procedure and the keyword arguments.

    Returns
    -------

    CalibrationResult
    """
    return calibration_table([B], n=n, m=m, repeats=repeats, seed=seed, **kwargs)[0]
