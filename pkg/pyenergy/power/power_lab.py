r"""
Monte Carlo estimation of the power of two-sample tests. For each replication of
a scenario a pair of samples is drawn, all selected methods are applied to the same pair
and rejections at the significance level are counted.
"""
import copy
import time
import multiprocessing
from dataclasses import dataclass
import numpy as np

from ..core.samples import pool, standardize as standardize_pool
from ..core.utils import make_stream, binomial_stderr, STREAM_SAMPLE
from ..core.methods import get_method, parse_methods, prepare_statistic, observed_statistic, PoolGeometry
from ..core.kernels import parse_kernel
from ..core.permutation import (permutation_null, p_value, critical_value, rejects_at_critical_value,
                                EXHAUSTIVE_CAP_DEFAULT)
from ..simulation.distributions import sample_multivariate, location_scale
from .scenarios import PROTOCOL_LOCATION_SCALE

import logging
logger = logging.getLogger()


MODE_PER_REPLICATION = "per-replication"
MODE_FIXED_CRITICAL = "fixed-critical"
SUPPORTED_MODES = (MODE_PER_REPLICATION, MODE_FIXED_CRITICAL)

# The number of relabelings used to estimate critical values in 'fixed-critical' mode
FIXED_CRITICAL_PERMUTATIONS = 1000


@dataclass(frozen=True, eq=False)
class PowerReport:
    r"""
    Estimated power of the method for one scenario: ``power = rejections / replications``.
    """
    scenario: object
    method: str
    power: float
    replications: int
    rejections: int
    wall_time: float
    mode: str = MODE_PER_REPLICATION

    @property
    def stderr(self):
        """Binomial standard error of the power estimate"""
        return binomial_stderr(self.power, self.replications)

    @property
    def reference(self):
        """Reference power for the scenario and sample sizes (``None`` if not available)"""
        return self.scenario.reference_power(self.method)

    def to_row(self):
        r"""
        Returns the report as a dictionary (one row of the output CSV file).
        """
        sc = self.scenario
        row = {"case_id": sc.case_id, "method": self.method, "n": sc.n, "m": sc.m,
               "theta": sc.theta, "tau": sc.tau, "replications": self.replications,
               "permutations": sc.permutations, "power": self.power, "stderr": self.stderr,
               "rejections": self.rejections}
        row["reference"] = self.reference
        return row


def draw_samples(spec, replication):
    r"""
    Draws the pair of samples for the replication of the scenario. The second sample is
    drawn from ``pY`` (or ``pX`` for the location-scale protocol) and transformed as
    ``theta + tau * y``. The samples depend only on
    ``(spec.seed, spec.case_id, replication)``.

    Returns
    -------

    tuple(Sample, Sample)
    """
    stream = make_stream(spec.seed, spec.case_id, replication, STREAM_SAMPLE)
    a = sample_multivariate(spec.pX, spec.n, stream)
    parent = spec.pX if spec.protocol == PROTOCOL_LOCATION_SCALE else spec.pY
    b = sample_multivariate(parent, spec.m, stream)
    return a, location_scale(b, spec.theta, spec.tau)


def _with_replication(ex, spec, replication):
    r"""
    Returns the copy of the exception with the case ID and the replication index added to the message.
    """
    new_ex = copy.copy(ex)
    msg = f"Case {spec.case_id}, replication {replication}: {ex.args[0] if ex.args else ex}"
    new_ex.args = (msg,) + tuple(ex.args[1:])
    return new_ex


def _prepare_replication(spec, replication, methods, options):
    a, b = draw_samples(spec, replication)
    lpool = pool(a, b)
    if options["standardize"]:
        lpool = standardize_pool(lpool)
    geometry = PoolGeometry(lpool)
    statistics = {name: prepare_statistic(name, geometry, kernel=options["kernel"], bins=spec.bins)
                  for name in methods}
    return lpool, geometry, statistics


def _run_replication(spec, replication, methods, options):
    r"""
    Runs permutation tests of all methods for one replication. Returns the list of booleans
    (``True`` - the null hypothesis is rejected) in the order of ``methods``. All methods
    use the same block of relabelings.
    """
    try:
        lpool, geometry, statistics = _prepare_replication(spec, replication, methods, options)
        rejected = []
        for name in methods:
            fn = statistics[name]
            observed = observed_statistic(fn, geometry)
            null = permutation_null(lpool, geometry.dm, fn, spec.permutations, spec.seed,
                                    tail=get_method(name).tail, stream_keys=(spec.case_id, replication),
                                    exhaustive_cap=options["exhaustive_cap"], threads=options["threads"])
            rejected.append(p_value(null, observed) <= spec.alpha)
        return rejected
    except (ValueError, RuntimeError) as ex:
        raise _with_replication(ex, spec, replication) from ex


def _run_replication_fixed(spec, replication, methods, options, critical_values):
    r"""
    Compares the observed statistics of all methods with precomputed critical values.
    """
    try:
        _, geometry, statistics = _prepare_replication(spec, replication, methods, options)
        return [rejects_at_critical_value(get_method(name).tail,
                                          observed_statistic(statistics[name], geometry),
                                          critical_values[name])
                for name in methods]
    except (ValueError, RuntimeError) as ex:
        raise _with_replication(ex, spec, replication) from ex


def _fixed_critical_values(spec, methods, options):
    r"""
    Estimates the critical values of all methods from the relabelings of the pool of the first replication.
    """
    lpool, geometry, statistics = _prepare_replication(spec, 0, methods, options)
    critical_values = {}
    for name in methods:
        null = permutation_null(lpool, geometry.dm, statistics[name], FIXED_CRITICAL_PERMUTATIONS, spec.seed,
                                tail=get_method(name).tail, stream_keys=(spec.case_id, "critical"),
                                exhaustive_cap=options["exhaustive_cap"], threads=options["threads"])
        critical_values[name] = critical_value(null, spec.alpha)
    logger.debug(f"Case {spec.case_id}: critical values {critical_values}")
    return critical_values


def run_scenario(spec, methods, mode=MODE_PER_REPLICATION, *, kernel="log", standardize=False,
                 exhaustive_cap=EXHAUSTIVE_CAP_DEFAULT, processes=1, threads=1):
    r"""
    Estimates the power of the methods for the scenario.

    In ``per-replication`` mode each replication is a complete permutation test with
    ``spec.permutations`` relabelings, the null hypothesis is rejected if ``p <= alpha``.
    In ``fixed-critical`` mode the critical value of each method is estimated once from
    1000 relabelings of the pool of the first replication and the observed statistics of all
    replications are compared with it.

    Parameters
    ----------

    spec : ScenarioSpec
        the scenario, including sample sizes, significance level, the numbers of replications
        and permutations and the seed

    methods : list(str) or str
        method names (or comma-separated string)

    mode : str
        ``per-replication`` or ``fixed-critical``

    kernel : str
        distance kernel of the energy statistic

    standardize : bool
        standardize coordinates of each pooled sample

    exhaustive_cap : int
        all partitions are enumerated if their number does not exceed the cap

    processes : int
        the number of processes used to run replications in parallel

    threads : int
        the number of threads used to evaluate statistics for relabelings

    Returns
    -------

    list(PowerReport)
        reports in the order of ``methods``
    """
    methods = parse_methods(methods)
    if mode not in SUPPORTED_MODES:
        raise ValueError(f"Unknown mode '{mode}'. Supported modes: {SUPPORTED_MODES}")
    if spec.seed is None:
        raise ValueError("Seed of the power study is not specified")
    if spec.replications < 1:
        raise ValueError(f"The number of replications must be positive: {spec.replications}")
    for name in methods:
        if get_method(name).univariate and spec.d != 1:
            raise ValueError(f"Method '{name}' can not be applied to case {spec.case_id}: dimension {spec.d}")

    options = {"kernel": parse_kernel(kernel), "standardize": standardize,
               "exhaustive_cap": exhaustive_cap, "threads": threads}

    logger.info(f"Case {spec.case_id}: {spec.pX.label} vs {spec.pY.label}, theta={spec.theta}, tau={spec.tau}, "
                f"n={spec.n}, m={spec.m}, methods {methods} ...")
    t0 = time.time()

    if mode == MODE_FIXED_CRITICAL:
        critical_values = _fixed_critical_values(spec, methods, options)
        fn, extra_args = _run_replication_fixed, (critical_values,)
    else:
        fn, extra_args = _run_replication, ()
    args = [(spec, r, methods, options) + extra_args for r in range(spec.replications)]

    if processes is None or processes < 1:
        processes = multiprocessing.cpu_count()
    if processes > 1:
        mp_pool = multiprocessing.Pool(processes)
        try:
            results = mp_pool.starmap(fn, args)
        finally:
            mp_pool.terminate()
            mp_pool.join()
    else:
        results = [fn(*_) for _ in args]

    rejections = np.sum(np.asarray(results, dtype=int), axis=0)
    wall_time = time.time() - t0

    reports = []
    for name, n_rejected in zip(methods, rejections):
        power = int(n_rejected) / spec.replications
        reports.append(PowerReport(scenario=spec, method=name, power=power, replications=spec.replications,
                                   rejections=int(n_rejected), wall_time=wall_time, mode=mode))
    logger.info(f"Case {spec.case_id}: success ({wall_time:.1f} s). Power: "
                + ", ".join(f"{_.method}={_.power:.3f}" for _ in reports))
    return reports


def expand_sizes(sizes):
    r"""
    Converts the list of sample sizes to the list of ``(n, m)`` pairs. Each item may be an integer
    (``n = m``), a pair ``(n, m)`` or a string ``"n,m"``.
    """
    pairs = []
    for s in sizes:
        if isinstance(s, str):
            parts = [int(_) for _ in s.split(",")]
            s = parts[0] if len(parts) == 1 else tuple(parts)
        if isinstance(s, (int, np.integer)):
            pairs.append((int(s), int(s)))
        else:
            n, m = s
            pairs.append((int(n), int(m)))
    for n, m in pairs:
        if n < 1 or m < 1:
            raise ValueError(f"Sample sizes must be positive: n={n}, m={m}")
    return pairs


def run_power_study(scenario_set, *, seed, cases=None, methods=None, sizes=None, replications=1000,
                    permutations=300, alpha=0.05, mode=MODE_PER_REPLICATION, kernel="log",
                    standardize=False, exhaustive_cap=EXHAUSTIVE_CAP_DEFAULT, processes=1, threads=1,
                    protocol=None):
    r"""
    Runs ``run_scenario`` for the selected cases of the scenario set.

    Parameters
    ----------

    scenario_set : ScenarioSet
        loaded scenario file

    seed : int
        seed of the study

    cases : list(int) or None
        case IDs (all cases if ``None``)

    methods : list(str), str or None
        method names (methods listed in the scenario file if ``None``)

    sizes : list or None
        sample sizes overriding the sizes from the scenario file (see ``expand_sizes``).
        Each case is run for each size.

    protocol : str or None
        origin of the second sample (``"alternative"`` or ``"location-scale"``) overriding
        the protocol of the scenarios

    replications, permutations, alpha, mode, kernel, standardize, exhaustive_cap, processes, threads
        see ``run_scenario`` and ``ScenarioSpec``

    Returns
    -------

    list(PowerReport)
    """
    if methods is None:
        methods = scenario_set.methods
    methods = parse_methods(methods)
    size_pairs = expand_sizes(sizes) if sizes else [None]

    reports = []
    for spec in scenario_set.select(cases):
        for sz in size_pairs:
            settings = dict(seed=seed, replications=replications, permutations=permutations, alpha=alpha)
            if sz is not None:
                settings.update(n=sz[0], m=sz[1])
            if protocol is not None:
                settings.update(protocol=protocol)
            reports.extend(run_scenario(spec.with_settings(**settings), methods, mode, kernel=kernel,
                                        standardize=standardize, exhaustive_cap=exhaustive_cap,
                                        processes=processes, threads=threads))
    return reports
