import zlib
import numpy as np
from scipy.special import comb

import logging
logger = logging.getLogger()


# Stream purposes used as the last component of the stream key
STREAM_SAMPLE = "sample"
STREAM_PERMUTATION = "perm"


def _stream_key_component(key):
    r"""
    Converts one component of the stream key to a non-negative integer. Integers are
    used as is, strings are hashed with CRC32 (stable across Python sessions,
    unlike ``hash``).
    """
    if isinstance(key, (bool, np.bool_)):
        raise TypeError(f"Boolean value {key!r} can not be used as a stream key")
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"Stream key components must be non-negative: {key}")
        return int(key)
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    raise TypeError(f"Unsupported type of the stream key component: {type(key)}")


def make_stream(seed, *keys):
    r"""
    Creates random number generator for the stream identified by ``seed`` and a sequence
    of keys, e.g. ``make_stream(seed, case_id, replication, "perm")``. The generator is
    based on counter-based Philox bit generator. Streams with different keys are
    statistically independent and the output depends only on ``(seed, keys)``, so
    the work may be distributed between any number of workers without changing the results.

    Parameters
    ----------

    seed : int
        non-negative 64-bit integer seed

    keys : int or str
        components of the stream key (replication index, permutation block, purpose etc.)

    Returns
    -------

    numpy.random.Generator
    """
    if seed is None:
        raise ValueError("Seed must be specified: pyenergy does not use unseeded random streams")
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"Seed must be non-negative integer: {seed}")
    spawn_key = tuple(_stream_key_component(_) for _ in keys)
    seed_seq = np.random.SeedSequence(seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seed_seq))


def n_partitions(n_total, n_first):
    r"""
    The number of ways to split ``n_total`` observations into two groups of sizes
    ``n_first`` and ``n_total - n_first``. Exact (arbitrary precision) integer.
    """
    return int(comb(n_total, n_first, exact=True))


def binomial_stderr(p, n_trials):
    r"""
    Standard error of the rejection rate ``p`` estimated from ``n_trials`` independent trials.
    """
    if n_trials < 1:
        return float("nan")
    return float(np.sqrt(p * (1.0 - p) / n_trials))
