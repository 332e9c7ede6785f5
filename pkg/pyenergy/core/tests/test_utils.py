import pytest
import numpy as np
import numpy.testing as npt

from pyenergy.core.utils import make_stream, n_partitions, binomial_stderr


def test_make_stream_determinism():
    v1 = make_stream(42, 3, 17, "perm").random(100)
    v2 = make_stream(42, 3, 17, "perm").random(100)
    npt.assert_array_equal(v1, v2)


@pytest.mark.parametrize("keys1, keys2", [
    ((3, 17, "perm"), (3, 18, "perm")),
    ((3, 17, "perm"), (3, 17, "sample")),
    ((3, 17), (17, 3)),
    ((), ("calibration",)),
])
def test_make_stream_distinct_keys(keys1, keys2):
    v1 = make_stream(42, *keys1).random(100)
    v2 = make_stream(42, *keys2).random(100)
    assert not np.array_equal(v1, v2), "Streams with different keys produce identical output"


def test_make_stream_distinct_seeds():
    v1 = make_stream(1, "perm").random(100)
    v2 = make_stream(2, "perm").random(100)
    assert not np.array_equal(v1, v2), "Streams with different seeds produce identical output"


@pytest.mark.parametrize("seed, keys, exc", [
    (None, (), ValueError),
    (-1, (), ValueError),
    (5, (-3,), ValueError),
    (5, (1.5,), TypeError),
    (5, (True,), TypeError),
])
def test_make_stream_fail(seed, keys, exc):
    with pytest.raises(exc):
        make_stream(seed, *keys)


@pytest.mark.parametrize("n_total, n_first, expected", [
    (3, 2, 3), (10, 5, 252), (100, 50, 100891344545564193334812497256),
])
def test_n_partitions(n_total, n_first, expected):
    assert n_partitions(n_total, n_first) == expected, "The number of partitions is incorrect"


def test_binomial_stderr():
    npt.assert_almost_equal(binomial_stderr(0.5, 100), 0.05)
    assert binomial_stderr(0.0, 1000) == 0.0, "Standard error for p=0 must be zero"
    assert np.isnan(binomial_stderr(0.5, 0)), "Standard error for zero trials must be NaN"
