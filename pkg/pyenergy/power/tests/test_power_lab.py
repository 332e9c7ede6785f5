import pytest
import numpy as np
import numpy.testing as npt

from pyenergy.core.errors import DomainError, ScenarioError
from pyenergy.simulation.distributions import StdNormal, UnivariateFamily
from pyenergy.power.scenarios import ScenarioSpec, load_scenarios, PROTOCOL_LOCATION_SCALE, PROTOCOL_ALTERNATIVE
from pyenergy.power.power_lab import (PowerReport, draw_samples, run_scenario, run_power_study, expand_sizes,
                                      MODE_PER_REPLICATION, MODE_FIXED_CRITICAL)


def _spec(theta=0.0, d=2, **kwargs):
    params = dict(case_id=7, pX=StdNormal(d=d), pY=StdNormal(d=d), theta=theta, n=10, m=10,
                  replications=20, permutations=99, seed=2024)
    params.update(kwargs)
    return ScenarioSpec(**params)


def test_draw_samples():
    spec = _spec(theta=5.0, tau=2.0)
    a1, b1 = draw_samples(spec, 3)
    a2, b2 = draw_samples(spec, 3)
    npt.assert_array_equal(a1.data, a2.data)
    npt.assert_array_equal(b1.data, b2.data)
    assert a1.data.shape == (10, 2) and b1.data.shape == (10, 2), "Samples have incorrect shapes"

    a3, _ = draw_samples(spec, 4)
    assert not np.array_equal(a1.data, a3.data), "Replications must have different samples"
    a4, _ = draw_samples(spec.with_settings(case_id=8), 3)
    assert not np.array_equal(a1.data, a4.data), "Cases must have different samples"

    # The location-scale transform is applied to the second sample only
    _, b0 = draw_samples(spec.with_settings(theta=0.0, tau=1.0), 3)
    npt.assert_array_almost_equal(b1.data, 5.0 + 2.0 * b0.data)


def test_draw_samples_protocol():
    # f1 is bounded by sqrt(3), f4 (Cauchy) is not
    spec = _spec(d=1, pX=UnivariateFamily("f1"), pY=UnivariateFamily("f4"), theta=10.0, tau=0.5, n=200, m=200)
    a, b = draw_samples(spec, 0)
    assert np.max(np.abs(b.data - 10.0)) > 0.5 * np.sqrt(3), "The second sample must be drawn from pY"

    spec_ls = spec.with_settings(protocol=PROTOCOL_LOCATION_SCALE)
    a_ls, b_ls = draw_samples(spec_ls, 0)
    npt.assert_array_equal(a_ls.data, a.data)
    assert np.all(np.abs(b_ls.data - 10.0) <= 0.5 * np.sqrt(3)), "The second sample must be drawn from pX"

    # theta = 0, tau = 1: both samples are drawn from pX
    reports = run_scenario(spec_ls.with_settings(theta=0.0, tau=1.0, n=20, m=20, replications=40), ["ks"])
    assert reports[0].power <= 0.2, "Location-scale protocol with theta = 0, tau = 1 must satisfy H0"


@pytest.mark.parametrize("mode", [MODE_PER_REPLICATION, MODE_FIXED_CRITICAL])
def test_run_scenario_separated(mode):
    reports = run_scenario(_spec(theta=20.0), ["energy", "fr", "nn"], mode)
    assert [_.method for _ in reports] == ["energy", "fr", "nn"], "Reports must be in the order of methods"
    for r in reports:
        assert r.power == 1.0, f"Method '{r.method}': power for separated samples must be 1"
        assert (r.replications, r.rejections, r.mode) == (20, 20, mode)
        assert r.stderr == 0.0


@pytest.mark.parametrize("method, d", [
    ("energy", 2), ("fr", 2), ("nn", 2), ("ks", 1), ("cvm", 1), ("chi2", 1),
])
def test_run_scenario_null_level(method, d):
    # Both samples from the same distribution: the rejection rate is close to alpha = 0.05
    family = StdNormal(d=d) if d > 1 else UnivariateFamily("f2")
    spec = _spec(d=d, pX=family, pY=family, n=30, m=40, replications=1000, permutations=199, seed=31)
    report = run_scenario(spec, [method])[0]
    assert 0.03 <= report.power <= 0.07, \
        f"Method '{method}': rejection rate under the null hypothesis is {report.power}"
    npt.assert_almost_equal(report.stderr, np.sqrt(report.power * (1 - report.power) / 1000))


def test_run_scenario_univariate():
    spec = _spec(d=1, pX=UnivariateFamily("f2"), pY=UnivariateFamily("f2"), theta=10.0)
    reports = run_scenario(spec, ["ks", "cvm", "chi2", "energy"])
    assert [_.power for _ in reports] == [1.0] * 4, "Power for separated samples must be 1"


def test_run_scenario_shared_samples():
    # Results of a method do not depend on the other selected methods
    spec = _spec(theta=0.6, replications=30)
    r1 = run_scenario(spec, ["energy"])
    r2 = run_scenario(spec, ["nn", "energy"])
    assert r1[0].rejections == r2[1].rejections, "Methods must use the same samples and relabelings"


def test_run_scenario_processes():
    spec = _spec(theta=0.6, replications=12)
    r1 = run_scenario(spec, ["energy", "nn"], processes=1)
    r2 = run_scenario(spec, ["energy", "nn"], processes=2, threads=2)
    assert [_.rejections for _ in r1] == [_.rejections for _ in r2], "Results depend on the number of processes"


def test_run_scenario_seed():
    spec = _spec(theta=0.5, replications=40)
    r1 = run_scenario(spec, ["energy"])
    r2 = run_scenario(spec, ["energy"])
    assert r1[0].rejections == r2[0].rejections, "Results must be reproducible"


@pytest.mark.parametrize("kwargs, methods, mode, msg", [
    ({"seed": None}, ["energy"], MODE_PER_REPLICATION, "Seed"),
    ({"replications": 0}, ["energy"], MODE_PER_REPLICATION, "replications"),
    ({}, ["ks"], MODE_PER_REPLICATION, "can not be applied"),
    ({}, ["energy"], "abc", "Unknown mode"),
    ({}, ["xyz"], MODE_PER_REPLICATION, "Unknown method"),
])
def test_run_scenario_fail(kwargs, methods, mode, msg):
    with pytest.raises(ValueError, match=msg):
        run_scenario(_spec(**kwargs), methods, mode)


def test_run_scenario_error_context():
    spec = _spec(d=1, pX=UnivariateFamily("f2"), pY=UnivariateFamily("f2"))
    with pytest.raises(DomainError, match="^Case 7, replication 0: .*kappa < d"):
        run_scenario(spec, ["energy"], kernel="power:2")


def test_PowerReport():
    spec = _spec(reference={"10,10": {"energy": 0.3}})
    report = PowerReport(scenario=spec, method="energy", power=0.25, replications=20, rejections=5,
                         wall_time=1.0)
    assert report.reference == 0.3
    row = report.to_row()
    assert list(row.keys()) == ["case_id", "method", "n", "m", "theta", "tau", "replications", "permutations",
                                "power", "stderr", "rejections", "reference"]
    assert (row["case_id"], row["permutations"], row["rejections"]) == (7, 99, 5)
    npt.assert_almost_equal(row["stderr"], np.sqrt(0.25 * 0.75 / 20))


@pytest.mark.parametrize("sizes, expected", [
    ([30], [(30, 30)]),
    ([30, "50", "50,40", (20, 10)], [(30, 30), (50, 50), (50, 40), (20, 10)]),
    ([np.int64(5)], [(5, 5)]),
])
def test_expand_sizes(sizes, expected):
    assert expand_sizes(sizes) == expected, "Sample sizes are expanded incorrectly"


@pytest.mark.parametrize("sizes", [[0], ["10,0"], ["a"]])
def test_expand_sizes_fail(sizes):
    with pytest.raises(ValueError):
        expand_sizes(sizes)


def test_run_power_study():
    scenario_set = load_scenarios("2d")
    reports = run_power_study(scenario_set, seed=5, cases=[1, 9], methods="energy", sizes=[10, "12,8"],
                              replications=4, permutations=19)
    assert [(_.scenario.case_id, _.scenario.n, _.scenario.m) for _ in reports] == \
        [(1, 10, 10), (1, 12, 8), (9, 10, 10), (9, 12, 8)], "Cells of the study are incorrect"
    assert all(_.replications == 4 and _.scenario.permutations == 19 for _ in reports)
    assert all(_.scenario.seed == 5 for _ in reports)


def test_run_power_study_default_methods():
    scenario_set = load_scenarios("2d")
    reports = run_power_study(scenario_set, seed=5, cases=[3], replications=2, permutations=19)
    assert [_.method for _ in reports] == ["energy", "fr", "nn"], "Methods of the scenario file must be used"
    assert reports[0].scenario.n == 50, "Sample sizes of the scenario file must be used"

    with pytest.raises(ScenarioError):
        run_power_study(scenario_set, seed=5, cases=[15], replications=2, permutations=19)


def test_run_power_study_protocol():
    scenario_set = load_scenarios("1d")
    kwargs = dict(seed=5, cases=[1], methods="ks", replications=2, permutations=19)
    reports = run_power_study(scenario_set, **kwargs)
    assert reports[0].scenario.protocol == PROTOCOL_ALTERNATIVE, "Protocol of the scenario file must be used"
    reports = run_power_study(scenario_set, protocol=PROTOCOL_LOCATION_SCALE, **kwargs)
    assert reports[0].scenario.protocol == PROTOCOL_LOCATION_SCALE, "Protocol is not overridden"
