import os
import io
import pytest
import numpy as np
import pandas as pd

from pyenergy.core.errors import MissingCell
from pyenergy.simulation.distributions import StdNormal, Cauchy
from pyenergy.power.scenarios import ScenarioSpec, load_scenarios
from pyenergy.power.power_lab import PowerReport, MODE_PER_REPLICATION
from pyenergy.power.tables import (TableLayout, layout_from_reports, layout_from_scenarios, render_tables,
                                   save_tables)


def _report(case_id, method, power, *, n=30, m=30, reference=None, replications=100):
    reference = reference or {}
    spec = ScenarioSpec(case_id=case_id, pX=StdNormal(d=2), pY=Cauchy(d=2), n=n, m=m, permutations=199,
                        replications=replications, seed=11, reference=reference)
    return PowerReport(scenario=spec, method=method, power=power, replications=replications,
                       rejections=int(round(power * replications)), wall_time=0.5, mode=MODE_PER_REPLICATION)


def _study_reports(scenario_set, methods, skip_case=None):
    reports = []
    for spec in scenario_set.scenarios:
        if spec.case_id == skip_case:
            continue
        spec = spec.with_settings(n=30, m=30, seed=3, replications=10, permutations=19)
        for k, method in enumerate(methods):
            reports.append(PowerReport(scenario=spec, method=method, power=0.1 * k, replications=10,
                                       rejections=k, wall_time=0.1))
    return reports


def test_render_tables_1x1():
    document = render_tables([_report(1, "energy", 0.86)])
    assert list(document.frame["case_id"]) == [1]

    frame = pd.read_csv(io.StringIO(document.csv))
    assert list(frame.columns) == ["case_id", "method", "n", "m", "theta", "tau", "replications",
                                   "permutations", "power", "stderr", "rejections"], "CSV columns are incorrect"
    assert frame.loc[0, "method"] == "energy" and frame.loc[0, "power"] == 0.86
    assert frame.loc[0, "rejections"] == 86

    text = document.text
    assert "Sample sizes: n=30, m=30" in text
    assert "0.860" in text and "N(0,I)" in text and "C(0,I)" in text
    assert "Replications: 100; permutations: 199; mode: per-replication; alpha: 0.05; seed: 11" in text


def test_render_tables_reference():
    reports = [_report(1, "energy", 0.86, reference={"30,30": {"energy": 0.8}}),
               _report(2, "energy", 0.5)]
    document = render_tables(reports, with_reference=True)
    frame = pd.read_csv(io.StringIO(document.csv))
    assert frame.columns[-1] == "reference", "Column of reference powers is missing"
    assert frame.loc[0, "reference"] == 0.8 and np.isnan(frame.loc[1, "reference"])
    assert "energy ref" in document.text and "energy diff" in document.text
    assert "+0.060" in document.text, "Difference from the reference power is missing"

    document = render_tables(reports, with_reference=False)
    assert "energy ref" not in document.text


def test_render_tables_sizes():
    reports = [_report(c, meth, 0.5, n=n, m=n) for n in (30, 50) for c in (2, 1) for meth in ("fr", "energy")]
    layout = TableLayout(case_ids=(1, 2), methods=("energy", "fr"), sizes=((30, 30), (50, 50)))
    document = render_tables(reports, layout)
    assert len(document.frame) == 8
    assert list(document.frame["case_id"]) == [1, 1, 1, 1, 2, 2, 2, 2], "Rows must be ordered by case"
    assert list(document.frame["method"][:2]) == ["energy", "fr"], "Rows must be ordered by method"
    text = document.text
    assert text.index("n=30, m=30") < text.index("n=50, m=50"), "Tables must be ordered by sample sizes"


def test_render_tables_full_layout():
    scenario_set = load_scenarios("2d")
    methods = ["energy", "fr", "nn"]
    layout = layout_from_scenarios(scenario_set, methods)
    assert layout.case_ids == tuple(range(1, 15)) and layout.methods == tuple(methods)
    document = render_tables(_study_reports(scenario_set, methods), layout, with_reference=True)
    assert len(document.frame) == 14 * 3, "Table must contain 14 x 3 cells"
    lines = document.text.split("\n")
    assert lines[0] == "Sample sizes: n=30, m=30"
    # Header, index name and 14 rows
    assert len([_ for _ in lines if _ and not _.startswith(("Sample", "Replications"))]) == 16


def test_render_tables_missing_cell():
    scenario_set = load_scenarios("2d")
    methods = ["energy", "fr", "nn"]
    layout = layout_from_scenarios(scenario_set, methods, sizes=[(30, 30)])
    reports = _study_reports(scenario_set, methods, skip_case=9)
    with pytest.raises(MissingCell, match="case 9"):
        render_tables(reports, layout)

    layout = layout_from_scenarios(scenario_set, methods)
    with pytest.raises(MissingCell, match="no reports for case 9"):
        render_tables(reports, layout)

    reports = _study_reports(scenario_set, ["energy", "fr"])
    with pytest.raises(MissingCell, match="method 'nn'"):
        render_tables(reports, layout)


def test_layout_from_reports():
    reports = [_report(3, "nn", 0.1), _report(1, "nn", 0.2), _report(3, "energy", 0.3)]
    layout = layout_from_reports(reports)
    assert layout.case_ids == (3, 1) and layout.methods == ("nn", "energy") and layout.sizes is None


def test_render_tables_fail():
    with pytest.raises(ValueError, match="no cases or no methods"):
        render_tables([])


def test_save_tables(tmp_path):
    document = render_tables([_report(1, "energy", 0.86)])
    out_dir = os.path.join(tmp_path, "results")
    csv_path, text_path = save_tables(document, out_dir, "2d")
    assert csv_path == os.path.join(out_dir, "power_2d.csv")
    assert text_path == os.path.join(out_dir, "power_2d.txt")
    with open(csv_path, "r") as f:
        assert f.read() == document.csv
    with open(text_path, "r") as f:
        assert f.read() == document.text

    save_tables(document, out_dir, "2d")
    with pytest.raises(IOError, match="already exists"):
        save_tables(document, out_dir, "2d", file_overwrite=False)
