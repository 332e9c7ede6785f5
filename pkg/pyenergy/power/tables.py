r"""
Rendering of power reports as CSV files and aligned text tables (cases x methods).
"""
import os
import io
from dataclasses import dataclass
import numpy as np
import pandas as pd

from ..core.errors import MissingCell

import logging
logger = logging.getLogger()


_csv_columns = ["case_id", "method", "n", "m", "theta", "tau", "replications", "permutations",
                "power", "stderr", "rejections"]


@dataclass(frozen=True)
class TableLayout:
    r"""
    Rows and columns of the power table. ``sizes`` is the list of ``(n, m)`` pairs. If ``sizes``
    is ``None``, each case is expected to have reports for the sizes found in the reports
    for this case and at least one report.
    """
    case_ids: tuple
    methods: tuple
    sizes: tuple = None


@dataclass(frozen=True, eq=False)
class TableDocument:
    r"""
    Rendered power tables: ``frame`` holds one row per report (the columns of the CSV file),
    ``csv`` and ``text`` are the contents of the output files.
    """
    frame: pd.DataFrame
    csv: str
    text: str


def layout_from_reports(reports):
    r"""
    Creates the layout that contains the cases and the methods of the reports (in the order of appearance).
    """
    case_ids, methods = [], []
    for r in reports:
        if r.scenario.case_id not in case_ids:
            case_ids.append(r.scenario.case_id)
        if r.method not in methods:
            methods.append(r.method)
    return TableLayout(case_ids=tuple(case_ids), methods=tuple(methods))


def layout_from_scenarios(scenario_set, methods, sizes=None):
    r"""
    Creates the layout that covers all cases of the scenario set.

    Parameters
    ----------

    scenario_set : ScenarioSet
        the set of scenarios

    methods : list(str)
        method names

    sizes : list(tuple) or None
        the list of ``(n, m)`` pairs; sizes of the reports are used if ``None``
    """
    sizes = tuple(tuple(_) for _ in sizes) if sizes else None
    return TableLayout(case_ids=tuple(scenario_set.case_ids), methods=tuple(methods), sizes=sizes)


def _select_cells(reports, layout):
    r"""
    Returns the list of reports ordered as cells of the layout: by case, then by sizes, then by method.
    """
    cells = {}
    for r in reports:
        sc = r.scenario
        cells[(sc.case_id, sc.n, sc.m, r.method)] = r

    selected = []
    for case_id in layout.case_ids:
        if layout.sizes is not None:
            case_sizes = list(layout.sizes)
        else:
            case_sizes = []
            for (c, n, m, _) in cells:
                if c == case_id and (n, m) not in case_sizes:
                    case_sizes.append((n, m))
            if not case_sizes:
                raise MissingCell(f"Power table: no reports for case {case_id}")
        for n, m in case_sizes:
            for method in layout.methods:
                key = (case_id, n, m, method)
                if key not in cells:
                    raise MissingCell(f"Power table: no report for case {case_id}, "
                                      f"method '{method}', n={n}, m={m}")
                selected.append(cells[key])
    return selected


def _unique_values(values):
    v = []
    for _ in values:
        if _ not in v:
            v.append(_)
    return ", ".join(str(_) for _ in v)


def _format_power(v):
    return "-" if v is None or (isinstance(v, float) and np.isnan(v)) else f"{v:.3f}"


def _format_diff(v):
    return "-" if v is None or np.isnan(v) else f"{v:+.3f}"


def _text_block(frame, methods, with_reference):
    r"""
    Aligned table for one pair of sample sizes: one row per case, one column per method.
    """
    first = frame.drop_duplicates("case_id").set_index("case_id")
    block = pd.DataFrame(index=first.index)
    block["X"] = first["pX"]
    block["Y"] = first["pY"]
    block["theta"] = first["theta"].map(lambda v: f"{v:g}")
    block["tau"] = first["tau"].map(lambda v: f"{v:g}")
    power = frame.pivot(index="case_id", columns="method", values="power")
    reference = frame.pivot(index="case_id", columns="method", values="reference")
    for method in methods:
        block[method] = power.loc[block.index, method].map(_format_power)
        if with_reference:
            ref = reference.loc[block.index, method].astype(float)
            block[f"{method} ref"] = ref.map(_format_power)
            block[f"{method} diff"] = (power.loc[block.index, method] - ref).map(_format_diff)
    block.index.name = "case"
    return block.to_string()


def render_tables(reports, layout=None, *, with_reference=False):
    r"""
    Renders power reports as a CSV document and aligned text tables. The text contains
    one table (cases x methods) per pair of sample sizes and a footer with the numbers
    of replications and permutations, the mode and the seed.

    Parameters
    ----------

    reports : list(PowerReport)
        the reports

    layout : TableLayout or None
        rows and columns of the tables. The layout is created from the reports if ``None``.

    with_reference : bool
        add reference power and the difference from the reference for each method

    Returns
    -------

    TableDocument

    Raises
    ------

    MissingCell
        the layout contains a cell that has no report
    """
    reports = list(reports)
    if layout is None:
        layout = layout_from_reports(reports)
    if not layout.case_ids or not layout.methods:
        raise ValueError("Power table layout contains no cases or no methods")
    selected = _select_cells(reports, layout)

    rows = []
    for r in selected:
        row = r.to_row()
        row["pX"] = r.scenario.pX.label
        row["pY"] = r.scenario.pY.label
        rows.append(row)
    frame = pd.DataFrame(rows)
    frame["reference"] = frame["reference"].astype(float)

    columns = list(_csv_columns)
    if frame["reference"].notna().any():
        columns.append("reference")
    buffer = io.StringIO()
    frame[columns].to_csv(buffer, index=False, float_format="%.6g")

    blocks = []
    for (n, m), group in frame.groupby(["n", "m"], sort=False):
        blocks.append(f"Sample sizes: n={n}, m={m}\n\n" + _text_block(group, layout.methods, with_reference))
    footer = (f"Replications: {_unique_values(r.replications for r in selected)}; "
              f"permutations: {_unique_values(r.scenario.permutations for r in selected)}; "
              f"mode: {_unique_values(r.mode for r in selected)}; "
              f"alpha: {_unique_values(r.scenario.alpha for r in selected)}; "
              f"seed: {_unique_values(r.scenario.seed for r in selected)}")
    text = "\n\n".join(blocks) + "\n\n" + footer + "\n"

    return TableDocument(frame=frame[columns + ["pX", "pY"]], csv=buffer.getvalue(), text=text)


def save_tables(document, output_dir, tag, *, file_overwrite=True):
    r"""
    Saves the rendered tables to the files ``power_<tag>.csv`` and ``power_<tag>.txt``.

    Returns
    -------

    tuple(str, str)
        paths of the CSV and the text files
    """
    output_dir = os.path.abspath(os.path.expanduser(output_dir))
    os.makedirs(output_dir, exist_ok=True)
    paths = (os.path.join(output_dir, f"power_{tag}.csv"), os.path.join(output_dir, f"power_{tag}.txt"))
    for path, contents in zip(paths, (document.csv, document.text)):
        if not file_overwrite and os.path.exists(path):
            raise IOError(f"File '{path}' already exists")
        with open(path, "w") as f:
            f.write(contents)
        logger.info(f"Power table saved to file '{path}'")
    return paths
