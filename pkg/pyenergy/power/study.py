r"""
Power study driven by a YAML parameter file and/or keyword arguments.
"""
import time
from dataclasses import dataclass, replace

from ..core.methods import parse_methods
from .param_files import power_study_arguments
from .power_lab import run_power_study, expand_sizes
from .scenarios import load_scenarios
from .tables import render_tables, save_tables, layout_from_scenarios

import logging
logger = logging.getLogger()


@dataclass(frozen=True, eq=False)
class PowerStudyResult:
    reports: list
    document: object
    file_paths: tuple
    wall_time: float


def power_study(parameter_file_path=None, **kwargs):
    r"""
    Runs the power study for the cases of the scenario file and saves the tables
    ``power_<tag>.csv`` and ``power_<tag>.txt`` to the output directory.

    Parameters are assembled from default values, the YAML parameter file and keyword
    arguments (keyword arguments have the highest priority). The file with default parameters
    may be created with ``create_power_parameter_file``.

    Parameters
    ----------

    parameter_file_path : str or None
        path to the YAML parameter file

    kwargs : dict
        parameters of the study (see ``create_power_parameter_file`` for the list)

    Returns
    -------

    PowerStudyResult

    Raises
    ------

    ScenarioError
        invalid parameters or scenario file

    IOError
        the parameter file or the scenario file does not exist
    """
    args = power_study_arguments(parameter_file_path, **kwargs)
    if args["seed"] is None:
        raise ValueError("Seed of the power study is not specified")

    scenario_set = load_scenarios(args["scenario_file"])
    methods = parse_methods(args["methods"] or scenario_set.methods)
    sizes = expand_sizes(args["sizes"]) if args["sizes"] else None

    t0 = time.time()
    reports = run_power_study(scenario_set, seed=args["seed"], cases=args["cases"], methods=methods,
                              sizes=sizes, replications=args["replications"],
                              permutations=args["permutations"], alpha=args["alpha"], mode=args["mode"],
                              kernel=args["kernel"], standardize=args["standardize"],
                              exhaustive_cap=args["exhaustive_cap"], processes=args["processes"],
                              threads=args["threads"], protocol=args["protocol"])
    wall_time = time.time() - t0

    layout = layout_from_scenarios(scenario_set, methods, sizes)
    if args["cases"]:
        layout = replace(layout, case_ids=tuple(args["cases"]))
    document = render_tables(reports, layout, with_reference=args["with_reference"])
    file_paths = save_tables(document, args["output_dir"], scenario_set.tag)

    logger.info(f"Power study '{scenario_set.tag}': success. Total wall time {wall_time:.1f} s")
    return PowerStudyResult(reports=reports, document=document, file_paths=file_paths, wall_time=wall_time)
