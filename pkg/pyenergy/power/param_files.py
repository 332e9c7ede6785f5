r"""
YAML parameter files of power studies. A parameter file contains run settings
(scenario file, selected cases and methods, the numbers of replications and permutations,
the seed etc.). The file is created with default values and descriptions of the parameters
(as comments) and then edited by the user.
"""
import os
import re
import yaml
import jsonschema

from ..core.errors import ScenarioError
from ..core.methods import supported_methods
from ..core.permutation import EXHAUSTIVE_CAP_DEFAULT
from .power_lab import SUPPORTED_MODES, MODE_PER_REPLICATION
from .scenarios import SUPPORTED_PROTOCOLS

import logging
logger = logging.getLogger()


# Descriptions of the parameters saved in the YAML file (the format of the 'Parameters' section of docstrings)
_power_study_param_descriptions = """
    scenario_file : str
        path to the scenario file (JSON), the name of the shipped scenario file
        (e.g. 'scenarios_2d.json') or its tag ('1d', '2d' or '4d')

    cases : list(int) or None
        IDs of the cases to run. All cases from the scenario file are run if None.

    methods : list(str) or None
        names of the methods: energy, fr, nn, ks, cvm, chi2. Methods listed in the scenario
        file are used if None.

    sizes : list or None
        sample sizes overriding the sizes from the scenario file. Each item is an integer
        (n = m) or a string 'n,m'. Each case is run for each size.

    protocol : str or None
        origin of the second sample: 'alternative' (theta + tau * y, y drawn from pY) or
        'location-scale' (theta + tau * x, x drawn from pX). The protocol of the scenario
        file is used if None.

    seed : int or None
        seed of the study. Required: the study can not be run without the seed.

    replications : int
        the number of pairs of samples drawn for each case

    permutations : int
        the number of random relabelings in each permutation test

    alpha : float
        significance level

    mode : str
        'per-replication' (permutation test for each pair of samples) or 'fixed-critical'
        (the critical value is estimated once for each case)

    kernel : str
        distance kernel of the energy statistic: 'log', 'power:<kappa>' or 'gauss:<sigma>'

    standardize : bool
        standardize each coordinate of the pooled sample

    exhaustive_cap : int
        all partitions of the pooled sample are enumerated if their number does not exceed the cap

    processes : int
        the number of processes used to run replications (0 - the number of CPU cores)

    threads : int
        the number of threads used to evaluate statistics for relabelings

    output_dir : str
        directory for the output files 'power_<tag>.csv' and 'power_<tag>.txt'

    with_reference : bool
        add reference powers from the scenario file to the text tables
"""

# Default parameters of power studies
_power_study_param_default = {
    "scenario_file": "2d",
    "cases": None,
    "methods": None,
    "sizes": None,
    "protocol": None,
    "seed": None,
    "replications": 1000,
    "permutations": 300,
    "alpha": 0.05,
    "mode": MODE_PER_REPLICATION,
    "kernel": "log",
    "standardize": False,
    "exhaustive_cap": EXHAUSTIVE_CAP_DEFAULT,
    "processes": 1,
    "threads": 1,
    "output_dir": ".",
    "with_reference": True,
}

_power_study_param_schema = {
    "type": "object",
    "additionalProperties": False,
    "required": list(_power_study_param_default.keys()),
    "properties": {
        "scenario_file": {"type": "string"},
        "cases": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "methods": {"type": ["array", "null"], "minItems": 1, "uniqueItems": True,
                    "items": {"type": "string", "enum": list(supported_methods())}},
        "sizes": {"type": ["array", "null"], "minItems": 1,
                  "items": {"anyOf": [{"type": "integer", "minimum": 1},
                                      {"type": "string", "pattern": "^[0-9]+(,[0-9]+)?$"}]}},
        "protocol": {"type": ["string", "null"], "enum": list(SUPPORTED_PROTOCOLS) + [None]},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "replications": {"type": "integer", "minimum": 1},
        "permutations": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "mode": {"type": "string", "enum": list(SUPPORTED_MODES)},
        "kernel": {"type": "string", "pattern": "^(log|power:.+|gauss:.+)$"},
        "standardize": {"type": "boolean"},
        "exhaustive_cap": {"type": "integer", "minimum": 0},
        "processes": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string"},
        "with_reference": {"type": "boolean"},
    },
}


def _parse_param_descriptions(descriptions):
    r"""
    Splits the text formatted as the 'Parameters' section of a docstring into the list of
    ``(name, lines)`` pairs. Each parameter starts with the line ``name : type``
    indented by 4 spaces, the description lines are indented by 8 spaces.
    """
    lines = [_.rstrip() for _ in descriptions.split("\n")]
    if not all((not s) or s.startswith("    ") for s in lines):
        raise ValueError("Parameter descriptions must be indented by at least 4 spaces")
    lines = [s[4:] for s in lines]

    params = []
    for s in lines:
        match = re.search(r"^([_A-Za-z][_A-Za-z0-9]*) :", s)
        if match:
            params.append((match[1], [s]))
        elif params:
            params[-1][1].append(s)
    for _, desc in params:
        while desc and not desc[-1]:
            desc.pop(-1)
    return params


def create_power_parameter_file(file_path, *, file_overwrite=False, param_values=None):
    r"""
    Creates YAML file with parameters of a power study. Each parameter is preceded by its
    description (comment lines). Default values are used unless ``param_values`` are specified.

    Parameters
    ----------

    file_path : str
        path to the new YAML file. The directory is created if it does not exist.

    file_overwrite : bool
        overwrite the existing file. If ``False``, ``IOError`` is raised if the file exists.

    param_values : dict or None
        values of the parameters (a subset) replacing the default values

    Returns
    -------

    str
        absolute path to the created file
    """
    file_path = os.path.abspath(os.path.expanduser(file_path))
    if os.path.exists(file_path) and (not file_overwrite or not os.path.isfile(file_path)):
        raise IOError(f"File '{file_path}' already exists")

    values = dict(_power_study_param_default)
    values.update(_check_supported(param_values or {}, source="the function arguments", strict=True))

    params = _parse_param_descriptions(_power_study_param_descriptions)
    if [_[0] for _ in params] != list(values.keys()):
        raise RuntimeError("Descriptions of power study parameters do not match the default parameters")

    s_output = ("# Parameters of a power study. The file is autogenerated with the default parameters\n"
                "#   and expected to be modified by the user. 'null' stands for no value.\n\n")
    for name, desc in params:
        s_output += "\n".join(f"#  {_}" if _ else "#" for _ in desc) + "\n"
        s_output += yaml.dump({name: values[name]}, default_flow_style=None) + "\n"

    os.makedirs(os.path.dirname(file_path), exist_ok=True)
    with open(file_path, "w") as f:
        f.write(s_output)
    logger.info(f"Parameter file '{file_path}' was created")
    return file_path


def read_power_parameter_file(file_path):
    r"""
    Reads YAML parameter file. Unsupported parameters are ignored (a warning is printed).

    Returns
    -------

    dict
        supported parameters found in the file
    """
    file_path = os.path.abspath(os.path.expanduser(file_path))
    if not os.path.isfile(file_path):
        raise IOError(f"File '{file_path}' does not exist")
    with open(file_path, "r") as f:
        param_dict = yaml.safe_load(f)
    if param_dict is None:
        param_dict = {}
    if not isinstance(param_dict, dict):
        raise ScenarioError(f"Parameter file '{file_path}' must contain a dictionary of parameters")
    return _check_supported(param_dict, source=f"parameter file '{file_path}'", strict=False)


def _check_supported(params, *, source, strict):
    r"""
    Returns the dictionary of supported parameters. Unsupported parameters are reported
    as a warning or (``strict=True``) as ``ScenarioError``.
    """
    unsupported = {key: value for key, value in params.items() if key not in _power_study_param_default}
    if unsupported:
        msg = "\n    ".join(f"{key}: {value}" for key, value in unsupported.items())
        msg = f"Unsupported parameters in {source}:\n    {msg}"
        if strict:
            raise ScenarioError(msg, field_path=list(unsupported.keys())[0])
        logger.warning(msg)
    return {key: value for key, value in params.items() if key in _power_study_param_default}


def power_study_arguments(parameter_file_path=None, **kwargs):
    r"""
    Assembles the parameters of a power study: default values are replaced by the values
    from the YAML file (if ``parameter_file_path`` is specified), which are then replaced
    by keyword arguments. The result is validated against the schema.

    Returns
    -------

    dict
        complete set of parameters

    Raises
    ------

    ScenarioError
        unsupported keyword arguments or invalid parameter values. The error holds
        the name of the offending parameter.
    """
    arguments = dict(_power_study_param_default)
    if parameter_file_path:
        arguments.update(read_power_parameter_file(parameter_file_path))
    arguments.update(_check_supported(kwargs, source="the function arguments", strict=True))

    try:
        jsonschema.validate(instance=arguments, schema=_power_study_param_schema)
    except jsonschema.ValidationError as ex:
        path = "/".join(str(_) for _ in ex.absolute_path)
        raise ScenarioError(f"Invalid power study parameter '{path}': {ex.message}", field_path=path)
    return arguments
