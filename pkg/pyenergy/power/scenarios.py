r"""
Scenario files of power studies. A scenario file is a JSON document listing the cases
of a study: the parent distributions of the two samples, the location-scale transform
applied to the second sample, the sample sizes and (optionally) the reference powers
of the methods, keyed by sample sizes (``"n,m"``).
"""
import os
import json
from dataclasses import dataclass, field, replace
import jsonschema

from configs import get_scenario_file_path
from ..core.errors import ScenarioError
from ..core.methods import supported_methods
from ..simulation.distributions import family_from_dict, UNIVARIATE_FAMILIES

import logging
logger = logging.getLogger()


# Origin of the second sample: the alternative pY (theta + tau * y, y ~ pY) or
# the location-scale change of the first distribution (theta + tau * x, x ~ pX)
PROTOCOL_ALTERNATIVE = "alternative"
PROTOCOL_LOCATION_SCALE = "location-scale"
SUPPORTED_PROTOCOLS = (PROTOCOL_ALTERNATIVE, PROTOCOL_LOCATION_SCALE)

_family_names = list(UNIVARIATE_FAMILIES) + ["normal", "corr_normal", "cauchy", "student_t",
                                             "nlog", "uniform", "cook_johnson", "mixture"]

_scenario_file_schema = {
    "type": "object",
    "required": ["schema", "tag", "scenarios"],
    "properties": {
        "schema": {"type": "integer", "enum": [1]},
        "tag": {"type": "string", "pattern": "^[A-Za-z0-9_-]+$"},
        "dimension": {"type": "integer", "minimum": 1},
        "description": {"type": "string"},
        "protocol": {"type": "string", "enum": list(SUPPORTED_PROTOCOLS)},
        "methods": {"type": "array", "minItems": 1, "uniqueItems": True,
                    "items": {"type": "string", "enum": list(supported_methods())}},
        "scenarios": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/scenario"}},
    },
    "definitions": {
        "scenario": {
            "type": "object",
            "additionalProperties": False,
            "required": ["case_id", "pX", "pY", "n", "m"],
            "properties": {
                "case_id": {"type": "integer", "minimum": 1},
                "pX": {"$ref": "#/definitions/family"},
                "pY": {"$ref": "#/definitions/family"},
                "theta": {"type": "number"},
                "tau": {"type": "number", "exclusiveMinimum": 0},
                "protocol": {"type": "string", "enum": list(SUPPORTED_PROTOCOLS)},
                "n": {"type": "integer", "minimum": 1},
                "m": {"type": "integer", "minimum": 1},
                "params": {"type": "object",
                           "additionalProperties": False,
                           "properties": {"bins": {"type": "integer", "minimum": 2}}},
                "reference": {"type": "object",
                              "patternProperties": {
                                  "^[0-9]+,[0-9]+$": {
                                      "type": "object",
                                      "propertyNames": {"enum": list(supported_methods())},
                                      "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1}}},
                              "additionalProperties": False},
            },
        },
        "family": {
            "type": "object",
            "required": ["family"],
            "properties": {
                "family": {"type": "string", "enum": _family_names},
                "d": {"type": "integer", "minimum": 1},
                "a": {"type": "number", "exclusiveMinimum": 0},
                "nu": {"type": "number", "exclusiveMinimum": 0},
                "scale": {"type": "number", "exclusiveMinimum": 0},
                "mean": {"type": ["number", "array"], "items": {"type": "number"}},
                "cov": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                "elliptical": {"type": "boolean"},
                "weight": {"type": "number", "minimum": 0, "maximum": 1},
                "components": {"type": "array", "minItems": 2, "maxItems": 2,
                               "items": {"$ref": "#/definitions/family"}},
            },
            "additionalProperties": False,
        },
    },
}


def sizes_key(n, m):
    """Key of the reference power table for sample sizes ``n``, ``m``"""
    return f"{n},{m}"


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    r"""
    One cell of a power study: distributions ``pX`` and ``pY`` of the two samples,
    the transform ``theta + tau * y`` of the second sample, sample sizes and run settings.
    ``protocol`` selects the parent distribution of ``y``: ``pY`` (``"alternative"``) or
    ``pX`` (``"location-scale"``, the samples differ only by location and scale).
    ``bins`` is the number of chi-square bins, ``reference`` holds the reference powers
    ``{"n,m": {method: power}}``.
    """
    case_id: int
    pX: object
    pY: object
    theta: float = 0.0
    tau: float = 1.0
    n: int = 50
    m: int = 50
    alpha: float = 0.05
    replications: int = 1000
    permutations: int = 300
    seed: int = None
    bins: int = 5
    reference: dict = field(default_factory=dict)
    protocol: str = PROTOCOL_ALTERNATIVE

    def __post_init__(self):
        if not self.tau > 0:
            raise ScenarioError(f"Case {self.case_id}: scale parameter must be positive: tau={self.tau}",
                                field_path="tau")
        if not 0 < self.alpha < 1:
            raise ScenarioError(f"Case {self.case_id}: significance level must be in the range (0, 1): "
                                f"alpha={self.alpha}", field_path="alpha")
        if self.n < 1 or self.m < 1:
            raise ScenarioError(f"Case {self.case_id}: sample sizes must be positive: n={self.n}, m={self.m}",
                                field_path="n")
        if self.protocol not in SUPPORTED_PROTOCOLS:
            raise ScenarioError(f"Case {self.case_id}: unsupported protocol '{self.protocol}'. "
                                f"Supported protocols: {SUPPORTED_PROTOCOLS}", field_path="protocol")
        if self.pX.d != self.pY.d:
            raise ScenarioError(f"Case {self.case_id}: distributions have different dimensions: "
                                f"{self.pX.d} and {self.pY.d}", field_path="pY")

    @property
    def d(self):
        return self.pX.d

    def reference_power(self, method, n=None, m=None):
        r"""
        Returns the reference power of the method for the sample sizes (``None`` if not available).
        """
        n = self.n if n is None else n
        m = self.m if m is None else m
        return self.reference.get(sizes_key(n, m), {}).get(method)

    def with_settings(self, **kwargs):
        r"""
        Returns the copy of the scenario with modified fields, e.g. ``with_settings(n=30, m=30)``.
        """
        return replace(self, **kwargs)


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    r"""
    The contents of a scenario file.
    """
    tag: str
    scenarios: list
    dimension: int = None
    methods: list = field(default_factory=list)
    description: str = ""
    file_path: str = None

    @property
    def case_ids(self):
        return [_.case_id for _ in self.scenarios]

    def select(self, case_ids=None):
        r"""
        Returns the list of scenarios with given case IDs (all scenarios if ``case_ids`` is ``None``).

        Raises
        ------

        ScenarioError
            the file contains no case with some of the IDs
        """
        if case_ids is None:
            return list(self.scenarios)
        by_id = {_.case_id: _ for _ in self.scenarios}
        missing = [_ for _ in case_ids if _ not in by_id]
        if missing:
            raise ScenarioError(f"Scenario file '{self.tag}' contains no cases {missing}. "
                                f"Available cases: {self.case_ids}", field_path="cases")
        return [by_id[_] for _ in case_ids]


def _field_path(path):
    return "/".join(str(_) for _ in path)


def validate_scenario_data(data):
    r"""
    Validates the contents of a scenario file against the schema.

    Raises
    ------

    ScenarioError
        the data does not match the schema. The error holds the path of the offending field.
    """
    validator = jsonschema.Draft7Validator(_scenario_file_schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        path = _field_path(err.absolute_path)
        raise ScenarioError(f"Invalid scenario file: field '{path}': {err.message}", field_path=path)


def scenarios_from_dict(data, *, file_path=None):
    r"""
    Creates the set of scenarios from the dictionary (the contents of a scenario file).

    Returns
    -------

    ScenarioSet

    Raises
    ------

    ScenarioError
        the data is invalid
    """
    validate_scenario_data(data)

    dimension = data.get("dimension", None)
    protocol = data.get("protocol", PROTOCOL_ALTERNATIVE)
    scenarios, case_ids = [], set()
    for k, sc in enumerate(data["scenarios"]):
        path = f"scenarios/{k}"
        if sc["case_id"] in case_ids:
            raise ScenarioError(f"Duplicate case ID {sc['case_id']}", field_path=f"{path}/case_id")
        case_ids.add(sc["case_id"])

        p_x = family_from_dict(sc["pX"], path=f"{path}/pX")
        p_y = family_from_dict(sc["pY"], path=f"{path}/pY")
        for name, fam in (("pX", p_x), ("pY", p_y)):
            if dimension is not None and fam.d != dimension:
                raise ScenarioError(f"Case {sc['case_id']}: distribution has dimension {fam.d} "
                                    f"instead of {dimension}", field_path=f"{path}/{name}")
        try:
            spec = ScenarioSpec(case_id=sc["case_id"], pX=p_x, pY=p_y,
                                theta=sc.get("theta", 0.0), tau=sc.get("tau", 1.0),
                                n=sc["n"], m=sc["m"], bins=sc.get("params", {}).get("bins", 5),
                                reference=sc.get("reference", {}), protocol=sc.get("protocol", protocol))
        except ScenarioError as ex:
            raise ScenarioError(str(ex), field_path=f"{path}/{ex.field_path}")
        scenarios.append(spec)

    return ScenarioSet(tag=data["tag"], scenarios=scenarios, dimension=dimension,
                       methods=list(data.get("methods", [])), description=data.get("description", ""),
                       file_path=file_path)


def resolve_scenario_file(name):
    r"""
    Returns the path of the scenario file: ``name`` may be a path to an existing file,
    a name of the shipped file (``scenarios_2d.json``) or its tag (``2d``).
    """
    path = os.path.abspath(os.path.expanduser(name))
    if os.path.isfile(path):
        return path
    return get_scenario_file_path(os.path.basename(name))


def load_scenarios(file_path):
    r"""
    Loads and validates the scenario file.

    Parameters
    ----------

    file_path : str
        path to the JSON file, the name of the shipped scenario file or its tag
        (see ``resolve_scenario_file``)

    Returns
    -------

    ScenarioSet

    Raises
    ------

    IOError
        the file does not exist

    ScenarioError
        the file contents is invalid
    """
    file_path = resolve_scenario_file(file_path)
    with open(file_path, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as ex:
            raise ScenarioError(f"File '{file_path}' is not a valid JSON document: {ex}")

    scenario_set = scenarios_from_dict(data, file_path=file_path)
    logger.debug(f"Loaded {len(scenario_set.scenarios)} scenarios from '{file_path}'")
    return scenario_set
