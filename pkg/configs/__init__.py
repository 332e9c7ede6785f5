import os

import logging
logger = logging.getLogger()

# Tags of the scenario files shipped with the package
SCENARIO_TAGS = ("1d", "2d", "4d")


def get_scenario_file_path(tag):
    r"""
    Returns the absolute path to the scenario file shipped with the package.

    Parameters
    ----------

    tag : str
        tag of the scenario file (``1d``, ``2d`` or ``4d``) or the name of the file
        (e.g. ``scenarios_2d.json``)

    Returns
    -------

    str
        absolute path to the file

    Raises
    ------

    IOError
        there is no shipped scenario file with this tag
    """
    file_name = tag if tag.endswith(".json") else f"scenarios_{tag}.json"
    file_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), file_name)
    if not os.path.isfile(file_path):
        raise IOError(f"Scenario file '{tag}' is not found. Shipped scenario files: {SCENARIO_TAGS}")
    return file_path
