from .core.samples import Sample, pool, standardize, distance_matrix, read_sample_csv  # noqa: F401
from .core.kernels import (DistanceKernel, parse_kernel, kernel_eval, energy_statistic,  # noqa: F401
                           energy_divergence_unbiased, power_kernel_fourier)  # noqa: F401
from .core.graph_stats import (minimum_spanning_tree, friedman_rafsky_statistic,  # noqa: F401
                               nearest_neighbor_statistic)  # noqa: F401
from .core.univariate_stats import ks_statistic, cvm_statistic, chi2_equal_prob_statistic  # noqa: F401
from .core.permutation import (permutation_null, p_value, critical_value, calibrate_alpha,  # noqa: F401
                               calibration_table)  # noqa: F401
from .core.methods import two_sample_test, supported_methods  # noqa: F401
from .simulation.distributions import (sample_univariate, sample_multivariate, cook_johnson,  # noqa: F401
                                       location_scale)  # noqa: F401
from .power.scenarios import load_scenarios  # noqa: F401
from .power.power_lab import run_scenario, run_power_study  # noqa: F401
from .power.tables import render_tables, save_tables  # noqa: F401
from .power.param_files import create_power_parameter_file  # noqa: F401
from .power.study import power_study  # noqa: F401

# Note:  the statement '# noqa: F401' is telling flake8 to ignore violation F401 at the given line
#     Violation F401 - the package is imported but unused

import logging
logger = logging.getLogger()

logger.setLevel(logging.INFO)

formatter = logging.Formatter(fmt='%(asctime)s : %(levelname)s : %(message)s')

stream_handler = logging.StreamHandler()
stream_handler.setFormatter(formatter)
stream_handler.setLevel(logging.INFO)
logger.addHandler(stream_handler)


def pyenergy_api():
    r"""
    =======================================================================================
    Module ``pyenergy.api`` supports the following functions:

        Two-sample tests:
          two_sample_test - permutation test (energy, fr, nn, ks, cvm, chi2)
          read_sample_csv - load a sample from CSV file

        Statistics:
          energy_statistic, energy_divergence_unbiased, friedman_rafsky_statistic,
          nearest_neighbor_statistic, ks_statistic, cvm_statistic, chi2_equal_prob_statistic

        Power studies:
          load_scenarios - load scenario file ('1d', '2d', '4d' or path to JSON file)
          run_scenario - estimate power of methods for one scenario
          power_study - run the study from YAML parameter file and save the tables
          create_power_parameter_file - create YAML parameter file with default values

        Calibration:
          calibrate_alpha, calibration_table - spread of the achieved significance level

        VIEW THIS MESSAGE AT ANY TIME: pyenergy_api()

    For more detailed descriptions of the supported functions, type ``help(<function-name>)``
    in IPython command prompt.
    =========================================================================================
    """
    print(pyenergy_api.__doc__)


pyenergy_api()
