r"""
Command line interface: two-sample tests on CSV data, power studies and calibration
of the significance level of the permutation test.

    pyenergy test --a a.csv --b b.csv --method energy --seed 42
    pyenergy power --config 2d --cases 1 --methods energy,fr,nn --seed 7
    pyenergy calibrate --n 50 --m 50 --permutations 100,300,500,1000 --repeats 100 --seed 1

Results are printed to stdout as JSON documents, human-readable text and log messages
are printed to stderr. Exit status: 0 - success, 2 - invalid input or parameters,
3 - degenerate data (e.g. coincident observations with a singular kernel).
"""
import os
import sys
import json
import time
import argparse
import multiprocessing

from ._version import __version__
from .core.errors import DataDegeneracyError
from .core.samples import read_sample_csv
from .core.methods import two_sample_test, supported_methods
from .core.permutation import calibration_table, EXHAUSTIVE_CAP_DEFAULT
from .power.param_files import create_power_parameter_file
from .power.study import power_study
from .power.power_lab import MODE_FIXED_CRITICAL, MODE_PER_REPLICATION
from .power.scenarios import SUPPORTED_PROTOCOLS

import logging
logger = logging.getLogger()


JSON_SCHEMA_VERSION = 1
SEED_ENV_VARIABLE = "ENERGY2_SEED"

EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE_DATA = 3

# The number of permutations used by 'power --paper-scale'
PAPER_SCALE_PERMUTATIONS = 1000


def _int_list(s):
    try:
        values = [int(_) for _ in s.split(",") if _.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: '{s}'")
    if not values:
        raise argparse.ArgumentTypeError(f"expected at least one integer: '{s}'")
    return values


def _sizes_list(s):
    r"""
    Sample sizes: comma-separated list of ``n`` (``n = m``) or ``nxm`` items, e.g. ``30,50,100`` or ``50x40``.
    """
    sizes = []
    for item in s.split(","):
        item = item.strip().lower()
        if not item:
            continue
        try:
            parts = [int(_) for _ in item.split("x")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid sample size '{item}'")
        if len(parts) not in (1, 2) or min(parts) < 1:
            raise argparse.ArgumentTypeError(f"invalid sample size '{item}'")
        sizes.append(",".join(str(_) for _ in parts))
    if not sizes:
        raise argparse.ArgumentTypeError(f"expected at least one sample size: '{s}'")
    return sizes


def _method_list(s):
    return [_.strip() for _ in s.split(",") if _.strip()]


def _add_common_arguments(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help=f"seed of random streams (default: environment variable {SEED_ENV_VARIABLE})")
    parser.add_argument("--threads", type=int, default=None,
                        help="the number of parallel workers, 0 - the number of CPU cores (default: 0; "
                             "'power' uses the value from the parameter file). "
                             "Results do not depend on the number of workers.")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--verbose", action="store_true", help="print debug messages")
    group.add_argument("--quiet", action="store_true", help="print only warnings and errors")


def build_parser():
    r"""
    Creates the argument parser with subcommands ``test``, ``power`` and ``calibrate``.
    """
    parser = argparse.ArgumentParser(prog="pyenergy", description="Two-sample energy test and competitor tests")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    p = subparsers.add_parser("test", help="run two-sample permutation test on samples from CSV files",
                              description="Run two-sample permutation test on samples from CSV files. "
                                          "Each line of a file is one observation (comma-separated coordinates).")
    p.add_argument("--a", dest="file_a", required=True, help="CSV file with the first sample")
    p.add_argument("--b", dest="file_b", required=True, help="CSV file with the second sample")
    p.add_argument("--method", default="energy", choices=supported_methods(),
                   help="test statistic (default: energy)")
    p.add_argument("--permutations", type=int, default=1000,
                   help="the number of random relabelings B (default: 1000)")
    p.add_argument("--alpha", type=float, default=0.05, help="significance level (default: 0.05)")
    p.add_argument("--kernel", default="log",
                   help="distance kernel of the energy statistic: log, power:<kappa> or gauss:<sigma> "
                        "(default: log)")
    p.add_argument("--min-distance", type=float, default=None,
                   help="distance floor for kernels singular at zero distance (default: no floor)")
    p.add_argument("--standardize", action="store_true",
                   help="standardize each coordinate of the pooled sample to zero mean and unit variance")
    p.add_argument("--has-header", action="store_true", help="skip the first line of CSV files")
    p.add_argument("--bins", type=int, default=5, help="the number of bins of chi2 statistic (default: 5)")
    p.add_argument("--exhaustive-cap", type=int, default=EXHAUSTIVE_CAP_DEFAULT,
                   help="enumerate all partitions if their number does not exceed the cap, "
                        f"0 - never (default: {EXHAUSTIVE_CAP_DEFAULT})")
    _add_common_arguments(p)
    p.set_defaults(func=cmd_test)

    # Defaults of 'power' options are None: the values from the parameter file are not overridden
    p = subparsers.add_parser("power", help="run power study for cases of a scenario file",
                              description="Run power study for cases of a scenario file. The results are "
                                          "saved to files 'power_<tag>.csv' and 'power_<tag>.txt'.")
    p.add_argument("--config", dest="scenario_file", default=None,
                   help="scenario file: path, shipped file name or tag 1d, 2d, 4d (default: 2d)")
    p.add_argument("--parameter-file", default=None, help="YAML file with parameters of the study")
    p.add_argument("--create-parameter-file", default=None, metavar="PATH",
                   help="create YAML parameter file with default values and exit")
    p.add_argument("--cases", type=_int_list, default=None, help="comma-separated case IDs (default: all)")
    p.add_argument("--methods", type=_method_list, default=None,
                   help="comma-separated methods (default: methods listed in the scenario file)")
    p.add_argument("--sizes", type=_sizes_list, default=None,
                   help="comma-separated sample sizes, n or nxm, e.g. 30,50,100 (default: from scenario file)")
    p.add_argument("--protocol", choices=SUPPORTED_PROTOCOLS, default=None,
                   help="origin of the second sample: alternative (theta + tau * y, y from pY) or "
                        "location-scale (theta + tau * x, x from pX) (default: from scenario file)")
    p.add_argument("--replications", type=int, default=None, help="the number of replications (default: 1000)")
    p.add_argument("--permutations", type=int, default=None,
                   help="the number of permutations per test (default: 300)")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use {PAPER_SCALE_PERMUTATIONS} permutations per test")
    p.add_argument("--fixed-critical", action="store_true",
                   help="estimate critical values once per case instead of running a test per replication")
    p.add_argument("--alpha", type=float, default=None, help="significance level (default: 0.05)")
    p.add_argument("--kernel", default=None, help="distance kernel of the energy statistic (default: log)")
    p.add_argument("--standardize", action="store_true", default=None,
                   help="standardize each coordinate of the pooled samples")
    p.add_argument("--no-reference", action="store_true",
                   help="do not add reference powers to the text tables")
    p.add_argument("--out-dir", dest="output_dir", default=None,
                   help="directory for the output files (default: current directory)")
    _add_common_arguments(p)
    p.set_defaults(func=cmd_power)

    p = subparsers.add_parser("calibrate", help="estimate the spread of the achieved significance level",
                              description="Estimate the central 95%% interval of the achieved significance "
                                          "level of the permutation energy test for given numbers of "
                                          "permutations.")
    p.add_argument("--n", type=int, default=50, help="size of the first sample (default: 50)")
    p.add_argument("--m", type=int, default=50, help="size of the second sample (default: 50)")
    p.add_argument("--permutations", type=_int_list, default=[1000],
                   help="comma-separated numbers of permutations, e.g. 100,300,500,1000 (default: 1000)")
    p.add_argument("--repeats", type=int, default=100,
                   help="the number of critical values estimated for each number of permutations (default: 100)")
    p.add_argument("--alpha", type=float, default=0.05, help="nominal significance level (default: 0.05)")
    p.add_argument("--dimension", type=int, default=1, help="dimension of the observations (default: 1)")
    p.add_argument("--reference-size", type=int, default=100_000,
                   help="the number of relabelings in the reference null distribution (default: 100000)")
    _add_common_arguments(p)
    p.set_defaults(func=cmd_calibrate)

    return parser


def setup_logging(*, verbose=False, quiet=False):
    r"""
    Sends log messages to stderr. The level is INFO, DEBUG (``verbose``) or WARNING (``quiet``).
    """
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logger.setLevel(level)

    formatter = logging.Formatter(fmt='%(asctime)s : %(levelname)s : %(message)s')

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    stream_handler.setLevel(level)
    logger.addHandler(stream_handler)
    return stream_handler


def _resolve_seed(seed, *, required=True):
    if seed is not None:
        return seed
    env_seed = os.environ.get(SEED_ENV_VARIABLE, None)
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise ValueError(f"Environment variable {SEED_ENV_VARIABLE} must be an integer: '{env_seed}'")
    if required:
        raise ValueError(f"Seed is not specified: use --seed or set environment variable {SEED_ENV_VARIABLE}")
    return None


def _resolve_threads(threads):
    if threads is None:
        threads = 0
    if threads < 0:
        raise ValueError(f"The number of workers must be non-negative: {threads}")
    return threads or multiprocessing.cpu_count()


def _print_json(doc):
    doc = dict(doc, schema=JSON_SCHEMA_VERSION)
    sys.stdout.write(json.dumps(doc, separators=(",", ":"), sort_keys=True) + "\n")
    sys.stdout.flush()


def _print_text(items):
    width = max(len(_[0]) for _ in items)
    sys.stderr.write("\n".join(f"{key:<{width}} : {value}" for key, value in items) + "\n")


def _finite_or_none(v):
    return v if v == v else None


def cmd_test(args):
    r"""
    Runs the permutation test for the samples from two CSV files and prints the outcome.
    """
    seed = _resolve_seed(args.seed)
    a = read_sample_csv(args.file_a, has_header=args.has_header)
    b = read_sample_csv(args.file_b, has_header=args.has_header)

    outcome = two_sample_test(a, b, args.method, seed=seed, permutations=args.permutations, alpha=args.alpha,
                              kernel=args.kernel, min_distance=args.min_distance, standardize=args.standardize,
                              bins=args.bins, exhaustive_cap=args.exhaustive_cap,
                              threads=_resolve_threads(args.threads))

    doc = {"method": outcome.method, "statistic": outcome.statistic, "p_value": outcome.p_value,
           "critical_value": _finite_or_none(outcome.critical_value), "alpha": outcome.alpha,
           "n": outcome.n, "m": outcome.m, "d": outcome.d, "permutations": outcome.B, "seed": outcome.seed,
           "standardized": outcome.options["standardized"], "kernel": outcome.options.get("kernel", None),
           "exhaustive": outcome.exhaustive, "rejected": outcome.rejected}
    if "min_distance" in outcome.options:
        doc["min_distance"] = outcome.options["min_distance"]
    if "bins" in outcome.options:
        doc["bins"] = outcome.options["bins"]
    _print_json(doc)

    _print_text([("method", outcome.method), ("statistic", f"{outcome.statistic:.6g}"),
                 ("p-value", f"{outcome.p_value:.6g}"), ("critical value", f"{outcome.critical_value:.6g}"),
                 ("alpha", outcome.alpha), ("n, m, d", f"{outcome.n}, {outcome.m}, {outcome.d}"),
                 ("permutations", f"{outcome.B}" + (" (all partitions)" if outcome.exhaustive else "")),
                 ("seed", outcome.seed),
                 ("decision", "reject H0" if outcome.rejected else "do not reject H0")])
    return EXIT_SUCCESS


def cmd_power(args):
    r"""
    Runs the power study and saves the tables.
    """
    if args.create_parameter_file:
        create_power_parameter_file(args.create_parameter_file)
        return EXIT_SUCCESS

    kwargs = {"scenario_file": args.scenario_file, "cases": args.cases, "methods": args.methods,
              "sizes": args.sizes, "protocol": args.protocol, "replications": args.replications,
              "permutations": args.permutations, "alpha": args.alpha, "kernel": args.kernel,
              "standardize": args.standardize, "output_dir": args.output_dir}
    kwargs = {key: value for key, value in kwargs.items() if value is not None}
    if args.paper_scale:
        kwargs["permutations"] = PAPER_SCALE_PERMUTATIONS
    if args.fixed_critical:
        kwargs["mode"] = MODE_FIXED_CRITICAL
    if args.no_reference:
        kwargs["with_reference"] = False
    # Explicit seed overrides the parameter file, the environment variable is the fallback
    seed = _resolve_seed(args.seed, required=not args.parameter_file)
    if seed is not None:
        kwargs["seed"] = seed
    if args.threads is not None:
        kwargs["processes"] = _resolve_threads(args.threads)

    t0 = time.time()
    result = power_study(args.parameter_file, **kwargs)
    wall_time = time.time() - t0

    sys.stderr.write(result.document.text)
    _print_json({"csv_file": result.file_paths[0], "text_file": result.file_paths[1],
                 "reports": len(result.reports),
                 "mode": result.reports[0].mode if result.reports else MODE_PER_REPLICATION})
    sys.stderr.write(f"Total wall time: {wall_time:.1f} s\n")
    return EXIT_SUCCESS


def cmd_calibrate(args):
    r"""
    Estimates the intervals of the achieved significance level and prints them.
    """
    seed = _resolve_seed(args.seed)
    results = calibration_table(args.permutations, n=args.n, m=args.m, repeats=args.repeats, seed=seed,
                                alpha=args.alpha, d=args.dimension, reference_size=args.reference_size,
                                threads=_resolve_threads(args.threads))
    if len(results) == 1:
        _print_json(results[0].to_dict())
    else:
        _print_json({"results": [_.to_dict() for _ in results]})
    _print_text([(f"B={_.B}", f"[{_.interval_low:.4f}, {_.interval_high:.4f}]") for _ in results])
    return EXIT_SUCCESS


def main(argv=None):
    r"""
    Entry point of the command line interface. Returns the exit status.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = setup_logging(verbose=args.verbose, quiet=args.quiet)
    try:
        return args.func(args)
    except DataDegeneracyError as ex:
        logger.error(f"Degenerate data: {ex}")
        return EXIT_DEGENERATE_DATA
    except (ValueError, IOError, RuntimeError) as ex:
        logger.error(f"{ex}")
        return EXIT_INPUT_ERROR
    finally:
        logger.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
