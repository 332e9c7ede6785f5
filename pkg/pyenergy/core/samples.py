r"""
Containers for samples and pooled samples, coordinate standardization and
Euclidean distance matrices. Distances are computed once per pool and are shared
(read-only) by all test statistics and all relabelings of the pool.
"""
import os
from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist, squareform

from .errors import InvalidSample, DimensionMismatch, DegenerateCoordinate, CsvFormatError

import logging
logger = logging.getLogger()


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Sample:
    r"""
    Sample of ``n`` observations in ``d`` dimensions. The data is stored as read-only
    2D array of shape ``(n, d)``. One-dimensional input is treated as ``n`` observations
    of dimension 1.
    """
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim == 1:
            data = data.reshape(-1, 1)
        if data.ndim != 2:
            raise InvalidSample(f"Sample data must be 1D or 2D array: data has {data.ndim} dimensions")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidSample(f"Sample must contain at least one observation of dimension 1 or higher: "
                                f"shape {data.shape}")
        if not np.all(np.isfinite(data)):
            n_bad = int(np.count_nonzero(~np.isfinite(data)))
            raise InvalidSample(f"Sample contains {n_bad} non-finite value(s) (NaN or infinity)")
        object.__setattr__(self, "data", _readonly(data))

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def d(self):
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class LabeledPool:
    r"""
    Pooled observations of two samples. ``labels`` is a boolean array: ``True`` marks
    observations of sample A, ``False`` - observations of sample B.
    """
    points: np.ndarray
    labels: np.ndarray
    n: int
    m: int

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        labels = np.array(self.labels, dtype=bool)
        if points.ndim != 2:
            raise InvalidSample(f"Pooled points must be 2D array: {points.ndim} dimensions")
        if labels.shape != (points.shape[0],):
            raise InvalidSample(f"The number of labels ({labels.size}) does not match "
                                f"the number of points ({points.shape[0]})")
        if self.n + self.m != points.shape[0]:
            raise InvalidSample(f"Pool size N={points.shape[0]} is not equal to n + m = {self.n} + {self.m}")
        if int(np.count_nonzero(labels)) != self.n:
            raise InvalidSample(f"The number of A-labels ({np.count_nonzero(labels)}) is not equal to n={self.n}")
        object.__setattr__(self, "points", _readonly(points))
        object.__setattr__(self, "labels", _readonly(labels))

    @property
    def N(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def split(self):
        r"""
        Separates the pool into the samples A and B (the order of rows within each sample
        is preserved).

        Returns
        -------

        tuple(Sample, Sample)
        """
        return Sample(self.points[self.labels]), Sample(self.points[~self.labels])

    def relabeled(self, labels):
        r"""
        Returns the pool with the same points and different assignment of labels.
        The number of A-labels must remain equal to ``n``.
        """
        return LabeledPool(points=self.points, labels=labels, n=self.n, m=self.m)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    r"""
    Symmetric matrix of Euclidean distances between pooled observations.

    ``condensed`` holds the distances for pairs ``i < j`` in row-major order (the layout
    used by ``scipy.spatial.distance.pdist``), ``dist`` is the full square matrix.
    ``min_offdiag`` is the smallest distance between two different observations and
    ``min_pair`` is the (lexicographically first) pair of indices with that distance,
    ``d`` is the dimension of the observations.
    """
    dist: np.ndarray
    condensed: np.ndarray
    min_offdiag: float
    min_pair: tuple = field(default=None)
    d: int = field(default=None)

    @property
    def N(self):
        return self.dist.shape[0]

    def coincident_pairs(self):
        r"""
        Returns the list of pairs ``(i, j)``, ``i < j`` of observations with zero distance.
        """
        iu, ju = np.triu_indices(self.N, k=1)
        sel = self.condensed == 0
        return list(zip(iu[sel].tolist(), ju[sel].tolist()))


def pool(a, b):
    r"""
    Merges two samples. Observations of ``a`` are followed by the observations of ``b``,
    the original order of rows is preserved.

    Parameters
    ----------

    a, b : Sample
        samples of the same dimension

    Returns
    -------

    LabeledPool

    Raises
    ------

    DimensionMismatch
        the samples have different dimensions
    """
    if a.d != b.d:
        raise DimensionMismatch(f"Samples have different dimensions: {a.d} and {b.d}")
    points = np.concatenate((a.data, b.data), axis=0)
    labels = np.concatenate((np.ones(a.n, dtype=bool), np.zeros(b.n, dtype=bool)))
    return LabeledPool(points=points, labels=labels, n=a.n, m=b.n)


def standardize(lpool):
    r"""
    Normalizes each coordinate of the pooled sample: ``z -> (z - mu_k) / sigma_k``, where
    ``mu_k`` and ``sigma_k`` are the mean and standard deviation (population form, divided by N)
    of coordinate ``k`` of the pooled sample. Labels are not changed.

    Parameters
    ----------

    lpool : LabeledPool
        pooled sample, N >= 2

    Returns
    -------

    LabeledPool
        standardized pooled sample

    Raises
    ------

    DegenerateCoordinate
        some coordinate has zero variance over the pooled sample
    """
    points = lpool.points
    if lpool.N < 2:
        raise DegenerateCoordinate(f"At least 2 observations are needed for standardization: N={lpool.N}")
    mu = np.mean(points, axis=0)
    sigma = np.std(points, axis=0, ddof=0)
    degenerate = (np.ptp(points, axis=0) == 0) | (sigma == 0)
    if np.any(degenerate):
        raise DegenerateCoordinate(f"Coordinate(s) {np.flatnonzero(degenerate).tolist()} "
                                   f"have zero variance over the pooled sample")
    return LabeledPool(points=(points - mu) / sigma, labels=lpool.labels, n=lpool.n, m=lpool.m)


def distance_matrix(lpool):
    r"""
    Computes the matrix of Euclidean distances between all observations of the pool.
    Coincident observations are allowed: they are recorded in ``min_offdiag``/``min_pair``
    and rejected only by kernels that are singular at zero distance.

    Parameters
    ----------

    lpool : LabeledPool
        pooled sample (or any object with ``points`` attribute holding (N, d) array)

    Returns
    -------

    DistanceMatrix
    """
    points = lpool.points
    condensed = pdist(points, metric="euclidean")
    dist = squareform(condensed, checks=False)
    if condensed.size:
        k = int(np.argmin(condensed))
        iu, ju = np.triu_indices(points.shape[0], k=1)
        min_offdiag, min_pair = float(condensed[k]), (int(iu[k]), int(ju[k]))
    else:
        min_offdiag, min_pair = float("inf"), None
    if min_offdiag == 0:
        logger.debug(f"Pooled sample contains coincident observations, e.g. rows {min_pair}")
    return DistanceMatrix(dist=_readonly(dist), condensed=_readonly(condensed),
                          min_offdiag=min_offdiag, min_pair=min_pair, d=int(points.shape[1]))


def read_sample_csv(file_path, *, has_header=False):
    r"""
    Reads a sample from CSV file: one observation per line, coordinates are decimal
    numbers separated by commas. Missing values are not allowed. Empty lines are skipped.

    Parameters
    ----------

    file_path : str
        absolute or relative path to the CSV file

    has_header : bool
        skip the first line of the file (column labels)

    Returns
    -------

    Sample

    Raises
    ------

    IOError
        the file does not exist

    CsvFormatError
        the file is malformed. The message contains the file name and the line number.
    """
    file_path = os.path.abspath(os.path.expanduser(file_path))
    if not os.path.isfile(file_path):
        raise IOError(f"File '{file_path}' does not exist")

    n_skip = 1 if has_header else 0
    try:
        # Raw cells are kept as strings, so that 'nan' or empty cells are not silently converted
        df = pd.read_csv(file_path, header=None, skiprows=n_skip, dtype=str, skip_blank_lines=False,
                         keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise CsvFormatError(f"File '{file_path}' contains no observations")
    except pd.errors.ParserError as ex:
        raise CsvFormatError(f"File '{file_path}': {ex}") from ex

    # Line numbers in the file (1-based) of the rows of the data frame
    n_lines = df.index.to_numpy() + 1 + n_skip

    raw = df.apply(lambda col: col.str.strip())
    absent = raw.isna().to_numpy()
    empty = absent | (raw.fillna("") == "").to_numpy()
    blank = np.all(empty, axis=1)
    raw, absent, empty, n_lines = raw[~blank], absent[~blank], empty[~blank], n_lines[~blank]
    if not len(raw):
        raise CsvFormatError(f"File '{file_path}' contains no observations")

    values = raw.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = empty | ~np.isfinite(values)
    if np.any(bad):
        row, col = np.argwhere(bad)[0]
        n_line, cell = n_lines[row], raw.iat[row, col]
        if np.any(absent[row]):
            n_values = int(np.count_nonzero(~absent[row]))
            msg = f"{n_values} values instead of {values.shape[1]}"
        elif empty[row, col]:
            msg = f"missing value in column {col + 1}"
        elif np.isnan(values[row, col]) and cell.lower().lstrip("+-") != "nan":
            msg = f"non-numeric value {cell!r} in column {col + 1}"
        else:
            msg = f"non-finite value {cell!r} in column {col + 1}"
        raise CsvFormatError(f"File '{file_path}', line {n_line}: {msg}")

    logger.debug(f"Loaded {values.shape[0]} observations of dimension {values.shape[1]} from '{file_path}'")
    return Sample(values)
