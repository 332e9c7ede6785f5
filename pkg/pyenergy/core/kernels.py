r"""
Distance kernels and energy statistics of two pooled samples.

The statistic is computed from the precomputed distance matrix of the pooled sample.
Kernel values are evaluated once per pool and kept in condensed (row-major ``i < j``)
layout, so that any number of relabelings of the pool can be evaluated without
touching the distances again.
"""
from dataclasses import dataclass, field
import numpy as np
from scipy.special import gammaln

from .errors import SingularDistance, DomainError, InsufficientSample, InvalidSample

import logging
logger = logging.getLogger()


KERNEL_LOG = "log"
KERNEL_POWER = "power"
KERNEL_GAUSS = "gauss"

_supported_kernels = (KERNEL_LOG, KERNEL_POWER, KERNEL_GAUSS)

# Upper limit on the number of elements in temporary arrays created while
#   evaluating a block of labelings
_max_block_elements = 4_000_000


@dataclass(frozen=True)
class DistanceKernel:
    r"""
    Decreasing function ``R(r)`` of the Euclidean distance.

    ``kind`` is one of ``"log"`` (``-ln r``), ``"power"`` (``r**(-param)``) or
    ``"gauss"`` (``exp(-r**2 / (2 * param**2))``). ``min_distance`` (optional, positive)
    replaces distances smaller than ``min_distance`` before evaluation of the kernels
    that are singular at zero distance. If ``min_distance`` is not set, zero distance
    is an error for those kernels.
    """
    kind: str = KERNEL_LOG
    param: float = None
    min_distance: float = field(default=None)

    def __post_init__(self):
        if self.kind not in _supported_kernels:
            raise DomainError(f"Kernel '{self.kind}' is not supported. Supported kernels: {_supported_kernels}")
        if self.kind == KERNEL_LOG:
            if self.param is not None:
                raise DomainError(f"Logarithmic kernel has no parameters: {self.param!r} is passed")
        else:
            if self.param is None or not np.isfinite(self.param) or self.param <= 0:
                name = "kappa" if self.kind == KERNEL_POWER else "sigma"
                raise DomainError(f"Kernel '{self.kind}': parameter {name} must be positive: {self.param!r}")
            object.__setattr__(self, "param", float(self.param))
        if self.min_distance is not None:
            if not np.isfinite(self.min_distance) or self.min_distance <= 0:
                raise DomainError(f"Minimum distance must be positive number: {self.min_distance!r}")
            object.__setattr__(self, "min_distance", float(self.min_distance))

    @property
    def singular(self):
        """``True`` if the kernel is infinite at zero distance"""
        return self.kind in (KERNEL_LOG, KERNEL_POWER)

    def __str__(self):
        if self.kind == KERNEL_LOG:
            return KERNEL_LOG
        return f"{self.kind}:{self.param:g}"


@dataclass(frozen=True)
class EnergyValue:
    r"""
    The value of the energy statistic and its three terms (within-A, within-B and cross term).
    """
    phi: float
    phi_a: float
    phi_b: float
    phi_ab: float


def parse_kernel(kernel_str, *, min_distance=None):
    r"""
    Creates the kernel from its string description: ``log``, ``power:<kappa>`` or
    ``gauss:<sigma>``, e.g. ``power:0.5``.

    Parameters
    ----------

    kernel_str : str
        kernel description

    min_distance : float or None
        optional distance floor for the kernels singular at zero distance

    Returns
    -------

    DistanceKernel

    Raises
    ------

    DomainError
        the string can not be parsed or the parameter is out of range
    """
    if isinstance(kernel_str, DistanceKernel):
        return kernel_str
    s = str(kernel_str).strip().lower()
    kind, sep, param = s.partition(":")
    if kind == KERNEL_LOG:
        if sep:
            raise DomainError(f"Logarithmic kernel does not accept parameters: '{kernel_str}'")
        return DistanceKernel(kind=KERNEL_LOG, min_distance=min_distance)
    if kind in (KERNEL_POWER, KERNEL_GAUSS):
        if not sep or not param:
            raise DomainError(f"Kernel '{kind}' requires a parameter, e.g. '{kind}:0.5': '{kernel_str}'")
        try:
            value = float(param)
        except ValueError:
            raise DomainError(f"Invalid kernel parameter in '{kernel_str}'")
        return DistanceKernel(kind=kind, param=value, min_distance=min_distance)
    raise DomainError(f"Unknown kernel '{kernel_str}'. Supported formats: 'log', 'power:<kappa>', 'gauss:<sigma>'")


def _check_dimension(kernel, d):
    if kernel.kind == KERNEL_POWER and d is not None and not kernel.param < d:
        raise DomainError(f"Power-law kernel requires kappa < d: kappa={kernel.param}, d={d}")


def kernel_values(kernel, r, *, pair_indices=None):
    r"""
    Evaluates the kernel for the array of distances.

    Parameters
    ----------

    kernel : DistanceKernel

    r : ndarray
        array of non-negative distances

    pair_indices : tuple(ndarray, ndarray) or None
        row indices corresponding to each element of ``r`` (e.g. ``np.triu_indices``).
        Used only to identify the offending pair of observations in the error message.

    Returns
    -------

    ndarray
        kernel values, same shape as ``r``

    Raises
    ------

    SingularDistance
        zero distance is passed to the kernel singular at zero and ``min_distance`` is not set
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("Distances must be non-negative")

    if kernel.singular:
        if kernel.min_distance is not None:
            r = np.maximum(r, kernel.min_distance)
        elif np.any(r == 0):
            pair = None
            if pair_indices is not None:
                k = int(np.flatnonzero(r.ravel() == 0)[0])
                pair = (int(pair_indices[0][k]), int(pair_indices[1][k]))
            msg = "Zero distance between observations"
            if pair is not None:
                msg += f" {pair[0]} and {pair[1]} (coincident points)"
            msg += f": kernel '{kernel}' is singular at zero distance"
            raise SingularDistance(msg, pair=pair)

    if kernel.kind == KERNEL_LOG:
        return -np.log(r)
    elif kernel.kind == KERNEL_POWER:
        return r ** (-kernel.param)
    else:
        return np.exp(-np.square(r) / (2 * kernel.param ** 2))


def kernel_eval(kernel, r):
    r"""
    Evaluates the kernel for a single distance ``r``.

    Examples
    --------

    >>> kernel_eval(DistanceKernel("log"), np.e)
    -1.0
    """
    return float(kernel_values(kernel, np.array([r]))[0])


class EnergyEvaluator:
    r"""
    Evaluates the energy statistic for arbitrary labelings of one pooled sample.
    Kernel values are computed once at construction.

    Parameters
    ----------

    dm : DistanceMatrix
        distances between the pooled observations

    kernel : DistanceKernel

    unbiased : bool
        use the denominators ``n(n-1)`` and ``m(m-1)`` for the within-sample terms
        instead of ``n**2`` and ``m**2``
    """

    def __init__(self, dm, kernel, *, unbiased=False):
        _check_dimension(kernel, dm.d)
        if kernel.singular and kernel.min_distance is None and dm.min_offdiag == 0:
            pairs = dm.coincident_pairs()
            listed = ", ".join(f"({i}, {j})" for i, j in pairs[:5])
            if len(pairs) > 5:
                listed += ", ..."
            raise SingularDistance(
                f"Zero distance between observations {pairs[0][0]} and {pairs[0][1]} "
                f"(coincident points, {len(pairs)} pair(s): {listed}): "
                f"kernel '{kernel}' is singular at zero distance, set the minimum distance "
                f"('min_distance') or use a kernel that is finite at zero",
                pair=pairs[0],
            )
        self._N = dm.N
        self._iu, self._ju = np.triu_indices(self._N, k=1)
        self._values = kernel_values(kernel, dm.condensed, pair_indices=(self._iu, self._ju))
        self.kernel = kernel
        self.unbiased = unbiased

    def _denominators(self, n, m):
        if self.unbiased:
            if n < 2 or m < 2:
                raise InsufficientSample(f"Unbiased energy estimate requires n >= 2 and m >= 2: n={n}, m={m}")
            return n * (n - 1), m * (m - 1), n * m
        return n ** 2, m ** 2, n * m

    def terms(self, labels_block, n, m):
        r"""
        Computes the three terms of the statistic for a block of labelings.

        Parameters
        ----------

        labels_block : ndarray(bool)
            array of shape ``(K, N)``, each row is a labeling (``True`` - sample A)

        n, m : int
            sizes of the samples A and B

        Returns
        -------

        tuple(ndarray, ndarray, ndarray)
            arrays ``phi_a``, ``phi_b``, ``phi_ab``, each of size K
        """
        labels_block = np.asarray(labels_block, dtype=bool)
        if labels_block.ndim != 2 or labels_block.shape[1] != self._N:
            raise InvalidSample(f"Labels must be an array of shape (K, {self._N}): shape {labels_block.shape}")
        den_a, den_b, den_ab = self._denominators(n, m)

        n_rows = labels_block.shape[0]
        s_a, s_b, s_ab = np.zeros(n_rows), np.zeros(n_rows), np.zeros(n_rows)
        # Rows are summed independently, so the result for a labeling
        #   does not depend on the size of the chunk
        chunk = max(1, _max_block_elements // max(self._values.size, 1))
        for k in range(0, n_rows, chunk):
            lb = labels_block[k: k + chunk]
            li, lj = lb[:, self._iu], lb[:, self._ju]
            s_a[k: k + chunk] = np.where(li & lj, self._values, 0.0).sum(axis=1)
            s_b[k: k + chunk] = np.where(~(li | lj), self._values, 0.0).sum(axis=1)
            s_ab[k: k + chunk] = np.where(li ^ lj, self._values, 0.0).sum(axis=1)

        return s_a / den_a, s_b / den_b, -s_ab / den_ab

    def evaluate_block(self, labels_block, n, m):
        r"""
        Returns the array of statistic values for a block of labelings (see ``terms``).
        """
        phi_a, phi_b, phi_ab = self.terms(labels_block, n, m)
        return phi_a + phi_b + phi_ab

    def evaluate(self, labels, n, m):
        r"""
        Returns the statistic for a single labeling as ``EnergyValue``.
        """
        labels = np.asarray(labels, dtype=bool).reshape(1, -1)
        phi_a, phi_b, phi_ab = (float(_[0]) for _ in self.terms(labels, n, m))
        return EnergyValue(phi=phi_a + phi_b + phi_ab, phi_a=phi_a, phi_b=phi_b, phi_ab=phi_ab)


def _check_labels(labels, n, m):
    labels = np.asarray(labels, dtype=bool)
    if labels.ndim != 1 or labels.size != n + m or int(np.count_nonzero(labels)) != n:
        raise InvalidSample(f"Labels are inconsistent with sample sizes n={n}, m={m}")
    return labels


def energy_statistic(dm, labels, n, m, kernel):
    r"""
    Computes the energy statistic of two samples

        Phi = 1/n**2 * sum_{i<j in A} R(r_ij) + 1/m**2 * sum_{i<j in B} R(r_ij)
              - 1/(n*m) * sum_{i in A, j in B} R(r_ij)

    Large values indicate that the samples are drawn from different distributions.

    Parameters
    ----------

    dm : DistanceMatrix
        distances between the pooled observations

    labels : array-like(bool)
        labels of the pooled observations (``True`` - sample A)

    n, m : int
        sizes of the samples A and B

    kernel : DistanceKernel or str
        distance kernel (or its string description, see ``parse_kernel``)

    Returns
    -------

    EnergyValue

    Raises
    ------

    SingularDistance
        coincident observations and the kernel is singular at zero distance

    DomainError
        power-law kernel with ``kappa >= d``
    """
    labels = _check_labels(labels, n, m)
    return EnergyEvaluator(dm, parse_kernel(kernel)).evaluate(labels, n, m)


def energy_divergence_unbiased(dm, labels, n, m, kernel):
    r"""
    Unbiased estimate of the energy divergence of the two parent distributions.
    Same as ``energy_statistic``, but the within-sample terms are divided by ``n(n-1)``
    and ``m(m-1)``. The expected value is zero if the samples come from the same distribution.

    Returns
    -------

    float

    Raises
    ------

    InsufficientSample
        ``n < 2`` or ``m < 2``
    """
    if n < 2 or m < 2:
        raise InsufficientSample(f"Unbiased energy estimate requires n >= 2 and m >= 2: n={n}, m={m}")
    labels = _check_labels(labels, n, m)
    return EnergyEvaluator(dm, parse_kernel(kernel), unbiased=True).evaluate(labels, n, m).phi


def power_kernel_fourier(k, d, kappa):
    r"""
    Fourier transform of the power-law kernel ``r**(-kappa)`` in ``d`` dimensions:

        F(k) = 2**(d - kappa) * pi**(d/2) * Gamma((d - kappa)/2) / Gamma(kappa/2) * k**(kappa - d)

    The transform is positive for ``0 < kappa < d``, which makes the energy of
    the difference of two distributions positive.

    Raises
    ------

    DomainError
        ``kappa`` is outside ``(0, d)`` or ``k <= 0``
    """
    if d < 1 or int(d) != d:
        raise DomainError(f"Dimension must be a positive integer: d={d}")
    if not 0 < kappa < d:
        raise DomainError(f"Fourier transform of power-law kernel requires 0 < kappa < d: kappa={kappa}, d={d}")
    if not k > 0:
        raise DomainError(f"Wave number must be positive: k={k}")
    log_f = ((d - kappa) * np.log(2) + d / 2 * np.log(np.pi) + gammaln((d - kappa) / 2)
             - gammaln(kappa / 2) + (kappa - d) * np.log(k))
    return float(np.exp(log_f))
