r"""
Random generators for the populations used in power studies: the univariate
densities ``f1`` - ``f9``, multivariate normal (independent and correlated), Cauchy,
Student's t, ``N_log``, uniform in the unit cube, Cook-Johnson ``CJ(a)`` and two-component
mixtures of those.

Every generator draws from the ``numpy.random.Generator`` passed by the caller, so
the output is fully determined by the stream (see ``pyenergy.core.utils.make_stream``).
"""
from dataclasses import dataclass, field
import numpy as np

from ..core.errors import DomainError, InvalidCovariance, ScenarioError, DimensionMismatch
from ..core.samples import Sample

import logging
logger = logging.getLogger()


_sqrt3 = np.sqrt(3.0)

# Univariate densities: name -> description
UNIVARIATE_FAMILIES = {
    "f1": "uniform(-sqrt(3), sqrt(3))",
    "f2": "N(0,1)",
    "f3": "Laplace exp(-|x|)/2",
    "f4": "Cauchy",
    "f5": "exp(-(x+1)), x >= -1",
    "f6": "(chi2(3) - 3)/sqrt(6)",
    "f7": "N(1.5,1)/2 + N(-1.5,1)/2",
    "f8": "0.8N(0,1) + 0.2N(0,4^2)",
    "f9": "N(1,2^2)/2 + N(-1,1)/2",
}


def _draw_f(name, n, stream):
    if name == "f1":
        return stream.uniform(-_sqrt3, _sqrt3, size=n)
    elif name == "f2":
        return stream.standard_normal(n)
    elif name == "f3":
        return stream.laplace(0.0, 1.0, size=n)
    elif name == "f4":
        return stream.standard_cauchy(n)
    elif name == "f5":
        return stream.standard_exponential(n) - 1.0
    elif name == "f6":
        return (stream.chisquare(3, size=n) - 3.0) / np.sqrt(6.0)

    # Mixtures: one uniform number selects the component of each observation
    u = stream.random(n)
    z = stream.standard_normal(n)
    if name == "f7":
        return np.where(u < 0.5, 1.5 + z, -1.5 + z)
    elif name == "f8":
        return np.where(u < 0.8, z, 4.0 * z)
    elif name == "f9":
        return np.where(u < 0.5, 1.0 + 2.0 * z, -1.0 + z)
    raise DomainError(f"Unknown univariate family '{name}'. Supported families: {list(UNIVARIATE_FAMILIES)}")


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"Dimension must be a positive integer: d={d}")
    return int(d)


@dataclass(frozen=True)
class UnivariateFamily:
    r"""
    One of the univariate densities ``f1`` .. ``f9`` (see ``UNIVARIATE_FAMILIES``).
    """
    name: str

    def __post_init__(self):
        if self.name not in UNIVARIATE_FAMILIES:
            raise DomainError(f"Unknown univariate family '{self.name}'. "
                              f"Supported families: {list(UNIVARIATE_FAMILIES)}")

    @property
    def d(self):
        return 1

    @property
    def label(self):
        return self.name

    def draw(self, n, stream):
        return _draw_f(self.name, n, stream).reshape(-1, 1)


@dataclass(frozen=True)
class StdNormal:
    r"""
    Normal distribution ``N(mean, scale**2 I)`` in ``d`` dimensions. ``mean`` is a number
    (the same for all coordinates) or a sequence of ``d`` numbers.
    """
    d: int = 1
    mean: object = 0.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))
        if not self.scale > 0:
            raise DomainError(f"Scale of the normal distribution must be positive: {self.scale}")
        mean = np.broadcast_to(np.asarray(self.mean, dtype=float), (self.d,))
        object.__setattr__(self, "mean", tuple(mean.tolist()))

    @property
    def label(self):
        mu = f"{self.mean[0]:g}" if len(set(self.mean)) == 1 else str(list(self.mean))
        var = "I" if self.scale == 1 else f"{self.scale:g}^2 I"
        return f"N({mu},{var})"

    def draw(self, n, stream):
        return np.asarray(self.mean) + self.scale * stream.standard_normal((n, self.d))


@dataclass(frozen=True, eq=False)
class CorrNormal:
    r"""
    Normal distribution with zero mean and covariance matrix ``cov``. Variates are generated
    by multiplying independent standard normal vectors by the lower-triangular Cholesky
    factor of ``cov``.

    Raises
    ------

    InvalidCovariance
        the matrix is not symmetric positive definite
    """
    cov: np.ndarray
    _factor: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] < 1:
            raise InvalidCovariance(f"Covariance matrix must be a square matrix: shape {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
            raise InvalidCovariance(f"Covariance matrix is not symmetric: {cov.tolist()}")
        try:
            factor = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise InvalidCovariance(f"Covariance matrix is not positive definite: {cov.tolist()}")
        cov.setflags(write=False)
        factor.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "_factor", factor)

    @property
    def d(self):
        return self.cov.shape[0]

    @property
    def label(self):
        return f"N(0,V), V={self.cov.tolist()}"

    def draw(self, n, stream):
        return stream.standard_normal((n, self.d)) @ self._factor.T


def _elliptical_t(nu, n, d, stream):
    z = stream.standard_normal((n, d))
    w = stream.chisquare(nu, size=n) / nu
    return z / np.sqrt(w)[:, np.newaxis]


@dataclass(frozen=True)
class StudentT:
    r"""
    Student's t distribution with ``nu`` degrees of freedom in ``d`` dimensions. By default
    the coordinates are independent t variates. If ``elliptical`` is ``True``, the spherically
    symmetric multivariate t distribution (normal vector divided by a common
    ``sqrt(chi2(nu)/nu)``) is generated.
    """
    nu: float
    d: int = 1
    elliptical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))
        if not self.nu > 0:
            raise DomainError(f"The number of degrees of freedom must be positive: nu={self.nu}")

    @property
    def label(self):
        return f"t{self.nu:g}" + (" (elliptical)" if self.elliptical else "")

    def draw(self, n, stream):
        if self.elliptical:
            return _elliptical_t(self.nu, n, self.d, stream)
        return stream.standard_t(self.nu, size=(n, self.d))


@dataclass(frozen=True)
class Cauchy:
    r"""
    Cauchy distribution ``C(0, I)`` in ``d`` dimensions: independent coordinates by default,
    spherically symmetric (multivariate t with one degree of freedom) if ``elliptical`` is ``True``.
    """
    d: int = 1
    elliptical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))

    @property
    def label(self):
        return "C(0,I)" + (" (elliptical)" if self.elliptical else "")

    def draw(self, n, stream):
        if self.elliptical:
            return _elliptical_t(1, n, self.d, stream)
        return stream.standard_cauchy((n, self.d))


@dataclass(frozen=True)
class NLog:
    r"""
    ``N_log(0, I)``: each coordinate of a standard normal vector is transformed as ``x -> ln|x|``.
    """
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))

    @property
    def label(self):
        return "Nlog(0,I)"

    def draw(self, n, stream):
        z = stream.standard_normal((n, self.d))
        with np.errstate(divide="ignore"):
            return np.log(np.abs(z))


@dataclass(frozen=True)
class UniformCube:
    r"""
    Uniform distribution in the unit cube ``[0, 1]**d``.
    """
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))

    @property
    def label(self):
        return "U(0,1)"

    def draw(self, n, stream):
        return stream.random((n, self.d))


@dataclass(frozen=True)
class CookJohnson:
    r"""
    Cook-Johnson distribution ``CJ(a)`` in ``d`` dimensions (see ``cook_johnson``).
    """
    a: float
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "d", _check_dim(self.d))
        if not self.a > 0:
            raise DomainError(f"Parameter of Cook-Johnson distribution must be positive: a={self.a}")

    @property
    def label(self):
        return f"CJ({self.a:g})"

    def draw(self, n, stream):
        g = stream.standard_gamma(self.a, size=n)
        e = stream.standard_exponential((n, self.d))
        with np.errstate(divide="ignore", over="ignore"):
            return np.power(1.0 + e / g[:, np.newaxis], -self.a)


@dataclass(frozen=True)
class Mixture:
    r"""
    Two-component mixture: each observation is drawn from ``component_b`` with
    probability ``weight`` and from ``component_a`` otherwise. One uniform number
    per observation selects the component.
    """
    weight: float
    component_a: object
    component_b: object

    def __post_init__(self):
        if not 0 <= self.weight <= 1:
            raise DomainError(f"Mixture weight must be in the range [0, 1]: {self.weight}")
        if self.component_a.d != self.component_b.d:
            raise DimensionMismatch(f"Mixture components have different dimensions: "
                                    f"{self.component_a.d} and {self.component_b.d}")

    @property
    def d(self):
        return self.component_a.d

    @property
    def label(self):
        w_b = round(self.weight * 100)
        return f"{100 - w_b}%{self.component_a.label}+{w_b}%{self.component_b.label}"

    def draw(self, n, stream):
        from_b = stream.random(n) < self.weight
        n_b = int(np.count_nonzero(from_b))
        data = np.empty((n, self.d))
        data[~from_b] = self.component_a.draw(n - n_b, stream)
        data[from_b] = self.component_b.draw(n_b, stream)
        return data


def sample_univariate(family, n, stream):
    r"""
    Draws ``n`` observations from the univariate density ``f1`` .. ``f9``.

    Parameters
    ----------

    family : UnivariateFamily or str
        the family or its name (e.g. ``"f7"``)

    n : int
        the number of observations, ``n >= 1``

    stream : numpy.random.Generator
        random number generator

    Returns
    -------

    Sample
        sample of dimension 1
    """
    if isinstance(family, str):
        family = UnivariateFamily(family)
    if not isinstance(family, UnivariateFamily):
        raise DomainError(f"Family {family!r} is not univariate")
    if n < 1:
        raise ValueError(f"Sample size must be positive: n={n}")
    return Sample(family.draw(n, stream))


def sample_multivariate(family, n, stream):
    r"""
    Draws ``n`` independent vectors from the family (any of the classes of this module).

    Returns
    -------

    Sample
        sample of dimension ``family.d``
    """
    if n < 1:
        raise ValueError(f"Sample size must be positive: n={n}")
    return Sample(family.draw(n, stream))


def cook_johnson(a, d, n, stream):
    r"""
    Draws ``n`` vectors from the Cook-Johnson distribution ``CJ(a)`` in ``d`` dimensions.
    For each observation ``G ~ Gamma(a, 1)`` and ``E_1 .. E_d ~ Exp(1)`` are drawn and
    ``U_k = (1 + E_k / G)**(-a)``. The marginal distributions are uniform in ``[0, 1]``.
    The distribution tends to the independent uniform distribution as ``a -> infinity``
    and to the totally correlated case (all coordinates equal) as ``a -> 0``.

    Raises
    ------

    DomainError
        ``a <= 0``
    """
    return sample_multivariate(CookJohnson(a=a, d=d), n, stream)


def location_scale(s, theta, tau):
    r"""
    Applies the transformation ``x -> theta + tau * x`` to all coordinates of the sample.

    Raises
    ------

    DomainError
        ``tau <= 0``
    """
    if not tau > 0:
        raise DomainError(f"Scale parameter must be positive: tau={tau}")
    if theta == 0 and tau == 1:
        return s
    return Sample(theta + tau * s.data)


def family_from_dict(config, *, path=""):
    r"""
    Creates a distribution family from its JSON description, for example
    ``{"family": "f7"}``, ``{"family": "normal", "d": 2, "mean": 0.5, "scale": 0.05}``,
    ``{"family": "corr_normal", "cov": [[1, 0.6], [0.6, 1]]}``, ``{"family": "student_t",
    "nu": 2, "d": 4}``, ``{"family": "cook_johnson", "a": 0.6, "d": 2}`` or
    ``{"family": "mixture", "weight": 0.2, "components": [{...}, {...}]}``.

    Parameters
    ----------

    config : dict
        description of the family

    path : str
        path of the description in the scenario file, used in error messages

    Returns
    -------

    family object

    Raises
    ------

    ScenarioError
        the description is invalid. ``field_path`` attribute holds the path of the offending field.
    """
    if not isinstance(config, dict) or "family" not in config:
        raise ScenarioError(f"Distribution description must be a dictionary with the key 'family': {config!r}",
                            field_path=path)
    name = config["family"]
    params = {k: v for k, v in config.items() if k != "family"}

    try:
        if name in UNIVARIATE_FAMILIES:
            return UnivariateFamily(name)
        elif name == "normal":
            return StdNormal(**params)
        elif name == "corr_normal":
            return CorrNormal(cov=params["cov"])
        elif name == "cauchy":
            return Cauchy(**params)
        elif name == "student_t":
            return StudentT(**params)
        elif name == "nlog":
            return NLog(**params)
        elif name == "uniform":
            return UniformCube(**params)
        elif name == "cook_johnson":
            return CookJohnson(**params)
        elif name == "mixture":
            components = params.get("components")
            if not isinstance(components, list) or len(components) != 2:
                raise ScenarioError("Mixture must have exactly two components", field_path=f"{path}/components")
            return Mixture(weight=params.get("weight"),
                           component_a=family_from_dict(components[0], path=f"{path}/components/0"),
                           component_b=family_from_dict(components[1], path=f"{path}/components/1"))
    except ScenarioError:
        raise
    except KeyError as ex:
        raise ScenarioError(f"Missing parameter {ex} of the distribution '{name}'", field_path=path)
    except (TypeError, ValueError) as ex:
        raise ScenarioError(f"Invalid parameters of the distribution '{name}': {ex}", field_path=path)

    raise ScenarioError(f"Unknown distribution family '{name}'", field_path=f"{path}/family")
