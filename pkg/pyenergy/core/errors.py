# Exceptions raised by pyenergy. All of them derive from builtin exceptions, so the
#   calling code may catch ``ValueError`` or ``RuntimeError`` if the exact type is not important.


class DataDegeneracyError(ValueError):
    """Data can not be processed because of degeneracy (coincident points, zero variance etc.)"""


class DimensionMismatch(ValueError):
    pass


class InvalidSample(ValueError):
    pass


class DegenerateCoordinate(DataDegeneracyError):
    pass


class SingularDistance(DataDegeneracyError):
    r"""
    Zero distance between two observations is passed to the kernel that is singular at zero.
    The indices of the offending rows are kept in ``pair`` (``None`` if not known).
    """

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class DegenerateBins(DataDegeneracyError):
    pass


class InsufficientSample(ValueError):
    pass


class DomainError(ValueError):
    pass


class InsufficientPermutations(ValueError):
    pass


class InvalidCovariance(ValueError):
    pass


class UnsupportedDimension(ValueError):
    pass


class MissingCell(RuntimeError):
    pass


class CsvFormatError(ValueError):
    pass


class ScenarioError(ValueError):
    r"""
    Invalid scenario file or power study parameters. ``field_path`` contains
    the path to the offending field, e.g. ``scenarios/3/pY/a``.
    """

    def __init__(self, msg, field_path=""):
        super().__init__(msg)
        self.field_path = field_path
