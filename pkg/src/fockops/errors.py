"""Exception hierarchy shared by all modules."""


class FockError(Exception):
    """Base class for every error raised by this package."""


class TailNotNegligible(FockError):
    """The analytic tail bound beyond ``radial_max`` is too large for ``rel_tol``."""


class ZeroWeight(FockError):
    """A growth quantity was requested for the zero weight."""


class UnsupportedExponents(FockError):
    """The exponent pair lies outside the range where a criterion is known."""


class ReducesToSingle(FockError):
    """A difference degenerates to a single operator (constant map or zero weight)."""


class IdenticalMaps(FockError):
    """Both composition maps coincide, so the pair is not a genuine difference."""


class NotBounded(FockError):
    """The operator is unbounded, so the requested quantity does not exist."""


class NonzeroOffsets(FockError):
    """The divergence sequence needs maps of the form z -> a z."""


class NoConvergence(FockError):
    """An iterative method hit its iteration cap."""


class ConfigError(FockError):
    """Invalid job file."""
