"""Exception types shared across the package."""


class LindelofError(Exception):
    """Base class for all errors raised by this package."""


class NumericalError(LindelofError):
    """A numerical kernel could not deliver a result."""


class Divergent(NumericalError):
    """An improper integral grows without bound."""


class TolExceeded(NumericalError):
    """The adaptive budget ran out before the requested tolerance was met."""


class StepUnderflow(NumericalError):
    """The ODE step size collapsed without a blow-up signature."""


class NoSignChange(NumericalError):
    """A root bracket does not change sign."""


class RecoveryMismatch(NumericalError):
    """Two potential recoveries from different Jacobi fields disagree."""


class UnsupportedFamily(LindelofError):
    """The operation is not defined for this catenoid family."""


class OutOfDomain(LindelofError):
    """A parameter lies outside the profile's domain of definition."""


class IdenticalCurves(LindelofError):
    """Two catenaries with the same neck parameter were compared."""
