"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ConfigError -> 2, AssumptionError -> 3,
NumericsError -> 4, CheckFailure -> 5.
"""


class HalflineError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HalflineError):
    """Malformed or inconsistent configuration input."""


class AssumptionError(HalflineError):
    """The potential violates the decay assumption rho > 5/2."""


class NumericsError(HalflineError):
    """A numerical guard tripped (coarse grid, ambiguous threshold, ...)."""


class CheckFailure(HalflineError):
    """An identity check that should hold came out false."""
