"""Exception and warning types raised by legendre_fd."""


class LegendreFDError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LegendreFDError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(LegendreFDError, ValueError):
    """A mesh, potential or run configuration is invalid."""


class ContractViolation(LegendreFDError, ValueError):
    """Array arguments do not match the mesh they are used with."""


class FDStepError(LegendreFDError, RuntimeError):
    """A numerical failure inside one step of the FD recurrence."""

    def __init__(self, step, message):
        super().__init__(f"FD step {step}: {message}")
        self.step = step


class PrecisionWarning(UserWarning):
    """Evaluation close to a singular endpoint where digits are lost."""
