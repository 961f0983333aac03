"""Exception types raised by the library.

Every error derives from :class:`VortexError`; the command-line front end maps
the three families below onto exit codes.
"""


class VortexError(Exception):
    """Base class for all library errors."""


class ConfigError(VortexError, ValueError):
    """Invalid configuration or input parameter (exit code 2)."""


class NumericalError(VortexError, ArithmeticError):
    """A numerical procedure could not deliver a trustworthy result (exit code 3)."""


class ResourceError(VortexError):
    """A configured size cap would be exceeded (exit code 4)."""


class DomainError(ConfigError):
    """Argument outside the mathematical domain of an operation."""


class ClosureError(NumericalError):
    """A tangent field does not integrate to a closed curve."""

    def __init__(self, component, value, tol):
        self.component = component
        self.value = value
        super().__init__(
            f"closure violated in component {component}: |mean j_{component}| = {abs(value):.3e} > {tol:.1e}"
        )


class ConstraintError(NumericalError):
    """A structural constraint on mode content is violated."""


class ResolutionError(NumericalError):
    """Input is under-resolved or degenerate for spectral evaluation."""


class InstabilityError(NumericalError):
    """Time integration produced non-finite values."""

    def __init__(self, step):
        self.step = step
        super().__init__(f"non-finite state at step {step}")


class SignalError(NumericalError):
    """A probed mode carries no measurable signal."""


class TruncationError(NumericalError):
    """Fock-space truncation loses too much probability mass."""


class RangeError(DomainError):
    """Quantum number outside the admissible window of a domain."""


class ConsistencyError(NumericalError):
    """Two data sources that must agree do not."""


class SizeError(ResourceError):
    """Requested enumeration or sample size exceeds its cap."""
