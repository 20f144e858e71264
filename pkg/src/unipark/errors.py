"""Exception types shared across the package."""


class UniparkError(ValueError):
    """Base class for all library errors."""


class DomainError(UniparkError):
    """Input outside the mathematical domain of a kernel (e.g. non-finite)."""


class BarrierDomainError(DomainError):
    """State on or outside a barrier boundary (|delta| or |gamma| at pi)."""


class TransformError(UniparkError):
    """Coordinate transform undefined at the requested point."""


class SingularityError(UniparkError):
    """Open-loop polar dynamics evaluated at rho = 0."""


class InfeasiblePolesError(UniparkError):
    """Requested pole set violates a gain/eigenvalue relation."""


class ConfigError(UniparkError):
    """Invalid scenario or CLI configuration."""
