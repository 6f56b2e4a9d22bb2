"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Raised when numerical-geometry preconditions fail (degenerate frames,
    points off a plane, non-tangent data, unstable kernels)."""


class IntegrabilityError(GeometryError):
    """Raised when a compatibility gate fails and integration is refused.

    details maps residual names to values, so callers can report which
    condition failed and by how much.
    """

    def __init__(self, message: str, details: dict = None):
        super().__init__(message)
        self.details = details or {}


class ConfigError(ValueError):
    """Raised for malformed run configurations or unknown scenario keys."""
