"""Exception types shared across the toolkit."""


class GeometryError(ValueError):
    """Invalid geometric input (point outside the model, coincident seeds, ...)."""


class CoincidentPointsError(GeometryError):
    """Two points that must be distinct are equal within tolerance."""


class ResourceLimitError(RuntimeError):
    """A computation exceeded its configured size budget."""


class SnapRadiusError(GeometryError):
    """No sampled domain point lies within the configured snapping radius."""


class ConfigError(ValueError):
    """Bad command line flags or config file contents."""
