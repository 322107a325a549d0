"""Error taxonomy shared across the package and surfaced as CLI exit codes."""


class ConfigError(Exception):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalError(Exception):
    """A computation could not produce a trustworthy number (exit code 3)."""


class OptimizationFailure(NumericalError):
    """Non-finite objective or coefficients during gradient ascent."""


class DegenerateSetError(NumericalError):
    """Set looks empty or full at the sampling budget; no boundary to find."""


class ResolutionError(NumericalError):
    """Point cloud too sparse for the requested covering scale."""


class UnsupportedOracleError(NumericalError):
    """Operation needs charts/normals the set does not carry."""
