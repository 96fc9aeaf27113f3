"""Exception taxonomy for dunkllab.

Data problems (a root system failing validation) are reported as data by
``validate``; exceptions are reserved for conditions that make the requested
computation meaningless or impossible.
"""


class DunklLabError(Exception):
    """Base class for all dunkllab errors."""


class InvalidRootSystemError(DunklLabError):
    """Root-system data violates a structural requirement."""


class GroupExplosionError(DunklLabError):
    """Reflection-group closure exceeded the configured order bound."""


class CapabilityError(DunklLabError):
    """Operation is not supported for this root system or representation."""


class DomainTooSmallError(DunklLabError):
    """Integrand mass on the boundary shell of the grid exceeds tolerance."""


class AccuracyError(DunklLabError):
    """A computation could not reach the requested accuracy (refinement
    disagreement, series truncation too small, ...)."""


class SymbolError(DunklLabError):
    """Kernel symbol is not positive / direction set does not span."""


class FitConvergenceError(DunklLabError):
    """Nonlinear fit failed to converge."""


class ConfigError(DunklLabError):
    """Experiment configuration is malformed or violates the schema."""
