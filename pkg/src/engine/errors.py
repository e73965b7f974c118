"""Exception hierarchy for the solvers.

Everything derives from ValueError so callers that only know the builtin
still catch it.
"""


class SolverError(ValueError):
    """Base class for every error raised by the engine."""


class ConfigError(SolverError):
    """Invalid or incomplete configuration (keys, values, policies)."""


class StencilReachError(SolverError):
    """A stencil reaches further than the available ghost layers."""


class LayoutError(SolverError):
    """Field layouts do not match the staggering a scheme requires."""


class CompressionCollapseError(SolverError):
    """A compressive denominator dropped to or below its floor."""


class PositivityError(SolverError):
    """Density or internal energy became non-positive."""


class VacuumError(SolverError):
    """The exact Riemann solution would contain vacuum."""


class NoInvolutionError(SolverError):
    """The scheme does not preserve any discrete involution."""
