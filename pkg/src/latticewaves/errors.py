"""Exception hierarchy shared by all latticewaves modules."""


class LatticeWaveError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LatticeWaveError, ValueError):
    """An argument left the mathematical domain of an operation
    (e.g. a strain outside the potential's expansion radius)."""


class DegeneracyError(LatticeWaveError, ValueError):
    """A lattice is degenerate for the long-wave theory
    (vanishing quadratic coefficient, divergent coefficient sums, ...)."""


class CertificationError(LatticeWaveError, RuntimeError):
    """A numerical certificate could not be established
    (dispersion conditions failing, multiplier bounds violated, ...)."""


class SolverError(LatticeWaveError, RuntimeError):
    """An iterative solver failed to converge; carries diagnostics in args."""


class ConfigError(LatticeWaveError, ValueError):
    """Invalid run configuration or unreachable tolerance request."""
