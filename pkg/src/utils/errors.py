from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes of the command-line surface."""
    SUCCESS = 0
    FAILURE = 1  # statistical or verification failure
    USAGE = 2
    IO = 3


class LatticeStatsError(Exception):
    """Base class for every error raised by the package."""
    exit_code = ExitCode.USAGE


class DomainError(LatticeStatsError, ValueError):
    """Input outside the mathematical domain of an operation (non-finite, y outside [0,1], t < 1/2)."""


class ArgumentError(LatticeStatsError, ValueError):
    """Malformed call: dimension mismatch, empty samples, law/scenario mismatch."""


class ConfigError(LatticeStatsError, ValueError):
    """Invalid configuration such as a bad rho table or an unknown backend."""


class ResourceError(LatticeStatsError, RuntimeError):
    """A configured enumeration or memory budget would be exceeded."""


class NumericError(LatticeStatsError, ArithmeticError):
    """Quadrature did not reach tolerance or a sampled invariant failed."""
    exit_code = ExitCode.FAILURE


class OutputError(LatticeStatsError, OSError):
    """Result files could not be written."""
    exit_code = ExitCode.IO
