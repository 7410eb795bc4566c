"""Exception hierarchy shared by all lechain modules."""


class LeChainError(Exception):
    """Base class for all lechain errors."""


class DimensionCap(LeChainError):
    """A requested dense object exceeds the configured size cap."""


class InvalidSpec(LeChainError):
    """A model specification is malformed or inconsistent."""


class ConvergenceFailure(LeChainError):
    """An iterative eigensolver failed to converge to the requested accuracy."""


class DimMismatch(LeChainError):
    """Operator or state dimensions are incompatible."""


class OutOfRange(LeChainError):
    """A scalar argument lies outside its admissible interval."""


class NumericalFailure(LeChainError):
    """An input violates a numerical precondition (e.g. not positive semidefinite)."""


class MeasureMismatch(LeChainError):
    """The requested entanglement measure cannot be applied to the given states."""


class UnknownFamily(LeChainError):
    """An unrecognised named family was requested."""


class WrongBondDim(LeChainError):
    """An operation requires a specific matrix-product bond dimension."""


class NonDiagonalizable(LeChainError):
    """A transfer operator is too ill-conditioned for spectral analysis."""


class ParseError(LeChainError):
    """A file could not be parsed at all."""


class SchemaError(LeChainError):
    """A parsed file violates the expected schema; message names the field."""


class InsufficientData(LeChainError):
    """Too few usable points for a fit."""


class ZeroProbabilityStart(LeChainError):
    """No valid starting configuration with nonzero probability was found."""


class ConfigError(LeChainError):
    """An experiment configuration failed validation; message carries the field path."""
