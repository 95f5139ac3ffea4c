from typing import Any, Optional


class SketchRidgeError(Exception):
    """Base exception for all sketchridge-specific errors."""
    pass


class ValidationError(SketchRidgeError):
    """Raised when input validation fails."""
    pass


class DimensionError(ValidationError):
    """Raised when matrix or vector shapes do not conform."""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ParameterError(ValidationError):
    """Raised when a numeric parameter is outside its admissible range."""

    def __init__(self, message: str, name: Optional[str] = None):
        super().__init__(message)
        self.name = name


class EmptyBasisError(SketchRidgeError):
    """Raised when orthonormalization leaves no basis vector."""
    pass


class DegenerateSpectrumError(SketchRidgeError):
    """Raised when a spectrum cannot produce a finite ratio."""
    pass


class DegenerateDataError(SketchRidgeError):
    """Raised when a dataset has no usable (nonzero) content."""
    pass


class ScaleGuardError(SketchRidgeError):
    """Raised when an operation would densify more than the configured guard."""

    def __init__(self, message: str, limit: Optional[float] = None, requested: Optional[float] = None):
        super().__init__(message)
        self.limit = limit
        self.requested = requested


class DivergenceError(SketchRidgeError):
    """Raised when an optimizer run blows up; carries the trace recorded so far."""

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class CorpusParseError(SketchRidgeError):
    """Raised when a sparse corpus file is malformed."""

    def __init__(self, message: str, line_number: Optional[int] = None, path: Optional[str] = None):
        super().__init__(message)
        self.line_number = line_number
        self.path = path
