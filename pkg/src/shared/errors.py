"""
Calibration Errors
Exception hierarchy shared by the core pipeline and the command-line frontend.
"""

from typing import Optional


class CalibrationError(Exception):
    """Base class for every error raised by the calibration toolkit."""


class InvalidArgumentError(CalibrationError, ValueError):
    """An input violates a documented precondition (non-finite, wrong shape, out of range)."""


class ConfigError(CalibrationError, ValueError):
    """A configuration object or file is inconsistent."""


class PointAtCameraPlaneError(CalibrationError):
    """Projection is undefined because the point lies on the camera plane (depth ~ 0)."""


class DegenerateMatrixError(CalibrationError):
    """A matrix is rank deficient where full rank is required."""


class DegenerateConfigurationError(CalibrationError):
    """The correspondence geometry does not determine a unique pose."""


class InsufficientDataError(CalibrationError):
    """Fewer data points than an operation needs."""

    def __init__(self, message: str, count: int = 0, required: int = 0):
        super().__init__(message)
        self.count = count
        self.required = required


class NoConsensusError(CalibrationError):
    """RANSAC found no hypothesis supported by enough inliers."""


class InvalidLinearizationError(CalibrationError):
    """The Jacobian was requested at a pose that puts a point behind the camera."""


class InvalidInitializationError(CalibrationError):
    """The initial pose handed to the refiner puts a point behind the camera."""


class EmptySetError(CalibrationError, ValueError):
    """A metric was requested over an empty correspondence set."""


class EmptySceneError(CalibrationError):
    """A synthetic scene produced no visible detections."""


class CorruptArtifactError(CalibrationError):
    """A calibration artifact on disk is malformed or violates pose invariants."""


class DetectionFormatError(CalibrationError):
    """Base class for detection CSV ingestion failures."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None):
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column '{column}'"
            location += ": "
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class SchemaError(DetectionFormatError):
    """The CSV header is missing or does not match the declared schema."""


class ParseError(DetectionFormatError):
    """A field could not be parsed as the expected type."""


class ValidationError(DetectionFormatError):
    """A parsed row violates a detection invariant."""
