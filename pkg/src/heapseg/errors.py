"""Exception types shared across the toolkit."""


class HeapsegError(Exception):
    """Base class for all toolkit errors."""


class MeshParseError(HeapsegError):
    """Malformed mesh file. Carries a line number for text formats."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MeshError(HeapsegError):
    """Geometric precondition violated (degenerate hull, flat mesh, ...)."""


class PlacementError(HeapsegError):
    """No feasible placement found while settling an object."""


class AnnotationFormatError(HeapsegError):
    """Annotation or prediction JSON violates the expected schema.

    ``path`` locates the offending element, e.g. ``$.annotations[3].bbox``.
    """

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class EvaluationError(HeapsegError):
    """Evaluation requested on inputs it is undefined for (e.g. no ground truth)."""


class DepthRangeError(HeapsegError):
    """Depth value cannot be represented by the on-disk encoding."""


class DepthFormatError(HeapsegError):
    """Byte stream is not a readable 16-bit depth PNG."""


class ConfigError(HeapsegError):
    """Invalid configuration document."""
