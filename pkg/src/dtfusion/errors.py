"""Exception hierarchy shared by every dtfusion module.

The CLI maps each branch of this hierarchy to a distinct exit code, so new
error types should subclass the closest existing category rather than
``DTFusionError`` directly.
"""


class DTFusionError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DTFusionError):
    """An input value violates a documented invariant (range, sum, alignment)."""


class ShapeError(ValidationError):
    """A matrix, vector or collection has the wrong dimensions or count."""


class EmptyClassError(ValidationError):
    """Template fitting saw no training sample for one or more classes."""

    def __init__(self, class_names: list[str]):
        self.class_names = list(class_names)
        super().__init__(
            "no training samples for class(es): " + ", ".join(self.class_names)
        )


class DegenerateInputError(DTFusionError):
    """A measure denominator is exactly zero (only possible off the documented domain)."""


class FormatError(DTFusionError):
    """A file does not conform to the documented on-disk grammar."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)
