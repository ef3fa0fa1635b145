"""Exceptions raised by the fdsic package."""


class FdsicError(Exception):
    """Base class for every error raised by fdsic."""


class InputShapeError(FdsicError, ValueError):
    """Input has a length or layout the operation cannot accept."""


class DegenerateInputError(FdsicError, ValueError):
    """Input is all zeros where a nonzero signal is required."""


class CalibrationError(FdsicError):
    """A calibration target cannot be reached.

    Attributes:
        target: the requested value
        attainable: (low, high) range reachable over the search bracket,
            or None when the failure is not a range problem
    """

    def __init__(self, message, target=None, attainable=None):
        """Store the target and attainable range with the message."""
        super().__init__(message)
        self.target = target
        self.attainable = attainable


class ChannelGenerationError(FdsicError):
    """Rejection sampling ran out of attempts."""


class DatasetFormatError(FdsicError):
    """A binary file is malformed.

    Attributes:
        offset: byte offset at which parsing failed
    """

    def __init__(self, message, offset):
        """Prefix the message with the failing byte offset."""
        super().__init__(f"at byte {offset}: {message}")
        self.offset = offset


class ShapeError(FdsicError, ValueError):
    """Operands of a tensor operation have incompatible shapes."""


class GraphError(FdsicError):
    """Backward pass requested on something that is not a recorded graph."""


class DivergenceError(FdsicError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch, loss):
        """Record the epoch and offending loss value."""
        super().__init__(f"loss became {loss} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


class NumericError(FdsicError):
    """A linear system could not be solved."""


class ConfigError(FdsicError):
    """An experiment configuration is invalid."""


class UnsupportedSystemError(FdsicError, ValueError):
    """A model was given data of a system option it cannot represent."""
