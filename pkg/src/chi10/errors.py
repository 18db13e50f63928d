"""Exception types shared across the package."""


class Chi10Error(Exception):
    """Base class for all errors raised by this package."""


class SeriesError(Chi10Error):
    """Illegal series operation (variable mismatch, bad precondition, ...)."""


class PrecisionError(Chi10Error):
    """Not enough known coefficients to carry out the requested operation."""


class RecognitionError(Chi10Error):
    """A series failed to lie in the expected finite-dimensional space.

    ``witness`` holds the first offending coefficient index, when known.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
