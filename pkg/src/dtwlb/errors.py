"""Exception hierarchy.

Every error raised on bad input derives from :class:`DTWLBError` so callers
(the CLI in particular) can map data problems to a single exit code.
"""


class DTWLBError(Exception):
    pass


class LengthMismatch(DTWLBError, ValueError):
    pass


class EmptySeries(DTWLBError, ValueError):
    pass


class NonFiniteValue(DTWLBError, ValueError):
    pass


class InvalidWindow(DTWLBError, ValueError):
    pass


class TooShort(DTWLBError, ValueError):
    pass


class TooLong(DTWLBError, ValueError):
    """Raised by the exponential oracles when the input is too long to enumerate."""


class EnvelopeWindowMismatch(DTWLBError, ValueError):
    pass


class InvalidV(DTWLBError, ValueError):
    pass


class InvalidBound(DTWLBError, ValueError):
    pass


class IndexOutOfRange(DTWLBError, IndexError):
    pass


class EmptyTrainingSet(DTWLBError, ValueError):
    pass


class MissingLabel(DTWLBError, ValueError):
    pass


class ParseError(DTWLBError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RaggedLengths(DTWLBError, ValueError):
    pass


class EmptyFile(DTWLBError, ValueError):
    pass


class InvalidSpec(DTWLBError, ValueError):
    pass


class AllPairsDegenerate(DTWLBError, ValueError):
    """Every pair had DTW == 0, so no tightness ratio is defined."""
