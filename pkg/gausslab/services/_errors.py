class DimensionError(ValueError):
    """Operand lengths or variable counts do not agree."""


class NonFiniteError(ValueError):
    """A NaN or infinite value reached a polynomial or a point."""


class NullPolynomialError(ValueError):
    """The operation is undefined for the identically zero polynomial."""


class HypothesisViolation(ValueError):
    """The input does not satisfy the hypothesis of the check being run."""


class NotCriticalPointError(ValueError):
    """The supplied point is not a numerical zero of the partial derivative."""


class ParseError(ValueError):
    """
    Raised by the polynomial parser.

    Attributes:
        message (str): what went wrong.
        offset (int): byte offset into the input, 0 <= offset <= len(text).
        expected (tuple[str, ...]): token kinds that would have been accepted.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.offset = offset
        self.expected = tuple(expected)
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")
