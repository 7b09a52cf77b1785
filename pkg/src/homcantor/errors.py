"""Exception hierarchy shared by all modules."""


class HomCantorError(Exception):
    """Base class; the CLI maps every subclass to exit code 1."""


class OutOfRange(HomCantorError, ValueError):
    pass


class BadAlphabet(HomCantorError, ValueError):
    pass


class WordOverflow(HomCantorError, ValueError):
    """``word_plus`` on a word whose last digit is already N-1."""


class WordUnderflow(HomCantorError, ValueError):
    """``word_minus`` on a word whose last digit is already 0."""


class OutOfDomain(HomCantorError, ValueError):
    """A point that lies in no level-1 basic interval."""


class BudgetExceeded(HomCantorError, RuntimeError):
    pass


class ToleranceAmbiguous(HomCantorError, ArithmeticError):
    """A query falls inside the numerical uncertainty band of a critical value."""

    def __init__(self, message, value=None, threshold=None, band=None):
        super().__init__(message)
        self.value = value
        self.threshold = threshold
        self.band = band
