"""Exception and warning types shared across the package."""


class LitpropError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRecord(LitpropError):
    """An annotation file line could not be parsed.

    Carries enough position information to locate the bad record.
    """

    def __init__(self, path, line_no, column, message):
        self.path = str(path)
        self.line_no = line_no
        self.column = column
        super().__init__(f"{path}:{line_no}:{column}: {message}")


class DanglingReference(LitpropError):
    """A record references an id (token, entity, head) that does not resolve."""


class EmptyBook(LitpropError):
    """The token file contains no tokens."""


class MissingGold(LitpropError):
    """An evaluation was requested for a book without gold annotations."""


class UnknownNode(LitpropError, KeyError):
    """A node id was requested that is not present in the network."""


class StageError(LitpropError):
    """A pipeline stage could not produce its output."""


class ConstantColumnWarning(UserWarning):
    """A feature column had no variation and was dropped before scaling."""


class UndefinedScoreWarning(UserWarning):
    """A cluster metric denominator was zero; the score was reported as 0."""
