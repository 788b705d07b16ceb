"""Exception hierarchy shared by every layer of the cipher."""


class PuzzleError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(PuzzleError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class ConsistencyError(PuzzleError, RuntimeError):
    """Internal state broke an invariant that construction should guarantee."""


class FormatError(PuzzleError):
    """A container could not be parsed (bad magic, version, truncation)."""
