"""Exception types shared across the toolkit."""


class TransvarError(Exception):
    """Base class for all toolkit errors."""


class MalformedLineError(TransvarError):
    """A corpus line violates the vertical format.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MissingHeaderError(TransvarError):
    """Token or boundary material appeared before any document header."""


class UnknownLabelError(TransvarError):
    """A genre or method label is not in the closed label set."""


class OrderOutOfRangeError(TransvarError, ValueError):
    """An n-gram order outside the supported range."""


class EmptyClassError(TransvarError):
    """A training class contributed no n-gram occurrences."""


class MinClassesError(TransvarError):
    """Fewer than two classes were supplied where a contrast is required."""


class EmptyInstanceError(TransvarError):
    """An instance produced no n-grams at the requested order."""


class InsufficientDataError(TransvarError):
    """A class pool is too small for the requested split."""


class ModeMismatchError(TransvarError):
    """Featurization settings disagree with the model being applied."""


class VersionMismatchError(TransvarError):
    """A model file declares an unsupported format version."""


class CorruptModelError(TransvarError):
    """A model file is truncated, inconsistent, or fails its checksum."""


class NotBinaryError(TransvarError):
    """Feature contrast requested on a model with more than two classes."""


class FocalMismatchError(TransvarError):
    """Membership analysis over lists that do not share the focal class."""


class InvalidSpecError(TransvarError):
    """A synthetic-corpus specification is structurally invalid."""


class NonErgodicChainError(TransvarError):
    """A transition matrix has no unique stationary distribution."""
