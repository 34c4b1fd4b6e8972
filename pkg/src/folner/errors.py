"""Exception hierarchy.

Every failure branch of the decompressors (a program the decoder rejects)
maps to one of the :class:`CodecError` subclasses; resource guards raise
:class:`ResourceError` subclasses.
"""


class FolnerError(Exception):
    """Base class for all package errors."""


class IndexNotInRange(FolnerError, ValueError):
    """A natural number is not the index of any group element."""


class ResourceError(FolnerError):
    """A configured computation budget was exhausted."""


class ResourceLimit(ResourceError):
    """A set computation would exceed the element cap."""


class SearchBudgetExceeded(ResourceError):
    """A semi-decision loop did not terminate within its step budget."""


class CodecError(FolnerError, ValueError):
    """A bit string is not a valid program for a decoder."""


class Truncated(CodecError):
    """The bit stream ended before the program was complete."""


class MalformedPair(CodecError):
    """A doubled-bit pair was neither ``00``/``11`` nor the delimiter."""


class MalformedProgram(CodecError):
    """A structural field of a program is invalid."""


class LengthMismatch(CodecError):
    """A length field disagrees with the size of the set it describes."""


class SumMismatch(CodecError):
    """Pattern frequencies do not add up to the number of tile centers."""


class RankOutOfRange(CodecError):
    """A rank is not smaller than the number of arrangements."""


class RangeError(CodecError):
    """A permuted position points past the end of the inner word."""


class SupportViolation(FolnerError, KeyError):
    """A word was read outside its support."""

    def __str__(self):
        return Exception.__str__(self)


class UnsupportedModel(FolnerError, ValueError):
    """The sampler model does not support the requested quantity."""
