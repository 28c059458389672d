"""Exception hierarchy shared by all ransomkit modules."""

from __future__ import annotations


class RansomkitError(Exception):
    """Base class for every error raised by this package."""


# --- PE parsing -------------------------------------------------------------

class PeParseError(RansomkitError):
    """A PE image could not be parsed. Carries the failing file offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset:#x})")
        self.offset = offset


class MalformedDosError(PeParseError):
    """No MZ magic at offset 0."""


class BadPeOffsetError(PeParseError):
    """e_lfanew points outside the file."""


class MissingPeSignatureError(PeParseError):
    """No "PE\\0\\0" signature at e_lfanew."""


class TruncatedHeaderError(PeParseError):
    """File ends in the middle of a header structure."""


# --- behavior reports -------------------------------------------------------

class MalformedJsonError(RansomkitError):
    """Report file is not valid JSON."""


class MissingBehaviorSectionError(RansomkitError):
    """Report parses as JSON but has no behavior summary."""


class EmptyCorpusError(RansomkitError):
    """An operation that needs at least one report received none."""


# --- numerics / learning ----------------------------------------------------

class DegenerateInputError(RansomkitError):
    """Too few samples for the requested computation."""


class NonFiniteError(RansomkitError):
    """Input contains NaN or infinity."""


class DimensionMismatchError(RansomkitError):
    """Input dimension does not match the fitted model."""


class LengthMismatchError(RansomkitError):
    """Paired sequences have different lengths."""


class SingleClassError(RansomkitError):
    """Both class labels are required but only one is present."""


class InvalidNError(RansomkitError):
    """n-gram order must be >= 1."""


class EvaluatorFailureError(RansomkitError):
    """The wrapper-selection evaluator raised an exception."""


class FoldTooSmallError(RansomkitError):
    """A cross-validation fold would lose one of the classes."""
