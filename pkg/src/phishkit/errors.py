"""Exception types shared across the toolkit."""


class PhishkitError(Exception):
    """Base class for all toolkit errors."""


# --- email parsing ---

class MalformedEmail(PhishkitError):
    """Raw bytes do not form a parseable message (no header block or no sender)."""


class MalformedMbox(PhishkitError):
    """Non-empty input with no mbox 'From ' separator line."""


# --- resolvers ---

class ResolutionFailed(PhishkitError):
    """A network-dependent lookup failed (timeout, refusal, simulated failure)."""


class TooManyHops(PhishkitError):
    """A redirect chain exceeded the allowed hop budget."""


# --- classifiers ---

class DimensionMismatch(PhishkitError):
    """Input vector dimension does not match the model or its peer."""


class SingleClassData(PhishkitError):
    """Training data contains only one class."""


class NonFiniteLoss(PhishkitError):
    """Training loss became NaN/inf; the learning rate is too large."""


class UnsupportedVersion(PhishkitError):
    """Model file carries a format version this build does not understand."""


class CorruptModelFile(PhishkitError):
    """Model file is truncated, not JSON, or missing required fields."""


class ConvergenceWarning(UserWarning):
    """SVM optimizer hit its iteration budget; best-so-far model returned."""


# --- evaluation ---

class EmptyDataset(PhishkitError):
    """An operation that needs at least one row received none."""


class InsufficientData(PhishkitError):
    """Too few rows per class to perform the requested split."""


class LengthMismatch(PhishkitError):
    """Paired sequences (predictions vs labels) differ in length."""


class DegenerateTestSet(PhishkitError):
    """A confusion matrix is missing one of the two classes entirely."""


class UnknownCategory(PhishkitError):
    """A nominal value was not present in the fitted category mapping."""


# --- corpus / file schemas ---

class SchemaMismatch(PhishkitError):
    """A structured file does not match its documented schema."""


class NonBinaryFeatureValue(SchemaMismatch):
    """An indicator file holds a feature value outside {0, 1}."""
