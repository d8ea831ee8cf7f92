"""Exception types raised by the walkrec pipeline."""


class WalkrecError(Exception):
    """Base class for all walkrec errors."""


class MissingColumn(WalkrecError):
    """Input CSV header lacks a required column."""


class EmptyRecording(WalkrecError):
    """No usable samples after parsing/resampling."""


class NonMonotonicTime(WalkrecError):
    """Timestamps decrease by more than the duplicate tolerance."""


class TooShort(WalkrecError):
    """Signal shorter than the minimum the operation needs."""


class NoLabels(WalkrecError):
    """Operation requires per-sample activity labels."""


class BadBand(WalkrecError):
    """Frequency band/grid ordering preconditions violated."""


class BadSpec(WalkrecError):
    """Synthetic-recording spec is malformed."""


class LengthMismatch(WalkrecError):
    """Predictions and truth cover a different number of windows."""


class Empty(WalkrecError):
    """No scores/subjects to aggregate."""


class NoPositives(WalkrecError):
    """ROC sweep input contains no positive windows."""


class NoNegatives(WalkrecError):
    """ROC sweep input contains no negative windows."""


class RankDeficient(WalkrecError):
    """Regression design matrix is not full rank."""


class IncompleteRows(WalkrecError):
    """No regression rows remain after dropping incomplete ones."""


class ConfigError(WalkrecError):
    """Invalid CLI flag/config-file combination."""
