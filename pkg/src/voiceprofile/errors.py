"""Exception types raised across the toolkit.

Every error raised by this package derives from VoiceProfileError, so
callers can catch one base type at the CLI boundary. Conditions that are
reported as flags on a result (non-convergence, degenerate responses,
zero-variance t-tests) deliberately have no exception here.
"""


class VoiceProfileError(Exception):
    """Base class for all toolkit errors."""


# --- annotation / split / embedding file errors ---

class MalformedRowError(VoiceProfileError):
    def __init__(self, path, line_no, reason):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {reason}")


class DuplicateSpeakerError(VoiceProfileError):
    def __init__(self, speaker_id, path=None):
        self.speaker_id = speaker_id
        where = f" in {path}" if path else ""
        super().__init__(f"duplicate speaker id {speaker_id!r}{where}")


class HeightOutOfRangeError(VoiceProfileError):
    def __init__(self, speaker_id, value):
        self.speaker_id = speaker_id
        self.value = value
        super().__init__(
            f"speaker {speaker_id!r}: height {value} cm outside the sane range [100, 250]"
        )


class EmbeddingFormatError(VoiceProfileError):
    """Malformed embedding file (bad version, trailing bytes, non-finite data)."""


class BadMagicError(EmbeddingFormatError):
    def __init__(self, path, found):
        super().__init__(f"{path}: bad magic {found!r}, expected b'HCEB'")


class TruncatedFileError(EmbeddingFormatError):
    def __init__(self, path, detail):
        super().__init__(f"{path}: truncated file ({detail})")


class DimMismatchError(VoiceProfileError):
    def __init__(self, expected, found, context=""):
        self.expected = expected
        self.found = found
        suffix = f" ({context})" if context else ""
        super().__init__(f"dimension mismatch: expected {expected}, found {found}{suffix}")


class UnknownSpeakerError(VoiceProfileError):
    def __init__(self, speaker_id):
        self.speaker_id = speaker_id
        super().__init__(f"speaker {speaker_id!r} has no annotation")


# --- value errors shared by stats and dataset operations ---

class EmptyGroupError(VoiceProfileError):
    def __init__(self, what="group"):
        super().__init__(f"empty {what}")


class NonPositiveError(VoiceProfileError):
    def __init__(self, value):
        super().__init__(f"expected a positive value, got {value}")


class EmptyInputError(VoiceProfileError):
    pass


class NegativeValueError(VoiceProfileError):
    def __init__(self, value):
        super().__init__(f"absolute errors must be >= 0, got {value}")


class LengthMismatchError(VoiceProfileError):
    def __init__(self, n_a, n_b):
        super().__init__(f"length mismatch: {n_a} vs {n_b}")


class TooFewPairsError(VoiceProfileError):
    def __init__(self, n):
        super().__init__(f"need at least 2 pairs, got {n}")


class InvalidDfError(VoiceProfileError):
    def __init__(self, df):
        super().__init__(f"degrees of freedom must be >= 1, got {df}")


# --- model fitting errors ---

class EmptyTrainingSetError(VoiceProfileError):
    pass


class NonFiniteInputError(VoiceProfileError):
    def __init__(self, what="input"):
        super().__init__(f"{what} contains NaN or infinite values")


class TooManyComponentsError(VoiceProfileError):
    def __init__(self, n_components, d):
        super().__init__(f"n_components={n_components} outside [1, {d}]")


class SingleClassError(VoiceProfileError):
    def __init__(self):
        super().__init__("training labels contain a single class; need both")


class ModelFormatError(VoiceProfileError):
    """Malformed persisted-model file."""


# --- pipeline / experiment errors ---

class MissingGenderError(VoiceProfileError):
    def __init__(self, gender):
        self.gender = gender
        super().__init__(f"training set has no {gender} speakers")


class EmptyValidationError(VoiceProfileError):
    def __init__(self, gender):
        super().__init__(f"validation set has no {gender} utterances")


class ConfigError(VoiceProfileError):
    pass


class ExperimentError(VoiceProfileError):
    """Wraps any failure inside run_experiment with the stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r}: {cause}")
