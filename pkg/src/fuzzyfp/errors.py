"""Exception types shared across the toolkit.

Every failure mode raises a subclass of :class:`FuzzyFPError`; the CLI maps
them onto exit codes (data problems -> 3, bad parameters -> 4).
"""


class FuzzyFPError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(FuzzyFPError):
    """A fuzzification/similarity parameter is out of range (k, a, n)."""


class DimensionError(FuzzyFPError):
    """Vector or fingerprint sizes do not line up."""


class FeatureSpaceError(FuzzyFPError):
    """Activation-space and token-space objects were mixed."""


class BuildError(FuzzyFPError):
    """Fingerprint or library construction failed (empty/mixed input)."""


class ClassificationError(FuzzyFPError):
    """Classification could not be performed."""


class EvaluationError(FuzzyFPError):
    """Evaluation inputs are inconsistent (lengths, unknown labels, splits)."""


class DataFormatError(FuzzyFPError):
    """A file failed to parse or validate.

    Carries enough context to point at the offending line/record.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)


class UnsupportedVersionError(DataFormatError):
    """A library file declares a format version this code cannot read."""
