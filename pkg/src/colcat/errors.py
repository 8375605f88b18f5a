"""Exception types raised by the colcat library."""


class ColcatError(Exception):
    """Base class for all colcat errors."""


class RaggedRowError(ColcatError):
    """A delimited file row has a field count that disagrees with the header."""

    def __init__(self, line_number: int, expected: int, got: int):
        self.line_number = line_number
        self.expected = expected
        self.got = got
        super().__init__(
            f"line {line_number}: expected {expected} fields, got {got}"
        )


class EmptyColumnError(ColcatError):
    """An operation that needs at least one cell was given an empty column."""


class DegenerateLabelsError(ColcatError):
    """Classifier training was given labels containing only one class."""


class ModelError(ColcatError):
    """A classifier model file is missing, malformed, or inconsistent."""


class ArffError(ColcatError):
    """ARFF text could not be emitted or does not conform to the grammar."""


class CorpusError(ColcatError):
    """A corpus directory or annotation file is malformed or inconsistent."""


class ConfigError(ColcatError):
    """An evaluation or cross-validation configuration is unusable."""
