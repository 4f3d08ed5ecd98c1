"""Exception hierarchy shared by all lexitag modules."""


class LexitagError(Exception):
    """Base class for all errors raised by this package."""


class DumpReadError(LexitagError):
    """I/O failure while streaming a knowledge-base dump."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"{message} (at dump line {line_no})")
        self.line_no = line_no


class FormatMismatchError(LexitagError):
    """The dump does not look like newline-delimited entity JSON."""


class ConfigError(LexitagError):
    """Invalid annotation configuration; ``field`` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class StaleMatcherError(LexitagError):
    """The compiled matcher was built for a different configuration."""


class ConllError(LexitagError):
    """Malformed CoNLL input; ``line_no`` is 1-based."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MissingLayerError(LexitagError):
    """A requested tag layer (gold/predicted) is absent from the corpus."""


class UnknownLanguageError(LexitagError):
    """No bundled stopword list for the requested language code."""


class OverrideConflictError(LexitagError):
    """A manual override overlaps an existing one."""


class AlignmentError(LexitagError):
    """Predicted and gold corpora do not cover the same tokens."""


class ProjectError(LexitagError):
    """Project directory is missing required files or is inconsistent."""
