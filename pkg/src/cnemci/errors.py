"""Exception hierarchy shared by all modules."""


class CnemciError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(CnemciError):
    pass


class EmptyAfterFiltering(CnemciError):
    """Every token of a transcript was a stopword or punctuation."""


class FormatError(CnemciError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f"{':' if where else 'line '}{line}"
        super().__init__(f"{where}: {message}" if where else message)


class UndefinedSimilarity(CnemciError):
    """Cosine similarity requested for a zero-norm vector."""


class TrainingError(CnemciError):
    pass


class VoteError(CnemciError):
    pass


class SplitError(CnemciError):
    pass


class ConfigError(CnemciError):
    pass
