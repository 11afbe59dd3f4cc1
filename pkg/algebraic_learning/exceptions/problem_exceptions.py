class ProblemException(Exception):
    """Base exception for problem encoding and data ingestion errors"""

    pass


class DimensionMismatchException(ProblemException):
    """The image does not match the dimensions of the encoder."""

    def __init__(self, message="Image dimensions do not match", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class InvalidBoardConfigException(ProblemException):
    """The board size or blocked squares are not playable."""

    def __init__(self, message="Invalid board configuration", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class UndecidedSquaresException(ProblemException):
    """A board cannot be validated while some squares are undecided."""

    def __init__(self, message="The board has undecided squares", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class BadMagicException(ProblemException):
    """The IDX file does not start with the expected magic number."""

    def __init__(self, message="Unexpected IDX magic number", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class CountMismatchException(ProblemException):
    """Image and label files hold a different number of items."""

    def __init__(self, message="Image and label counts differ", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class TruncatedFileException(ProblemException):
    """The IDX file is shorter than its header announces."""

    def __init__(self, message="The IDX file is truncated", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class RelationSyntaxException(ProblemException):
    """A line of the relation file cannot be parsed."""

    def __init__(self, message="Invalid relation syntax", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class SnapshotFormatException(ProblemException):
    """The snapshot document does not match the snapshot schema."""

    def __init__(
        self,
        message="The snapshot document does not match the snapshot schema.",
        details=None,
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)
