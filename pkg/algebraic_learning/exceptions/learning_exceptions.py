class LearningException(Exception):
    """Base exception for learning-related errors"""

    pass


class NoDiscriminantPossibleException(LearningException):
    """No constant or dual atom can discriminate a negative relation."""

    def __init__(
        self,
        message="No discriminant can be found for the negative relation",
        details=None,
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)


class InconsistentInputException(LearningException):
    """The relation set contradicts itself."""

    def __init__(self, message="The relation set is inconsistent", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class InconsistentTrainingSetException(LearningException):
    """A batch relation fails the dual consistency check."""

    def __init__(self, message="The training batch is inconsistent", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class TraceConstraintMissingException(LearningException):
    """A crossing was requested before its trace constraint was enforced."""

    def __init__(
        self,
        message="The trace constraint of the relation is not enforced",
        details=None,
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)


class SizeLimitExceededException(LearningException):
    """An atomization grew beyond the configured cap."""

    def __init__(self, message="Atom count exceeds the configured cap", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class IterationLimitException(LearningException):
    """Trace enforcement did not reach a fixpoint within the iteration guard."""

    def __init__(
        self, message="Trace enforcement exceeded its iteration guard", details=None
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)
