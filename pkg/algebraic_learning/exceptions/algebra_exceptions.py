class AlgebraException(Exception):
    """Base exception for errors raised by the algebra state"""

    pass


class DuplicateNameException(AlgebraException):
    """A constant with the same name is already registered."""

    def __init__(
        self, message="A constant with this name is already registered", details=None
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)


class EmptyTermException(AlgebraException):
    """A term needs at least one component constant."""

    def __init__(self, message="A term needs at least one component", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class UnknownConstantException(AlgebraException):
    """The constant is not registered in the algebra or snapshot."""

    def __init__(self, message="Unknown constant", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class UnknownTargetException(AlgebraException):
    """An atom was edged to an element that does not exist."""

    def __init__(self, message="Unknown edge target", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class UnknownAtomException(AlgebraException):
    """The atom does not exist, was deleted, or is a permanent bottom atom."""

    def __init__(self, message="Unknown or undeletable atom", details=None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class MixedAlgebrasException(AlgebraException):
    """Elements of the master and the dual algebra cannot be compared."""

    def __init__(
        self, message="Cannot compare elements of different algebras", details=None
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)


class DualElementGivenException(AlgebraException):
    """A master element was expected but a dual element was given."""

    def __init__(
        self, message="Expected an element of the master algebra", details=None
    ):
        self.message = message
        self.details = details
        super().__init__(self.message)
