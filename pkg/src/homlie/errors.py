"""Exception hierarchy shared by every module."""


class HomLieError(Exception):
    """Base class for all errors raised by the package."""


class ModeError(HomLieError):
    """Exact and approximate scalars were mixed, or the wrong mode was supplied."""


class DimensionMismatch(HomLieError):
    pass


class SingularMatrix(HomLieError):
    pass


class NotRegular(HomLieError):
    """The twist map of an algebra is not invertible."""


class NotMultiplicative(HomLieError):
    """The twist map does not preserve the bracket."""


class NotAutomorphism(HomLieError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDerivation(HomLieError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BadParameter(HomLieError):
    pass


class NotAGroup(HomLieError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidHomGroup(HomLieError):
    pass


class ConsistencyError(HomLieError):
    """Two routes to the same quantity disagreed beyond tolerance."""


class SchemaError(HomLieError):
    """A JSON document does not match the expected layout."""
