"""Exception hierarchy.

Every error raised by the library derives from :class:`ToposError`, so
callers can catch the whole family at once.  ``ValidationError`` and
``ParseError`` belong to scenario ingestion; the rest are computational.
"""


class ToposError(Exception):
    pass


class NonHermitian(ToposError):
    pass


class DimensionMismatch(ToposError):
    pass


class NotNormalised(ToposError):
    pass


class NonCommuting(ToposError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class TrivialAlgebra(ToposError):
    pass


class UnknownContext(ToposError):
    pass


class NotASubcontext(ToposError):
    pass


class NotInAlgebra(ToposError):
    pass


class BaseMismatch(ToposError):
    pass


class PosetMismatch(ToposError):
    pass


class NotASieve(ToposError):
    pass


class EmptyPoset(ToposError):
    pass


class EmptyWindow(ToposError):
    pass


class OperatorNotCovered(ToposError):
    pass


class InconsistentSection(ToposError):
    pass


class ParseError(ToposError):
    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class ValidationError(ToposError):
    pass
