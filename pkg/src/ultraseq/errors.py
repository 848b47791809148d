"""Exception hierarchy shared by all modules."""


class UltraseqError(Exception):
    """Base class for all package errors."""


class InvalidParameter(UltraseqError, ValueError):
    pass


class ScaleMismatch(UltraseqError, ValueError):
    pass


class DegenerateScale(UltraseqError, ValueError):
    pass


class AmbiguousDominance(UltraseqError):
    """Raised when terms of equal growth may cancel, so no term dominates."""


class NotModerate(UltraseqError):
    pass


class Unsupported(UltraseqError, NotImplementedError):
    pass


class PreconditionFailed(UltraseqError):
    pass


class NotCauchy(UltraseqError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}
