"""Exception hierarchy shared by all modules."""


class TotmatchError(Exception):
    """Base class for all package errors."""


class InputError(TotmatchError, ValueError):
    """Malformed input: bad graph file, invalid element id, bad selector."""


class PreconditionError(TotmatchError, ValueError):
    """A documented operation precondition does not hold."""


class SizeCapError(TotmatchError):
    """Instance exceeds a configured enumeration cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class BoundExceededError(TotmatchError):
    """Raised by solvers that require a valid bound when the structural
    decomposition certifies the bound is violated. Carries the certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
