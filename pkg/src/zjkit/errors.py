"""Exception hierarchy shared by every zjkit module."""


class ZJError(Exception):
    """Base class for all zjkit errors."""


class InvalidPermutation(ZJError):
    pass


class ClosureCapExceeded(ZJError):
    pass


class NotNilpotent(ZJError):
    pass


class NotNormal(ZJError):
    pass


class NotNormalInS(NotNormal):
    pass


class NotAPGroup(ZJError):
    pass


class NotAbelian(ZJError):
    pass


class InternalError(ZJError):
    pass


class PreconditionViolated(ZJError):
    """Raised with a short tag naming the precondition that failed."""

    def __init__(self, which, detail=""):
        self.which = which
        super().__init__(f"{which}: {detail}" if detail else which)


class TheoremViolation(ZJError):
    """A computed object contradicts a proven statement: an implementation bug."""


class FamilyNotClosed(TheoremViolation):
    pass


class AutCapExceeded(ZJError):
    pass


class InvalidPrime(ZJError):
    pass


class UnknownBuilder(ZJError):
    pass


class InvalidParams(ZJError):
    pass
