"""Exception types shared by the library and mapped to CLI exit codes."""


class CzlError(Exception):
    exit_code = 1


class MalformedInput(CzlError, ValueError):
    exit_code = 2


class DomainError(CzlError, ValueError):
    exit_code = 2


class ResourceLimit(CzlError):
    exit_code = 3


class PrecisionInsufficient(ResourceLimit):
    pass


class TheoremViolation(CzlError):
    """A structural fact that must hold failed; points at a bug."""


class NotApplicable(CzlError, ValueError):
    exit_code = 2
