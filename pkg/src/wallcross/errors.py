"""Exception hierarchy.

Everything raised on bad input derives from ``ValidationError`` so the CLI can
map it to exit code 2; numerical certificates that fail raise
``CertificationError`` (exit code 3).
"""


class ValidationError(ValueError):
    pass


class DomainError(ValidationError):
    pass


class PoleError(ValidationError, ZeroDivisionError):
    pass


class InvalidRuleError(ValidationError):
    pass


class NotLaurentError(ValidationError):
    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class CrossingInconsistentError(NotLaurentError):
    pass


class CornerNotSmoothError(DomainError):
    pass


class OutOfBaseError(DomainError):
    pass


class PathError(DomainError):
    pass


class UnboundedEnumerationError(ValidationError):
    pass


class RenderError(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class NoSolutionError(ValidationError):
    pass


class CertificationError(RuntimeError):
    pass


class AmbiguousRootError(CertificationError):
    pass


class SolverError(CertificationError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
