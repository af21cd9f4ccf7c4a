"""Exception hierarchy.

Input problems derive from :class:`ValidationError` (CLI exit code 2);
numerical failures derive from :class:`NumericFailure` (CLI exit code 3).
"""


class KnotGateError(Exception):
    pass


class ValidationError(KnotGateError, ValueError):
    pass


class NumericFailure(KnotGateError, RuntimeError):
    pass


# diagram
class EmptyInput(ValidationError):
    pass


class MalformedToken(ValidationError):
    pass


class ArcCountMismatch(ValidationError):
    pass


class UnknownName(ValidationError, KeyError):
    pass


# fpgroup
class NotSolvable(ValidationError):
    pass


# algebra
class NotUnit(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


# reps
class MissingGeneratorImage(ValidationError):
    pass


class InfeasibleParams(ValidationError):
    pass


class NoConvergence(NumericFailure):
    """Raised by the representation solver; ``attempt`` holds the best result found."""

    def __init__(self, message, attempt=None):
        super().__init__(message)
        self.attempt = attempt


# holonomy
class DegenerateSpectrum(NumericFailure):
    pass


class InvalidConnection(ValidationError):
    def __init__(self, message, worst_relator=None, residual=None):
        super().__init__(message)
        self.worst_relator = worst_relator
        self.residual = residual


class InvalidRepresentation(ValidationError):
    pass


# compile
class TargetNotSU2(ValidationError):
    pass
