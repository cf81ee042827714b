"""Exception hierarchy shared by all quasilin modules."""


class QuasilinError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOperandError(QuasilinError):
    """Operand outside an operation's domain (division by zero, inexact
    division, square root of a non-square, zero radicand, ...)."""


class SquareRadicandError(InvalidOperandError):
    """Attempt to adjoin the square root of an element that already is a
    square; callers wanting the root should call sqrt instead."""


class SplitFormError(InvalidOperandError):
    """A function-field construction was asked for a split form (the
    anisotropic part has dimension at most 1, so there is no quadric)."""


class FieldMismatchError(QuasilinError):
    """Elements or forms from different field towers were mixed."""


class NameCollisionError(QuasilinError):
    """A variable or root name is already taken in the tower."""


class BudgetExceededError(QuasilinError):
    """A construction would exceed the transcendental-variable budget.

    Raised before any work is discarded; callers either propagate the
    refusal or record an explicit partial result.
    """


class InternalCheckError(QuasilinError):
    """A cross-validation that must always succeed has failed; this is a
    bug in the package, never a property of the input."""


class ScriptError(QuasilinError):
    """Syntax or validation error in a CLI session script."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "line %d, column %d: %s" % (line, column, message)
        super().__init__(message)
