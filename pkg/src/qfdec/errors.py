"""Exception hierarchy.

Every error maps to a CLI exit code through ``exit_code``: input problems
exit with 2, scale or budget problems with 3.
"""


class QfdecError(Exception):
    exit_code = 1


class InputError(QfdecError, ValueError):
    exit_code = 2


class ScaleError(QfdecError):
    exit_code = 3


class FormSyntaxError(InputError):
    """Malformed form expression."""


class DegreeError(InputError):
    """A monomial of degree other than 2."""


class UnknownVariable(InputError):
    """A variable other than r, s, t."""


class BothZero(InputError):
    pass


class PreconditionViolated(InputError):
    pass


class SingularTransform(InputError):
    pass


class UnsupportedClass(InputError):
    pass


class NonIntegerCoefficients(InputError):
    pass


class DegenerateInput(InputError):
    pass


class BadSampleCount(InputError):
    pass


class PackingOverflow(ScaleError):
    pass


class MemoryBudgetExceeded(ScaleError):
    pass


class ScaleTooLarge(ScaleError):
    pass


class PrecisionLoss(ScaleError):
    pass


class InternalInconsistency(QfdecError):
    """The decision procedure reached a branch that exact arithmetic rules out."""
