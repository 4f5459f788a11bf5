"""Exception hierarchy shared by all spircap modules."""


class SpirError(Exception):
    """Base class for every error raised by spircap."""


class PatternError(SpirError, ValueError):
    pass


class FullSetPresent(PatternError):
    """A pattern contains the set of all servers; no private scheme exists."""


class EmptyPattern(PatternError):
    pass


class ServerIndexError(PatternError):
    pass


class PatternMismatch(PatternError):
    """Two patterns over a different number of servers were combined."""


class LpError(SpirError):
    pass


class UnboundedLp(LpError):
    pass


class InfeasibleLp(LpError):
    pass


class DualityGap(LpError, AssertionError):
    pass


class FieldError(SpirError, ArithmeticError):
    pass


class FieldMismatch(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class SingularMatrix(FieldError):
    pass


class NotEnoughPoints(SpirError, ValueError):
    pass


class SchemeError(SpirError, ValueError):
    pass


class FNotGreaterThanOne(SchemeError):
    pass


class InfeasibleY(SchemeError):
    pass


class ThetaOutOfRange(SchemeError):
    pass


class InsufficientRandomness(SchemeError):
    """Requested common randomness is below the 1/(F*-1) threshold."""


class BudgetExceeded(SpirError):
    pass
