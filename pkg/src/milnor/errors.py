"""Exception hierarchy.

Every error carries a stable ``code`` string so the CLI can report it and
scripts can match on it.
"""


class MilnorError(Exception):
    code = "ERROR"


class DivisionByZero(MilnorError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class NotDivisible(MilnorError, ArithmeticError):
    code = "NOT_DIVISIBLE"


class NotInDomain(MilnorError, ValueError):
    code = "NOT_IN_DOMAIN"


class ExponentOverflow(MilnorError, OverflowError):
    code = "EXPONENT_OVERFLOW"


class ParseError(MilnorError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


class ShapeError(MilnorError, ValueError):
    code = "SHAPE_ERROR"


class MembershipError(MilnorError, ValueError):
    """An entry violates the ring tag it is claimed to live in."""

    code = "MEMBERSHIP_FAILED"


class NotAUnit(MilnorError, ArithmeticError):
    code = "NOT_A_UNIT"


class FieldMismatch(MilnorError, TypeError):
    code = "FIELD_MISMATCH"


class DetNotDivisible(MilnorError, ArithmeticError):
    code = "DET_NOT_DIVISIBLE"


class DetNotMonomial(MilnorError, ArithmeticError):
    code = "DET_NOT_MONOMIAL"


class ExponentTooLarge(MilnorError, ValueError):
    code = "EXPONENT_TOO_LARGE"


class NotSL(MilnorError, ValueError):
    code = "NOT_SL"


class NotGL(MilnorError, ValueError):
    code = "NOT_GL"


class RankMismatch(MilnorError, ValueError):
    code = "RANK_MISMATCH"


class InternalCheckFailed(MilnorError, AssertionError):
    """Raised when a postcondition that holds for every valid input breaks.

    Seeing this always means a bug in the library, never bad input.
    """

    code = "INTERNAL_CHECK_FAILED"
