"""Shared exception types. Each maps to a CLI exit code in cli.py."""


class SuperTriplesError(Exception):
    pass


class ParseError(SuperTriplesError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = "line %s, col %s: %s" % (line, col, message)
        super().__init__(message)


class ConstraintViolation(SuperTriplesError):
    pass


class InconsistentRadical(SuperTriplesError):
    pass


class DivisionByZero(SuperTriplesError, ZeroDivisionError):
    pass


class DimensionMismatch(SuperTriplesError):
    pass


class NotAutomorphism(SuperTriplesError):
    pass


class UnknownName(SuperTriplesError, KeyError):
    pass


class UnknownId(SuperTriplesError, KeyError):
    pass


class BudgetExceeded(SuperTriplesError):
    pass
