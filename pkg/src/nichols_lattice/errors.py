"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to: 1 for domain errors,
3 for internal inconsistencies (catalog transcription bugs, violated
assertions).
"""


class NicholsError(Exception):
    exit_code = 1


class UndeclaredParameter(NicholsError):
    pass


class UnboundParameter(NicholsError):
    pass


class ParseError(NicholsError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class NotFiniteType(NicholsError):
    pass


class Inconsistent(NicholsError):
    exit_code = 3


class BudgetExceeded(NicholsError):
    pass


class NotSymmetrizable(NicholsError):
    pass


class MalformedDatum(NicholsError):
    pass


class DivisionByZero(NicholsError):
    pass


class SingularGram(NicholsError):
    pass


class DegreeCapExceeded(NicholsError):
    pass


class SchemaError(NicholsError):
    pass


class IoError(NicholsError):
    pass


class ValidityViolated(NicholsError):
    pass


class CartanMismatch(NicholsError):
    exit_code = 3


class ConstraintViolated(NicholsError):
    pass
