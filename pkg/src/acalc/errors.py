"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class AlgebraMismatchError(AlgebraError, TypeError):
    """Two operands live in different algebras."""


class StructureError(AlgebraError, ValueError):
    """Structure constants fail commutativity, associativity or unity."""


class NotInvertibleError(AlgebraError, ZeroDivisionError):
    """Division by an element that is not a unit."""


class LogDomainError(AlgebraError, ValueError):
    """Argument lies outside the principal logarithm domain."""


class NotMonicError(AlgebraError, ValueError):
    pass


class NoIsomorphismError(AlgebraError):
    pass


class DegenerateOperatorError(AlgebraError):
    """Leading coefficient is a zero divisor."""


class DependentExponentialsError(AlgebraError):
    """Two exponents differ by a zero divisor."""


class WronskianError(AlgebraError):
    """Wronskian at the fitting point is not a unit."""


class RelationError(AlgebraError, ValueError):
    """A basis-word relation does not vanish in the algebra."""


class ParseError(Exception):
    """Syntax or name-resolution error with a source position (CLI exit code 2)."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def at_line(self, line):
        return ParseError(self.message, line, self.column)

    def __str__(self):
        if self.line is not None and self.column is not None:
            return f"line {self.line}, column {self.column}: {self.message}"
        if self.column is not None:
            return f"column {self.column}: {self.message}"
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message
