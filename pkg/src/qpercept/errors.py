"""Exception hierarchy shared by every module in the package."""


class QPerceptError(Exception):
    """Base class for all package errors."""


class DimensionError(QPerceptError, ValueError):
    pass


class NumericalError(QPerceptError, ArithmeticError):
    pass


class DegenerateInputError(QPerceptError, ValueError):
    pass


class PreconditionError(QPerceptError, ValueError):
    pass


class NotFoundError(QPerceptError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else ""


class ParseError(QPerceptError, ValueError):
    """Syntax error in a state or dataset text.

    ``position`` is the 0-based character offset in the offending text,
    ``line`` the 1-based line number when parsing a whole file.
    """

    def __init__(self, message, position=None, line=None):
        self.message = message
        self.position = position
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.position is not None:
            where.append(f"column {self.position + 1}")
        return f"{', '.join(where)}: {self.message}" if where else self.message
