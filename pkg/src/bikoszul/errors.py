"""Exception hierarchy.

Every error carries a stable ``code`` string so the command line can report
failures in a machine-readable way.
"""


class AlgebraError(Exception):
    code = "AlgebraError"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class ZeroPolynomial(AlgebraError):
    code = "ZeroPolynomial"


class NotBihomogeneous(AlgebraError):
    code = "NotBihomogeneous"


class DimensionMismatch(AlgebraError):
    code = "DimensionMismatch"


class BadDegree(AlgebraError):
    code = "BadDegree"


class BadOrder(AlgebraError):
    code = "BadOrder"


class Unstable(AlgebraError):
    code = "Unstable"


class NotQuadratic(AlgebraError):
    code = "NotQuadratic"


class StarViolated(AlgebraError):
    code = "StarViolated"


class EmptyDiagonal(AlgebraError):
    code = "EmptyDiagonal"


class BadOffset(AlgebraError):
    code = "BadOffset"


class TruncationTooSmall(AlgebraError):
    code = "TruncationTooSmall"


class BoundExceeded(AlgebraError):
    code = "BoundExceeded"


class MixedGeneratorDegrees(AlgebraError):
    code = "MixedGeneratorDegrees"


class UnequalDegrees(AlgebraError):
    code = "UnequalDegrees"


class GradingConflict(AlgebraError):
    code = "GradingConflict"

    def __init__(self, vector, first, second):
        super().__init__(f"{vector} has bidegrees {first} and {second}",
                         vector=vector, bidegrees=(first, second))
        self.vector = vector
        self.bidegrees = (first, second)


class NotMember(AlgebraError):
    code = "NotMember"


class ParseError(AlgebraError):
    code = "ParseError"

    def __init__(self, message, line=None, column=None):
        where = f"line {line}" if line is not None else ""
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}" if where else message,
                         line=line, column=column)
        self.line = line
        self.column = column
