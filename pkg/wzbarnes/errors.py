"""
Exception hierarchy for wzbarnes
Every failure the library can report derives from WZBError
"""


class WZBError(Exception):
    """Base class for all wzbarnes errors"""


# Exact arithmetic

class DivisionByZero(WZBError, ZeroDivisionError):
    """Division by the zero rational function"""


class PoleAtPoint(WZBError):
    """A rational function was evaluated where its denominator vanishes"""


# Hypergeometric terms

class NotHypergeometric(WZBError):
    """A shift quotient does not reduce to a rational function"""


class NotProportional(WZBError):
    """Two terms do not differ by a rational factor"""


class MissingSignFactor(WZBError):
    """Barnesification needs a (-1)^n factor in the series term"""


class RuleNotApplicable(WZBError):
    """A Gamma factor matches none of the duality rewrite rules"""


class GammaPole(WZBError):
    """Gamma evaluated at a non-positive integer"""


PoleAtNonpositiveInteger = GammaPole


# Numerics

class DomainError(WZBError, ValueError):
    """Argument outside the region where the computation is defined"""


class NotConverged(WZBError):
    """An adaptive computation exhausted its budget"""


class Divergent(NotConverged):
    """A series was classified as divergent by its term-ratio monitor"""


class NoStraightSeparatingLine(WZBError):
    """No vertical line separates the poles of Gamma(-s) from the others"""


class CollidingPoles(WZBError):
    """Two pole families meet, giving poles of higher order"""


class UnsupportedIntegrand(WZBError):
    """The integrand is outside the shapes the Barnes module handles"""


# Registry and DSL

class UnknownId(WZBError, KeyError):
    """No registry item has the requested id"""

    def __str__(self):
        return Exception.__str__(self)


class DSLSyntaxError(WZBError):
    """Malformed term file, with the location of the offending token"""

    def __init__(self, message: str, line: int = None, column: int = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class UndefinedName(DSLSyntaxError):
    """A binding refers to a name that is not defined before use"""
