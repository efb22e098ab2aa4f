"""
Closed-form constants: rational combinations of pi, sqrt2, sqrt3 and Gamma(3/4)
"""

from dataclasses import dataclass
from fractions import Fraction

from .exact import as_rational, format_rational
from .mpnum import CONSTANT_NAMES, Precision, constants, to_mp

# Names accepted in term files
ALIASES = {"pi": "pi", "sqrt2": "sqrt2", "sqrt3": "sqrt3", "gamma34": "gamma_3_4", "gamma_3_4": "gamma_3_4"}


class Expr:
    """Node of an exactly specified closed form, evaluated on demand"""

    def evaluate(self, prec: Precision):
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def _wrap(self) -> str:
        return self.text()

    def __add__(self, other) -> "Expr":
        return BinOp("+", self, lift(other))

    def __radd__(self, other) -> "Expr":
        return BinOp("+", lift(other), self)

    def __sub__(self, other) -> "Expr":
        return BinOp("-", self, lift(other))

    def __rsub__(self, other) -> "Expr":
        return BinOp("-", lift(other), self)

    def __mul__(self, other) -> "Expr":
        return BinOp("*", self, lift(other))

    def __rmul__(self, other) -> "Expr":
        return BinOp("*", lift(other), self)

    def __truediv__(self, other) -> "Expr":
        return BinOp("/", self, lift(other))

    def __rtruediv__(self, other) -> "Expr":
        return BinOp("/", lift(other), self)

    def __neg__(self) -> "Expr":
        return BinOp("*", Num(Fraction(-1)), self)

    def __pow__(self, exponent) -> "Expr":
        return Power(self, as_rational(exponent))

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True, eq=False)
class Num(Expr):
    value: Fraction

    def evaluate(self, prec: Precision):
        return to_mp(prec.context(), self.value)

    def text(self) -> str:
        return format_rational(self.value)

    def _wrap(self) -> str:
        return f"({self.text()})" if self.value.denominator != 1 or self.value < 0 else self.text()


@dataclass(frozen=True, eq=False)
class Const(Expr):
    name: str

    def __post_init__(self):
        if self.name not in CONSTANT_NAMES:
            raise KeyError(f"Unknown constant '{self.name}'")

    def evaluate(self, prec: Precision):
        return constants(self.name, prec)

    def text(self) -> str:
        return "gamma34" if self.name == "gamma_3_4" else self.name


@dataclass(frozen=True, eq=False)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def evaluate(self, prec: Precision):
        a = self.left.evaluate(prec)
        b = self.right.evaluate(prec)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def text(self) -> str:
        if self.op in "+-":
            return f"{self.left.text()} {self.op} {self.right._wrap()}"
        return f"{self.left._wrap()}{self.op}{self.right._wrap()}"

    def _wrap(self) -> str:
        return f"({self.text()})"


@dataclass(frozen=True, eq=False)
class Power(Expr):
    base: Expr
    exponent: Fraction

    def evaluate(self, prec: Precision):
        ctx = prec.context()
        value = self.base.evaluate(prec)
        if self.exponent.denominator == 1:
            return value ** int(self.exponent)
        return ctx.power(value, to_mp(ctx, self.exponent))

    def text(self) -> str:
        exponent = format_rational(self.exponent)
        if self.exponent.denominator != 1 or self.exponent < 0:
            exponent = f"({exponent})"
        return f"{self.base._wrap()}^{exponent}"


def lift(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Num(as_rational(value))


def constant(name: str) -> Const:
    return Const(ALIASES[name])


PI = Const("pi")
SQRT2 = Const("sqrt2")
SQRT3 = Const("sqrt3")
GAMMA34 = Const("gamma_3_4")
ZERO = Num(Fraction(0))
ONE = Num(Fraction(1))
