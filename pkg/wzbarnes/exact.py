"""
Exact arithmetic in the two discrete variables n and k

BiPoly wraps a sympy Poly over QQ, RationalFunction keeps a reduced
numerator/denominator pair with a monic denominator, and AffineForm is
the c + a*n + b*k shape every Gamma argument and exponent takes.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

import sympy
from sympy import QQ, Poly

from .errors import DivisionByZero, PoleAtPoint

logger = logging.getLogger(__name__)

N, K = sympy.symbols("n k")
VARIABLES = ("n", "k")
_SYMBOLS = {"n": N, "k": K}
ORDER = "grlex"

RationalLike = Union[int, Fraction, str]


def as_rational(value) -> Fraction:
    """Coerce int, Fraction, numeric string or sympy Rational to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Cannot use {value!r} as an exact rational")


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return as_rational(QQ.to_sympy(value))


def _check_variable(var: str) -> str:
    if var not in _SYMBOLS:
        raise ValueError(f"Unknown variable '{var}', expected one of {VARIABLES}")
    return var


def format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class BiPoly:
    """Polynomial in n and k with rational coefficients"""

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        self._poly = poly

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, int], RationalLike]) -> "BiPoly":
        rep = {}
        for (i, j), coeff in terms.items():
            value = as_rational(coeff)
            if value:
                rep[(i, j)] = _to_qq(value)
        return cls(Poly.from_dict(rep, N, K, domain=QQ))

    @classmethod
    def constant(cls, value: RationalLike) -> "BiPoly":
        return cls.from_terms({(0, 0): value})

    @classmethod
    def variable(cls, var: str) -> "BiPoly":
        _check_variable(var)
        return cls.from_terms({(1, 0) if var == "n" else (0, 1): 1})

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls.from_terms({})

    @classmethod
    def one(cls) -> "BiPoly":
        return cls.constant(1)

    @classmethod
    def _from_expr(cls, expr) -> "BiPoly":
        return cls(Poly(expr, N, K, domain=QQ))

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    def terms(self) -> Tuple[Tuple[Tuple[int, int], Fraction], ...]:
        """Nonzero terms, leading (grlex) first"""
        if self.is_zero:
            return ()
        return tuple((monom, _from_qq(coeff)) for monom, coeff in self._poly.terms(order=ORDER))

    def degree(self, var: str) -> int:
        if self.is_zero:
            return 0
        return self._poly.degree(_SYMBOLS[_check_variable(var)])

    def leading_coefficient(self) -> Fraction:
        return _from_qq(self._poly.LC(order=ORDER))

    def constant_value(self) -> Optional[Fraction]:
        """The value if the polynomial is constant, else None"""
        if self.is_zero:
            return Fraction(0)
        if self._poly.total_degree() == 0:
            return self.leading_coefficient()
        return None

    def __add__(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self._poly + other._poly)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self._poly - other._poly)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self._poly * other._poly)

    def __neg__(self) -> "BiPoly":
        return BiPoly(-self._poly)

    def __pow__(self, exponent: int) -> "BiPoly":
        return BiPoly(self._poly ** exponent)

    def scale(self, factor: RationalLike) -> "BiPoly":
        return BiPoly(self._poly.mul_ground(_to_qq(as_rational(factor))))

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms() == other.terms()

    def __hash__(self) -> int:
        return hash(self.terms())

    def evaluate(self, n, k, convert: Callable[[Fraction], object] = None):
        """
        Evaluate at (n, k)

        With Fraction or int arguments the result is an exact Fraction.
        For floating contexts pass convert, which maps each coefficient
        into the caller's number type.
        """
        convert = convert or (lambda q: q)
        total = convert(Fraction(0))
        for (i, j), coeff in self.terms():
            total = total + convert(coeff) * (n ** i) * (k ** j)
        return total

    def substitute(self, replacements: Mapping[str, "BiPoly"]) -> "BiPoly":
        """Simultaneously replace variables by polynomials"""
        mapping = {_SYMBOLS[_check_variable(var)]: poly._poly.as_expr() for var, poly in replacements.items()}
        if not mapping:
            return self
        return BiPoly._from_expr(self._poly.as_expr().subs(mapping, simultaneous=True))

    def shift(self, var: str, amount: RationalLike) -> "BiPoly":
        amount = as_rational(amount)
        if not amount:
            return self
        return self.substitute({var: BiPoly.variable(var) + BiPoly.constant(amount)})

    def gcd(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self._poly.gcd(other._poly))

    def exquo(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self._poly.exquo(other._poly))

    def to_text(self, names: Tuple[str, str] = VARIABLES) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for (i, j), coeff in self.terms():
            factors = []
            for name, power in ((names[0], i), (names[1], j)):
                if power == 1:
                    factors.append(name)
                elif power > 1:
                    factors.append(f"{name}^{power}")
            magnitude = abs(coeff)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(magnitude)] + factors)
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"BiPoly({self.to_text()})"


def _canonical(num: BiPoly, den: BiPoly) -> Tuple[BiPoly, BiPoly]:
    if num.is_zero:
        return BiPoly.zero(), BiPoly.one()
    g = num.gcd(den)
    if g.constant_value() is None:
        num, den = num.exquo(g), den.exquo(g)
    lead = den.leading_coefficient()
    if lead != 1:
        inverse = 1 / lead
        num, den = num.scale(inverse), den.scale(inverse)
    return num, den


class RationalFunction:
    """
    Reduced quotient of two BiPolys

    The pair is always coprime and the denominator is monic in grlex
    order, so equal functions have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly = None):
        den = BiPoly.one() if den is None else den
        if den.is_zero:
            raise DivisionByZero("rational function with zero denominator")
        self.num, self.den = _canonical(num, den)

    @classmethod
    def constant(cls, value: RationalLike) -> "RationalFunction":
        return cls(BiPoly.constant(value))

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(BiPoly.one())

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(BiPoly.zero())

    @classmethod
    def variable(cls, var: str) -> "RationalFunction":
        return cls(BiPoly.variable(var))

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, BiPoly):
            return cls(value)
        if isinstance(value, AffineForm):
            return cls(value.to_bipoly())
        return cls.constant(value)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def constant_value(self) -> Optional[Fraction]:
        """The value if the function is constant, else None"""
        num_value = self.num.constant_value()
        den_value = self.den.constant_value()
        if num_value is None or den_value is None:
            return None
        return num_value / den_value

    def uses(self, var: str) -> bool:
        return self.num.degree(var) > 0 or self.den.degree(var) > 0

    def __add__(self, other) -> "RationalFunction":
        return rf_arith(self, other, "+")

    def __radd__(self, other) -> "RationalFunction":
        return rf_arith(other, self, "+")

    def __sub__(self, other) -> "RationalFunction":
        return rf_arith(self, other, "-")

    def __rsub__(self, other) -> "RationalFunction":
        return rf_arith(other, self, "-")

    def __mul__(self, other) -> "RationalFunction":
        return rf_arith(self, other, "*")

    def __rmul__(self, other) -> "RationalFunction":
        return rf_arith(other, self, "*")

    def __truediv__(self, other) -> "RationalFunction":
        return rf_arith(self, other, "/")

    def __rtruediv__(self, other) -> "RationalFunction":
        return rf_arith(other, self, "/")

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent >= 0:
            return RationalFunction(self.num ** exponent, self.den ** exponent)
        if self.is_zero:
            raise DivisionByZero("negative power of the zero rational function")
        return RationalFunction(self.den ** -exponent, self.num ** -exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RationalFunction, BiPoly, AffineForm)):
            return rf_equal(self, RationalFunction.coerce(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def evaluate(self, n, k):
        return rf_eval(self, n, k)

    def evaluate_numeric(self, n, k, convert: Callable[[Fraction], object]):
        """Evaluate in a floating context; convert maps coefficients into it"""
        den = self.den.evaluate(n, k, convert)
        if den == 0:
            raise PoleAtPoint(f"denominator {self.den.to_text()} vanishes at n={n}, k={k}")
        return self.num.evaluate(n, k, convert) / den

    def substitute(self, replacements: Mapping[str, "AffineForm"]) -> "RationalFunction":
        """Replace variables by affine forms in n and k"""
        polys = {var: form.to_bipoly() for var, form in replacements.items()}
        return RationalFunction(self.num.substitute(polys), self.den.substitute(polys))

    def shift(self, var: str, amount: RationalLike) -> "RationalFunction":
        return RationalFunction(self.num.shift(var, amount), self.den.shift(var, amount))

    def to_text(self, names: Tuple[str, str] = VARIABLES) -> str:
        num = self.num.to_text(names)
        if self.den.constant_value() == 1:
            return num
        return f"({num})/({self.den.to_text(names)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()})"


@dataclass(frozen=True)
class AffineForm:
    """const + coeff_n*n + coeff_k*k with rational coefficients"""

    const: Fraction = Fraction(0)
    coeff_n: Fraction = Fraction(0)
    coeff_k: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "const", as_rational(self.const))
        object.__setattr__(self, "coeff_n", as_rational(self.coeff_n))
        object.__setattr__(self, "coeff_k", as_rational(self.coeff_k))

    @classmethod
    def of(cls, var: str, coeff: RationalLike = 1, const: RationalLike = 0) -> "AffineForm":
        _check_variable(var)
        if var == "n":
            return cls(const, coeff, 0)
        return cls(const, 0, coeff)

    @classmethod
    def from_rational_function(cls, rf: RationalFunction) -> "AffineForm":
        if rf.den.constant_value() != 1:
            raise ValueError(f"{rf.to_text()} is not affine in n and k")
        coeffs: Dict[Tuple[int, int], Fraction] = dict(rf.num.terms())
        if any(i + j > 1 for i, j in coeffs):
            raise ValueError(f"{rf.to_text()} is not affine in n and k")
        return cls(coeffs.get((0, 0), 0), coeffs.get((1, 0), 0), coeffs.get((0, 1), 0))

    def coeff(self, var: str) -> Fraction:
        return self.coeff_n if _check_variable(var) == "n" else self.coeff_k

    @property
    def is_constant(self) -> bool:
        return not self.coeff_n and not self.coeff_k

    def uses(self, var: str) -> bool:
        return bool(self.coeff(var))

    def without(self, var: str) -> "AffineForm":
        """Drop the var part, keeping the rest"""
        if _check_variable(var) == "n":
            return AffineForm(self.const, 0, self.coeff_k)
        return AffineForm(self.const, self.coeff_n, 0)

    def __add__(self, other) -> "AffineForm":
        if not isinstance(other, AffineForm):
            return AffineForm(self.const + as_rational(other), self.coeff_n, self.coeff_k)
        return AffineForm(self.const + other.const, self.coeff_n + other.coeff_n, self.coeff_k + other.coeff_k)

    __radd__ = __add__

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.const, -self.coeff_n, -self.coeff_k)

    def __sub__(self, other) -> "AffineForm":
        return self + (-other if isinstance(other, AffineForm) else -as_rational(other))

    def __rsub__(self, other) -> "AffineForm":
        return (-self) + other

    def scale(self, factor: RationalLike) -> "AffineForm":
        factor = as_rational(factor)
        return AffineForm(self.const * factor, self.coeff_n * factor, self.coeff_k * factor)

    def shift(self, var: str, amount: RationalLike) -> "AffineForm":
        """Replace var by var + amount"""
        return AffineForm(self.const + self.coeff(var) * as_rational(amount), self.coeff_n, self.coeff_k)

    def specialize(self, var: str, value: RationalLike) -> "AffineForm":
        """Fix var to a constant value"""
        return self.without(var) + self.coeff(var) * as_rational(value)

    def substitute(self, replacements: Mapping[str, "AffineForm"]) -> "AffineForm":
        result = AffineForm(self.const)
        for var in VARIABLES:
            replacement = replacements.get(var, AffineForm.of(var))
            result = result + replacement.scale(self.coeff(var))
        return result

    def evaluate(self, n, k):
        return self.const + self.coeff_n * n + self.coeff_k * k

    def evaluate_numeric(self, n, k, convert: Callable[[Fraction], object]):
        return convert(self.const) + convert(self.coeff_n) * n + convert(self.coeff_k) * k

    def to_bipoly(self) -> BiPoly:
        return BiPoly.from_terms({(0, 0): self.const, (1, 0): self.coeff_n, (0, 1): self.coeff_k})

    def sort_key(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.coeff_n, self.coeff_k, self.const)

    def to_text(self, names: Tuple[str, str] = VARIABLES) -> str:
        return self.to_bipoly().to_text(names)

    def __str__(self) -> str:
        return self.to_text()


def rf_arith(a, b, op: str) -> RationalFunction:
    """Apply one of + - * / to two rational functions (or rational constants)"""
    a = RationalFunction.coerce(a)
    b = RationalFunction.coerce(b)
    if op == "+":
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)
    if op == "-":
        return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den)
    if op == "*":
        return RationalFunction(a.num * b.num, a.den * b.den)
    if op == "/":
        if b.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(a.num * b.den, a.den * b.num)
    raise ValueError(f"Unknown operator '{op}'")


def rf_eval(f: RationalFunction, n: RationalLike, k: RationalLike) -> Fraction:
    """Exact value at a rational point"""
    n, k = as_rational(n), as_rational(k)
    den = f.den.evaluate(n, k)
    if den == 0:
        raise PoleAtPoint(f"denominator {f.den.to_text()} vanishes at n={n}, k={k}")
    return f.num.evaluate(n, k) / den


def rf_equal(a, b) -> bool:
    """Cross-multiplication test, independent of representation"""
    a = RationalFunction.coerce(a)
    b = RationalFunction.coerce(b)
    return (a.num * b.den - b.num * a.den).is_zero


def product(factors: Iterable[RationalFunction]) -> RationalFunction:
    result = RationalFunction.one()
    for factor in factors:
        result = result * factor
    return result
