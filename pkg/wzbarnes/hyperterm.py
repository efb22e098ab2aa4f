"""
Hypergeometric terms in Gamma-normal form

A HyperTerm is a product of Gamma factors Gamma(a + b*n + c*k)^e,
exponential factors p^(affine) over primes p, sign factors (-1)^n or
(-1)^k and a rational multiplier. Pochhammers enter as Gamma pairs.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, floor
from typing import Dict, Iterable, List, Optional, Tuple

from sympy import factorint

from .errors import (
    DomainError,
    GammaPole,
    MissingSignFactor,
    NotHypergeometric,
    NotProportional,
    RuleNotApplicable,
    UnsupportedIntegrand,
)
from .exact import VARIABLES, AffineForm, RationalFunction, as_rational, format_rational, product
from .mpnum import Precision, fraction_converter, to_mp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaFactor:
    arg: AffineForm
    exponent: int

    def __post_init__(self):
        if self.exponent == 0:
            raise ValueError("Gamma factor exponent must be nonzero")


@dataclass(frozen=True)
class ExpFactor:
    """base^exponent with a positive rational base"""

    base: Fraction
    exponent: AffineForm

    def __post_init__(self):
        object.__setattr__(self, "base", as_rational(self.base))
        if self.base <= 0:
            raise ValueError(f"exponential base must be positive, got {self.base}")


@dataclass(frozen=True)
class SignFactor:
    variable: str
    present: bool = True


def _canonical_parts(gammas, exps, signs, rat):
    """Merge, fold and sort factors into the canonical representation"""
    rat = RationalFunction.coerce(rat)

    merged: Dict[AffineForm, int] = Counter()
    for factor in gammas:
        merged[factor.arg] += factor.exponent

    kept = []
    folded = Fraction(1)
    for arg, exponent in merged.items():
        if not exponent:
            continue
        # Gamma(m) at a positive integer is (m-1)!
        if arg.is_constant and arg.const.denominator == 1 and arg.const > 0:
            folded *= Fraction(factorial(int(arg.const) - 1)) ** exponent
            continue
        kept.append(GammaFactor(arg, exponent))
    kept.sort(key=lambda g: (g.arg.sort_key(), g.exponent))

    by_prime: Dict[int, AffineForm] = defaultdict(AffineForm)
    for factor in exps:
        if factor.base == 1:
            continue
        for prime, power in factorint(factor.base.numerator).items():
            by_prime[prime] = by_prime[prime] + factor.exponent.scale(power)
        for prime, power in factorint(factor.base.denominator).items():
            by_prime[prime] = by_prime[prime] - factor.exponent.scale(power)

    kept_exps = []
    for prime in sorted(by_prime):
        exponent = by_prime[prime]
        whole = floor(exponent.const)
        if whole:
            folded *= Fraction(prime) ** whole
            exponent = exponent - whole
        if exponent != AffineForm():
            kept_exps.append(ExpFactor(Fraction(prime), exponent))

    parity = Counter()
    for sign in signs:
        if sign.present:
            parity[sign.variable] += 1
    kept_signs = tuple(SignFactor(var) for var in VARIABLES if parity[var] % 2)

    if folded != 1:
        rat = rat * folded
    return tuple(kept), tuple(kept_exps), kept_signs, rat


class HyperTerm:
    """Immutable hypergeometric term in n and k"""

    __slots__ = ("gammas", "exps", "signs", "rat")

    def __init__(self, gammas: Iterable[GammaFactor] = (), exps: Iterable[ExpFactor] = (),
                 signs: Iterable[SignFactor] = (), rat=None):
        rat = RationalFunction.one() if rat is None else rat
        self.gammas, self.exps, self.signs, self.rat = _canonical_parts(list(gammas), list(exps), list(signs), rat)

    @classmethod
    def one(cls) -> "HyperTerm":
        return cls()

    @classmethod
    def zero(cls) -> "HyperTerm":
        return cls(rat=RationalFunction.zero())

    @classmethod
    def rational(cls, rf) -> "HyperTerm":
        return cls(rat=RationalFunction.coerce(rf))

    @property
    def is_zero(self) -> bool:
        return self.rat.is_zero

    @property
    def const_tag(self) -> Tuple:
        """Factors that depend on neither variable"""
        return (tuple(g for g in self.gammas if g.arg.is_constant),
                tuple(e for e in self.exps if e.exponent.is_constant))

    def uses(self, var: str) -> bool:
        return (any(g.arg.uses(var) for g in self.gammas)
                or any(e.exponent.uses(var) for e in self.exps)
                or any(s.variable == var for s in self.signs)
                or self.rat.uses(var))

    def __mul__(self, other) -> "HyperTerm":
        if not isinstance(other, HyperTerm):
            other = HyperTerm.rational(other)
        return HyperTerm(self.gammas + other.gammas, self.exps + other.exps,
                         self.signs + other.signs, self.rat * other.rat)

    __rmul__ = __mul__

    def inverse(self) -> "HyperTerm":
        return HyperTerm((GammaFactor(g.arg, -g.exponent) for g in self.gammas),
                         (ExpFactor(e.base, -e.exponent) for e in self.exps),
                         self.signs, 1 / self.rat)

    def __truediv__(self, other) -> "HyperTerm":
        if not isinstance(other, HyperTerm):
            other = HyperTerm.rational(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "HyperTerm":
        return HyperTerm.rational(other) * self.inverse()

    def __neg__(self) -> "HyperTerm":
        return self * -1

    def __pow__(self, exponent: int) -> "HyperTerm":
        base = self if exponent >= 0 else self.inverse()
        result = HyperTerm.one()
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def map_forms(self, transform) -> "HyperTerm":
        """Apply an AffineForm -> AffineForm substitution to every argument"""
        return HyperTerm((GammaFactor(transform(g.arg), g.exponent) for g in self.gammas),
                         (ExpFactor(e.base, transform(e.exponent)) for e in self.exps),
                         self.signs, self.rat)

    def _key(self):
        return (self.gammas, self.exps, self.signs, self.rat.num, self.rat.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HyperTerm):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"HyperTerm({format_term(self)})"


@dataclass(frozen=True)
class WZPair:
    F: HyperTerm
    G: HyperTerm
    certificate: Optional[RationalFunction] = None

    def __post_init__(self):
        if self.certificate is not None and self.certificate.is_zero:
            raise ValueError("certificate must be nonzero")


@dataclass(frozen=True)
class VerificationReport:
    wz_holds: bool
    certificate_used: RationalFunction
    residual: RationalFunction
    notes: str = ""


# Constructors

def gamma_of(arg: AffineForm, exponent: int = 1) -> HyperTerm:
    return HyperTerm([GammaFactor(arg, exponent)])


def pochhammer(base, var: str, power: int = 1) -> HyperTerm:
    """(base)_var = Gamma(base + var)/Gamma(base)"""
    base = base if isinstance(base, AffineForm) else AffineForm(as_rational(base))
    return HyperTerm([GammaFactor(base + AffineForm.of(var), power), GammaFactor(base, -power)])


def factorial_of(arg: AffineForm) -> HyperTerm:
    """arg! as Gamma(arg + 1)"""
    return gamma_of(arg + 1)


def sign(var: str) -> HyperTerm:
    return HyperTerm(signs=[SignFactor(var)])


def power(base, exponent: AffineForm) -> HyperTerm:
    """base^exponent; a negative base needs integer variable coefficients"""
    base = as_rational(base)
    if base == 0:
        raise ValueError("zero base in exponential factor")
    if base > 0:
        return HyperTerm(exps=[ExpFactor(base, exponent)])
    if any(c.denominator != 1 for c in (exponent.const, exponent.coeff_n, exponent.coeff_k)):
        raise ValueError(f"negative base {base} needs an integer exponent, got {exponent}")
    signs = [SignFactor(var) for var in VARIABLES if exponent.coeff(var) % 2]
    rat = -1 if exponent.const % 2 else 1
    return HyperTerm(exps=[ExpFactor(-base, exponent)], signs=signs, rat=rat)


# Gamma-quotient reduction

def _reduce_gammas(factors: Iterable[Tuple[AffineForm, int]], error) -> RationalFunction:
    """
    Turn a formal product of Gamma powers into a rational function

    Arguments are grouped by (coeff_n, coeff_k, const mod 1); within a
    class Gamma(B + j) = Gamma(B)*(B)(B+1)...(B+j-1), so each class must
    carry total exponent zero.
    """
    classes: Dict[Tuple, List[Tuple[AffineForm, int]]] = defaultdict(list)
    for arg, exponent in factors:
        if exponent:
            key = (arg.coeff_n, arg.coeff_k, arg.const - floor(arg.const))
            classes[key].append((arg, exponent))

    result = RationalFunction.one()
    for key, members in classes.items():
        if sum(e for _, e in members) != 0:
            raise error(f"unmatched Gamma factors with argument class {members[0][0]}")
        lowest = min(arg.const for arg, _ in members)
        for arg, exponent in members:
            steps = int(arg.const - lowest)
            if not steps:
                continue
            base = AffineForm(lowest, arg.coeff_n, arg.coeff_k)
            rising = product(RationalFunction.coerce(base + j) for j in range(steps))
            result = result * rising ** exponent
    return result


def shift_quotient(t: HyperTerm, var: str) -> RationalFunction:
    """t(var + 1)/t(var) as an exact rational function"""
    if t.is_zero:
        raise NotHypergeometric("shift quotient of the zero term")
    factors = []
    for g in t.gammas:
        factors.append((g.arg.shift(var, 1), g.exponent))
        factors.append((g.arg, -g.exponent))
    result = _reduce_gammas(factors, NotHypergeometric)

    ratio = Fraction(1)
    for e in t.exps:
        step = e.exponent.coeff(var)
        if step.denominator != 1:
            raise NotHypergeometric(f"{e.base}^{step} is irrational")
        ratio *= e.base ** int(step)
    if any(s.variable == var for s in t.signs):
        ratio = -ratio

    return result * ratio * (t.rat.shift(var, 1) / t.rat)


def term_ratio(a: HyperTerm, b: HyperTerm) -> RationalFunction:
    """a/b, which must be a rational function"""
    if b.is_zero:
        raise NotProportional("ratio against the zero term")
    if a.is_zero:
        return RationalFunction.zero()
    quotient = a / b
    if quotient.exps:
        raise NotProportional("exponential factors differ")
    if quotient.signs:
        raise NotProportional("sign factors differ")
    factors = [(g.arg, g.exponent) for g in quotient.gammas]
    return _reduce_gammas(factors, NotProportional) * quotient.rat


def wz_verify(pair: WZPair) -> VerificationReport:
    """
    Check F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)

    Divided through by F the identity reads (rho - 1) - (C' sigma - C) = 0
    with rho, sigma the n and k shift quotients of F, C = G/F and C' its
    k-shift.
    """
    F, G = pair.F, pair.G
    if F.is_zero:
        if G.is_zero:
            zero = RationalFunction.zero()
            return VerificationReport(True, zero, zero, "zero pair")
        residual = shift_quotient(G, "k") - 1
        return VerificationReport(residual.is_zero, RationalFunction.zero(), residual, "F is zero")

    computed = term_ratio(G, F)
    notes = ""
    certificate = computed
    if pair.certificate is not None:
        certificate = pair.certificate
        if certificate != computed:
            notes = f"stored certificate differs from G/F = {computed.to_text()}"

    rho = shift_quotient(F, "n")
    sigma = shift_quotient(F, "k")
    residual = (rho - 1) - (certificate.shift("k", 1) * sigma - certificate)
    holds = residual.is_zero and not notes
    logger.debug("wz_verify: residual %s", residual.to_text())
    return VerificationReport(holds, certificate, residual, notes)


# Substitutions

def substitute(t: HyperTerm, var: str, amount) -> HyperTerm:
    """Replace var by var + amount"""
    amount = as_rational(amount)
    if not amount:
        return t
    rat = t.rat.shift(var, amount)
    if any(s.variable == var for s in t.signs):
        if amount.denominator != 1:
            raise DomainError(f"(-1)^{var} shifted by non-integer {amount}")
        if amount.numerator % 2:
            rat = -rat
    shifted = t.map_forms(lambda form: form.shift(var, amount))
    return HyperTerm(shifted.gammas, shifted.exps, shifted.signs, rat)


def specialize(t: HyperTerm, var: str, value) -> HyperTerm:
    """Fix var to a rational value"""
    value = as_rational(value)
    rat = t.rat.substitute({var: AffineForm(value)})
    signs = [s for s in t.signs if s.variable != var]
    if len(signs) != len(t.signs):
        if value.denominator != 1:
            raise DomainError(f"(-1)^{var} at non-integer {value}")
        if value.numerator % 2:
            rat = -rat
    fixed = t.map_forms(lambda form: form.specialize(var, value))
    return HyperTerm(fixed.gammas, fixed.exps, signs, rat)


def negate_variables(t: HyperTerm) -> HyperTerm:
    """n -> -n and k -> -k; (-1)^-n equals (-1)^n"""
    mirror = {"n": AffineForm.of("n", -1), "k": AffineForm.of("k", -1)}
    negated = t.map_forms(lambda form: form.substitute(mirror))
    return HyperTerm(negated.gammas, negated.exps, negated.signs, t.rat.substitute(mirror))


def _apply_dual_rules(factors: Counter, var: str, only_pure: bool):
    """
    Rewrite Gamma(A - m*var)^e for positive integer m

    Gamma(1 - m*var) -> (m*var)(-1)^(m*var)/Gamma(1 + m*var) and otherwise
    Gamma(A - m*var) -> (-1)^(m*var) Gamma(A) Gamma(1-A)/Gamma(1 - A + m*var).
    """
    out = Counter()
    signs = []
    rat = RationalFunction.one()
    other = "k" if var == "n" else "n"

    for arg, exponent in factors.items():
        coeff = arg.coeff(var)
        if coeff >= 0 or (only_pure and arg.uses(other)):
            out[arg] += exponent
            continue
        m = -coeff
        if m.denominator != 1:
            raise RuleNotApplicable(f"Gamma({arg}) has non-integer coefficient of {var}")
        A = arg.without(var)
        step = AffineForm.of(var, m)
        if int(m) * exponent % 2:
            signs.append(SignFactor(var))
        if A.is_constant and A.const == 1:
            rat = rat * RationalFunction.coerce(step) ** exponent
            out[A + step] -= exponent
        elif A.is_constant and A.const.denominator == 1:
            raise RuleNotApplicable(f"Gamma({arg}) has integer base {A.const} other than 1")
        else:
            out[A] += exponent
            out[1 - A] += exponent
            out[1 - A + step] -= exponent
    return out, signs, rat


def dual(t: HyperTerm) -> HyperTerm:
    """
    Dual term: negate both variables, then rewrite every Pochhammer with
    a negative index, first those in n, then the pure-k ones
    """
    negated = negate_variables(t)
    factors = Counter({g.arg: g.exponent for g in negated.gammas})
    signs = list(negated.signs)
    rat = negated.rat

    for var, only_pure in (("n", False), ("k", True)):
        factors, new_signs, new_rat = _apply_dual_rules(factors, var, only_pure)
        signs.extend(new_signs)
        rat = rat * new_rat
        merged = HyperTerm((GammaFactor(a, e) for a, e in factors.items() if e), (), signs, rat)
        factors = Counter({g.arg: g.exponent for g in merged.gammas})
        signs, rat = list(merged.signs), merged.rat

    gammas = [GammaFactor(a, e) for a, e in factors.items() if e]
    return HyperTerm(gammas, negated.exps, signs, rat)


# Pochhammer extraction and barnesification

@dataclass(frozen=True)
class PochhammerForm:
    """t = prod (a)_v / prod (b)_v * ratio^v * (-1)^v? * weight * rest"""

    upper: Tuple[AffineForm, ...]
    lower: Tuple[AffineForm, ...]
    ratio: Fraction
    sign: bool
    weight: RationalFunction
    rest: HyperTerm = field(default_factory=HyperTerm.one)


def pochhammer_form(t: HyperTerm, var: str) -> PochhammerForm:
    """Split t into Pochhammers in var and a var-free remainder"""
    upper, lower, rest_gammas = [], [], []
    for g in t.gammas:
        coeff = g.arg.coeff(var)
        if not coeff:
            rest_gammas.append(g)
            continue
        if coeff != 1:
            raise UnsupportedIntegrand(f"Gamma({g.arg}) does not advance by one per step of {var}")
        base = g.arg.without(var)
        (upper if g.exponent > 0 else lower).extend([base] * abs(g.exponent))
        rest_gammas.append(GammaFactor(base, g.exponent))

    ratio = Fraction(1)
    rest_exps = []
    for e in t.exps:
        step = e.exponent.coeff(var)
        if step.denominator != 1:
            raise UnsupportedIntegrand(f"{e.base}^({step}*{var}) has an irrational ratio")
        ratio *= e.base ** int(step)
        if not e.exponent.without(var) == AffineForm():
            rest_exps.append(ExpFactor(e.base, e.exponent.without(var)))

    has_sign = any(s.variable == var for s in t.signs)
    rest_signs = [s for s in t.signs if s.variable != var]
    rest = HyperTerm(rest_gammas, rest_exps, rest_signs)
    if rest.rat != 1:
        weight = t.rat * rest.rat
        rest = HyperTerm(rest.gammas, rest.exps, rest.signs)
    else:
        weight = t.rat
    return PochhammerForm(tuple(sorted(upper, key=AffineForm.sort_key)),
                          tuple(sorted(lower, key=AffineForm.sort_key)),
                          ratio, has_sign, weight, rest)


def barnesify(t: HyperTerm, series_var: str = "n"):
    """
    Replace (-1)^n z^n / n! in a series term by Gamma(-s)(z)^s

    The result integrates s along a vertical line; the spectator variable
    k plays the role of the parameter t.
    """
    from .barnes import IntegrandSpec

    if series_var != "n":
        raise ValueError("barnesify expands in n")
    form = pochhammer_form(t, "n")
    if not form.sign:
        raise MissingSignFactor("series term has no (-1)^n factor")
    lower = list(form.lower)
    one = AffineForm(1)
    if one not in lower:
        raise UnsupportedIntegrand("series term has no 1/n! factor")
    lower.remove(one)
    scale = None if form.rest == HyperTerm.one() else form.rest
    return IntegrandSpec(form.weight, form.upper, tuple(lower), -form.ratio, scale=scale)


# Numerics

def numeric_eval(t: HyperTerm, n, k, prec: Precision):
    """Value of t at (n, k); arguments may be exact rationals or mpmath numbers"""
    ctx = prec.context()
    exact = all(isinstance(v, (int, Fraction)) for v in (n, k))
    if exact:
        n, k = as_rational(n), as_rational(k)

    values = []
    vanishes = False
    for g in t.gammas:
        if exact:
            v = g.arg.evaluate(n, k)
            is_pole = v.denominator == 1 and v <= 0
            v = to_mp(ctx, v)
        else:
            v = g.arg.evaluate_numeric(n, k, fraction_converter(ctx))
            is_pole = ctx.isnpint(v)
        if is_pole:
            if g.exponent > 0:
                raise GammaPole(f"Gamma({g.arg}) at a non-positive integer")
            vanishes = True
        values.append((v, g.exponent))
    if vanishes or t.is_zero:
        return ctx.mpf(0)

    result = ctx.mpf(1)
    for v, exponent in values:
        result *= ctx.gamma(v) ** exponent

    for e in t.exps:
        if exact:
            x = e.exponent.evaluate(n, k)
            if x.denominator == 1:
                result *= to_mp(ctx, e.base ** int(x))
                continue
            x = to_mp(ctx, x)
        else:
            x = e.exponent.evaluate_numeric(n, k, fraction_converter(ctx))
        result *= ctx.power(to_mp(ctx, e.base), x)

    for s in t.signs:
        v = n if s.variable == "n" else k
        if exact and v.denominator == 1:
            result *= -1 if v.numerator % 2 else 1
        else:
            result *= ctx.expjpi(to_mp(ctx, v))

    if exact:
        result *= to_mp(ctx, t.rat.evaluate(n, k))
    else:
        result *= t.rat.evaluate_numeric(n, k, fraction_converter(ctx))
    return result


# Text form

def _format_factor(text: str, exponent: int) -> str:
    return text if exponent == 1 else f"{text}^{exponent}"


def format_term(t: HyperTerm, names: Tuple[str, str] = VARIABLES) -> str:
    """Render in term-file syntax; parsing the text rebuilds an equal term"""
    pieces = []
    for g in t.gammas:
        pieces.append(_format_factor(f"gamma({g.arg.to_text(names)})", g.exponent))
    for e in t.exps:
        pieces.append(f"pow({format_rational(e.base)}, {e.exponent.to_text(names)})")
    for s in t.signs:
        pieces.append(f"sign({names[VARIABLES.index(s.variable)]})")
    if t.rat != 1 or not pieces:
        pieces.append(f"rf({t.rat.num.to_text(names)}, {t.rat.den.to_text(names)})")
    return " * ".join(pieces)
