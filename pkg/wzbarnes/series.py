"""
Hypergeometric series, their continuations and the summation identities
built from WZ pairs
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .barnes import IntegrandSpec, RecurrenceTerms, integrate, series_right
from .errors import Divergent, DomainError
from .exact import AffineForm, RationalFunction, as_rational
from .hyperterm import WZPair, numeric_eval
from .mpnum import Precision, SeriesSum, pochhammer, sum_terms, to_mp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PFQSpec:
    """sum_n prod (a)_n / prod (b)_n * z^n / n!"""

    upper: Tuple[Fraction, ...]
    lower: Tuple[Fraction, ...]
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(as_rational(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(as_rational(b) for b in self.lower))
        object.__setattr__(self, "z", as_rational(self.z))
        if any(b.denominator == 1 and b <= 0 for b in self.lower):
            raise DomainError("lower parameter is a non-positive integer")

    def integrand(self) -> IntegrandSpec:
        return IntegrandSpec(RationalFunction.one(), self.upper, self.lower, self.z)


def pfq(spec: PFQSpec, prec: Precision):
    """Direct summation for |z| < 1, the Barnes integral for z <= -1"""
    if spec.z >= 1:
        raise DomainError(f"z = {spec.z} lies on the branch cut [1, oo)")
    if abs(spec.z) < 1:
        return series_right(spec.integrand(), prec).value
    return integrate(spec.integrand(), prec).value


def pfq_combination(terms: Sequence[Tuple[object, PFQSpec]], prec: Precision):
    """sum of coefficient * pFq; coefficients are rationals"""
    ctx = prec.context()
    total = ctx.mpf(0)
    for coefficient, spec in terms:
        total += to_mp(ctx, as_rational(coefficient)) * pfq(spec, prec)
    return total


@dataclass(frozen=True)
class WeightedSeries:
    """
    sum_{n >= start} prod (a)_n / prod (b)_n * ratio^n * (-1)^n? * weight(n)
    """

    poch_num: Tuple[Fraction, ...]
    poch_den: Tuple[Fraction, ...]
    weight: RationalFunction
    ratio: Fraction
    sign: bool = False
    start_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "poch_num", tuple(sorted(as_rational(a) for a in self.poch_num)))
        object.__setattr__(self, "poch_den", tuple(sorted(as_rational(b) for b in self.poch_den)))
        object.__setattr__(self, "weight", RationalFunction.coerce(self.weight))
        object.__setattr__(self, "ratio", as_rational(self.ratio))


def weighted_series_sum(w: WeightedSeries, prec: Precision) -> SeriesSum:
    ctx = prec.context()
    start = w.start_index

    first = to_mp(ctx, w.ratio) ** start
    if w.sign and start % 2:
        first = -first
    for a in w.poch_num:
        first *= pochhammer(a, start, prec)
    for b in w.poch_den:
        first /= pochhammer(b, start, prec)

    step_ratio = to_mp(ctx, -w.ratio if w.sign else w.ratio)

    def ratio(offset: int):
        n = start + offset - 1
        value = step_ratio
        for a in w.poch_num:
            value *= to_mp(ctx, a + n)
        for b in w.poch_den:
            value /= to_mp(ctx, b + n)
        return value

    terms = RecurrenceTerms(first, ratio, lambda offset: to_mp(ctx, w.weight.evaluate(start + offset, 0)))
    return sum_terms(terms, prec)


def weighted_series_eval(w: WeightedSeries, prec: Precision):
    return weighted_series_sum(w, prec).value


@dataclass(frozen=True)
class IdentityReport:
    lhs: object
    rhs: object
    difference: object
    tolerance: object

    @property
    def passed(self) -> bool:
        return self.difference < self.tolerance


def _identity_report(lhs, rhs, prec: Precision) -> IdentityReport:
    return IdentityReport(lhs, rhs, abs(lhs - rhs), prec.pass_threshold())


def zeilberger_diagonal_check(pair: WZPair, j: int, prec: Precision) -> IdentityReport:
    """
    sum_{n>=j} (F(n+1,n) + G(n,n)) against sum_{n>=j} G(n,j)
    """
    diagonal = sum_terms(lambda n: numeric_eval(pair.F, n + 1, n, prec) + numeric_eval(pair.G, n, n, prec),
                         prec, start=j)
    column = sum_terms(lambda n: numeric_eval(pair.G, n, j, prec), prec, start=j)
    logger.debug("diagonal j=%d: %d and %d terms", j, diagonal.terms, column.terms)
    return _identity_report(diagonal.value, column.value, prec)


def example2_series(x) -> WeightedSeries:
    """sum_n (1+x)_n^3/((1/2+x)_n (1/3+x)_n (2/3+x)_n) (16/27)^n (11(n+x)-3)/(n+x)^3"""
    x = as_rational(x)
    shifted = RationalFunction.coerce(AffineForm(x, 1))
    weight = (shifted * 11 - 3) / shifted ** 3
    return WeightedSeries((1 + x,) * 3, (Fraction(1, 2) + x, Fraction(1, 3) + x, Fraction(2, 3) + x),
                          weight, Fraction(16, 27))


def example2_identity(x, prec: Precision) -> IdentityReport:
    """
    Left side by summation; right side
        6(3x-1)(3x-2)/(x^3(2x-1)) * 3F2(1/2, 3/2-x, 1; 1/2+x, 1/2+x | 1)
    """
    x = as_rational(x)
    if x in (0, Fraction(1, 2)):
        raise DomainError(f"x = {x} is a pole of the right side")
    if x <= Fraction(2, 3):
        raise DomainError(f"the right side diverges for x = {x} <= 2/3")
    ctx = prec.context()

    lhs = weighted_series_eval(example2_series(x), prec)
    factor = 6 * (3 * x - 1) * (3 * x - 2) / (x ** 3 * (2 * x - 1))
    half = Fraction(1, 2)
    hyper = ctx.hyper([to_mp(ctx, half), to_mp(ctx, Fraction(3, 2) - x), 1],
                      [to_mp(ctx, half + x), to_mp(ctx, half + x)], 1)
    rhs = to_mp(ctx, factor) * hyper
    return _identity_report(lhs, rhs, prec)


@dataclass(frozen=True)
class SumasReport:
    """Summed WZ identity: sum G(n,k) - sum G(n,k+1) = F(n0,k) - lim F(n,k)"""

    status: str
    lhs: Optional[object] = None
    rhs: Optional[object] = None
    limit: Optional[object] = None
    difference: Optional[object] = None
    message: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _limit_in_n(F, k: int, prec: Precision):
    """lim F(n,k) by sampling at N and 2N; None when it grows"""
    N = 10 * prec.digits
    near = numeric_eval(F, N, k, prec)
    far = numeric_eval(F, 2 * N, k, prec)
    if abs(far) > abs(near) and abs(far) > prec.tolerance():
        return None
    if abs(far - near) < prec.tolerance(5):
        return far
    return 2 * far - near


def sumas_wz_check(pair: WZPair, k: int, prec: Precision, n_start: int = 0) -> SumasReport:
    """Sum the WZ equation over n >= n_start at fixed k"""
    try:
        first = sum_terms(lambda n: numeric_eval(pair.G, n, k, prec), prec, start=n_start).value
        second = sum_terms(lambda n: numeric_eval(pair.G, n, k + 1, prec), prec, start=n_start).value
    except Divergent as exc:
        logger.info("series over G diverges at k=%d: %s", k, exc)
        return SumasReport("divergent", message=str(exc))

    limit = _limit_in_n(pair.F, k, prec)
    if limit is None:
        return SumasReport("divergent", message="F(n,k) grows with n; the limit is infinite")

    lhs = first - second
    rhs = numeric_eval(pair.F, n_start, k, prec) - limit
    difference = abs(lhs - rhs)
    status = "holds" if difference < prec.pass_threshold() else "fails"
    return SumasReport(status, lhs, rhs, limit, difference)
