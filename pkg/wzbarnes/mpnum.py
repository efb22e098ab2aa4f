"""
Arbitrary-precision numeric substrate

Each Precision owns a private mpmath context (never the global mp),
cached per thread, so concurrent workers at different precisions never
share mutable state.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Callable, NamedTuple

from mpmath.ctx_mp import MPContext

from .errors import Divergent, GammaPole, NotConverged

logger = logging.getLogger(__name__)

CONSTANT_NAMES = ("pi", "sqrt2", "sqrt3", "gamma_3_4")
MIN_DIGITS = 10
MIN_GUARD = 10

_local = threading.local()


@dataclass(frozen=True)
class Precision:
    """Target digits plus guard digits used for internal work"""

    digits: int = 30
    guard: int = 20

    def __post_init__(self):
        if self.digits < MIN_DIGITS or self.guard < MIN_GUARD:
            raise ValueError(f"precision needs digits >= {MIN_DIGITS} and guard >= {MIN_GUARD}, "
                             f"got digits={self.digits} guard={self.guard}")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    def context(self) -> MPContext:
        contexts = getattr(_local, "contexts", None)
        if contexts is None:
            contexts = _local.contexts = {}
        ctx = contexts.get(self.working_digits)
        if ctx is None:
            ctx = MPContext()
            ctx.dps = self.working_digits
            contexts[self.working_digits] = ctx
        return ctx

    def tolerance(self, extra: int = 0):
        """10^-(digits + extra) in this precision's context"""
        ctx = self.context()
        return ctx.mpf(10) ** (-(self.digits + extra))

    def pass_threshold(self):
        """Agreement needed for a numeric check to pass: 10^-(digits - 5)"""
        return self.tolerance(-5)


def to_mp(ctx: MPContext, value):
    """Convert Fraction, int, complex or another context's mpmath number"""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.convert(value)


def fraction_converter(ctx: MPContext) -> Callable[[Fraction], object]:
    return lambda q: ctx.mpf(q.numerator) / q.denominator


def _check_pole(ctx: MPContext, z, what: str):
    if ctx.isnpint(z):
        raise GammaPole(f"{what} has a pole at {ctx.nstr(z, 10)}")


def log_gamma(z, prec: Precision):
    """Principal branch log Gamma(z)"""
    ctx = prec.context()
    z = to_mp(ctx, z)
    _check_pole(ctx, z, "log_gamma")
    return ctx.loggamma(z)


def gamma(z, prec: Precision):
    ctx = prec.context()
    z = to_mp(ctx, z)
    _check_pole(ctx, z, "gamma")
    return ctx.gamma(z)


def rgamma(z, prec: Precision):
    """1/Gamma(z), zero at the poles"""
    ctx = prec.context()
    return ctx.rgamma(to_mp(ctx, z))


def pochhammer(x, s, prec: Precision):
    """(x)_s = Gamma(x+s)/Gamma(x)"""
    ctx = prec.context()
    if isinstance(s, int) and s >= 0:
        return ctx.rf(to_mp(ctx, x), s)
    x = to_mp(ctx, x)
    s = to_mp(ctx, s)
    _check_pole(ctx, x, "pochhammer base")
    _check_pole(ctx, x + s, "pochhammer")
    return ctx.exp(ctx.loggamma(x + s) - ctx.loggamma(x))


def constants(name: str, prec: Precision):
    """pi, sqrt2, sqrt3 or gamma_3_4 to the working precision"""
    ctx = prec.context()
    if name == "pi":
        return +ctx.pi
    if name == "sqrt2":
        return ctx.sqrt(2)
    if name == "sqrt3":
        return ctx.sqrt(3)
    if name == "gamma_3_4":
        return ctx.gamma(ctx.mpf(3) / 4)
    raise KeyError(f"Unknown constant '{name}', expected one of {CONSTANT_NAMES}")


def nstr(value, digits: int) -> str:
    """Decimal text of an mpmath or exact number"""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    ctx = MPContext()
    ctx.dps = digits + 5
    return ctx.nstr(ctx.convert(value), digits)


class SeriesSum(NamedTuple):
    value: object
    terms: int
    tail_bound: object


def sum_terms(term: Callable[[int], object], prec: Precision, start: int = 0,
              max_terms: int = 100_000, divergence_after: int = 100,
              divergence_run: int = 50) -> SeriesSum:
    """
    Sum term(start) + term(start+1) + ... until the tail is negligible

    Stops once |t|*r/(1-r) < 10^-(digits+5) holds on two consecutive
    terms, r being the latest term ratio. Ratios >= 1 for divergence_run
    consecutive terms past n = divergence_after classify the series as
    divergent.
    """
    ctx = prec.context()
    tail_tol = prec.tolerance(5)
    total = ctx.mpf(0)
    previous = None
    quiet = 0
    zeros = 0
    growing = 0
    bound = ctx.inf

    for n in count(start):
        if n - start >= max_terms:
            raise NotConverged(f"series did not converge within {max_terms} terms")

        t = term(n)
        total += t
        size = abs(t)

        if size == 0:
            zeros += 1
            if zeros >= 10:
                return SeriesSum(total, n - start + 1, ctx.mpf(0))
            previous = None
            continue
        zeros = 0

        if previous is not None:
            ratio = size / previous
            if ratio >= 1:
                quiet = 0
                if n > divergence_after:
                    growing += 1
                    if growing >= divergence_run:
                        raise Divergent(f"term ratio stayed >= 1 for {divergence_run} terms up to n={n}")
            else:
                growing = 0
                bound = size * ratio / (1 - ratio)
                if bound < tail_tol:
                    quiet += 1
                    if quiet >= 2:
                        logger.debug("series converged after %d terms", n - start + 1)
                        return SeriesSum(total, n - start + 1, bound)
                else:
                    quiet = 0
        previous = size
