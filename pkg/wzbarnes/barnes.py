"""
Barnes-type contour integrals

An integrand is
    prefactor(s, t) * prod (a_i)_s / prod (b_j)_s * Gamma(-s) * (-z)^s * scale(t)
integrated over s = c + iy. The value is computed three ways: by the
trapezoid rule on the vertical line, by the convergent right-hand residue
series when |z| < 1, and by the left-hand residue families when |z| > 1.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple

from .closedform import Expr
from .errors import (
    CollidingPoles,
    DomainError,
    NoStraightSeparatingLine,
    NotConverged,
    UnsupportedIntegrand,
)
from .exact import AffineForm, BiPoly, RationalFunction, as_rational, format_rational
from .hyperterm import HyperTerm, format_term, numeric_eval, pochhammer, specialize
from .mpnum import Precision, SeriesSum, fraction_converter, sum_terms, to_mp

logger = logging.getLogger(__name__)

INITIAL_STEP = Fraction(1, 8)
TAIL_NODES = 10
MAX_GROWTH = 20


@dataclass(frozen=True)
class IntegrandSpec:
    """
    Integrand data; n plays the role of s and k the role of t

    Bases and the prefactor may depend on t, which must be fixed with
    at() before numeric work.
    """

    prefactor: RationalFunction
    poch_num: Tuple[AffineForm, ...]
    poch_den: Tuple[AffineForm, ...]
    z: Fraction
    t_value: Optional[Fraction] = None
    scale: Optional[HyperTerm] = None

    def __post_init__(self):
        object.__setattr__(self, "z", as_rational(self.z))
        object.__setattr__(self, "poch_num", tuple(sorted((_as_form(a) for a in self.poch_num), key=AffineForm.sort_key)))
        object.__setattr__(self, "poch_den", tuple(sorted((_as_form(b) for b in self.poch_den), key=AffineForm.sort_key)))
        object.__setattr__(self, "prefactor", RationalFunction.coerce(self.prefactor))
        if self.t_value is not None:
            object.__setattr__(self, "t_value", as_rational(self.t_value))

    def at(self, t) -> "IntegrandSpec":
        """The t-free integrand at a fixed t; equal upper and lower bases cancel"""
        t = as_rational(t)
        upper = [a.specialize("k", t) for a in self.poch_num]
        lower = []
        for b in (b.specialize("k", t) for b in self.poch_den):
            if b in upper:
                upper.remove(b)
            else:
                lower.append(b)
        prefactor = self.prefactor.substitute({"k": AffineForm(t)})
        scale = None if self.scale is None else specialize(self.scale, "k", t)
        return IntegrandSpec(prefactor, tuple(upper), tuple(lower), self.z, scale=scale)

    def uses_t(self) -> bool:
        return (any(f.uses("k") for f in self.poch_num + self.poch_den)
                or self.prefactor.uses("k")
                or (self.scale is not None and self.scale.uses("k")))

    def _t(self) -> Fraction:
        if self.t_value is None:
            if self.uses_t():
                raise DomainError("integrand depends on t but no value was given")
            return Fraction(0)
        return self.t_value

    def _resolve(self, form: AffineForm) -> Fraction:
        if form.uses("n"):
            raise UnsupportedIntegrand(f"Pochhammer base {form} depends on s")
        return form.evaluate(0, self._t())

    def upper(self) -> List[Fraction]:
        return [self._resolve(a) for a in self.poch_num]

    def lower(self) -> List[Fraction]:
        return [self._resolve(b) for b in self.poch_den]

    def prefactor_in_s(self) -> RationalFunction:
        if not self.prefactor.uses("k"):
            return self.prefactor
        return self.prefactor.substitute({"k": AffineForm(self._t())})

    def scale_value(self, prec: Precision):
        ctx = prec.context()
        if self.scale is None:
            return ctx.mpf(1)
        if self.scale.uses("n"):
            raise UnsupportedIntegrand("scale factor depends on s")
        return numeric_eval(self.scale, 0, self._t(), prec)

    def as_term(self) -> HyperTerm:
        """The integrand without Gamma(-s)(-z)^s, as a term in (s, t)"""
        term = HyperTerm.rational(self.prefactor)
        for a in self.poch_num:
            term = term * pochhammer(a, "n")
        for b in self.poch_den:
            term = term / pochhammer(b, "n")
        if self.scale is not None:
            term = term * self.scale
        return term

    def describe(self) -> str:
        body = format_term(self.as_term(), ("s", "t"))
        t = "" if self.t_value is None else f" at t={format_rational(self.t_value)}"
        return f"{body} * Gamma(-s) * (-z)^s, z={format_rational(self.z)}{t}"


def _as_form(value) -> AffineForm:
    return value if isinstance(value, AffineForm) else AffineForm(as_rational(value))


@dataclass(frozen=True)
class ContourSpec:
    re_offset: Fraction
    truncation_T: Fraction
    step_h: Fraction


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    nodes_used: int
    converged: bool
    contour: ContourSpec


def _prefactor_poles(prefactor: RationalFunction) -> List[Fraction]:
    """Rational roots in s of the prefactor denominator"""
    den = prefactor.den
    if den.constant_value() is not None:
        return []
    roots = []
    _, factors = den.poly.factor_list()
    for factor, _ in factors:
        terms = dict(BiPoly(factor.set_domain(den.poly.domain)).terms())
        if factor.total_degree() != 1 or (0, 1) in terms:
            raise UnsupportedIntegrand(f"prefactor denominator {den.to_text(('s', 't'))} is not a product of linear factors in s")
        roots.append(-terms.get((0, 0), Fraction(0)) / terms[(1, 0)])
    return roots


def choose_contour(integrand: IntegrandSpec, prec: Precision) -> ContourSpec:
    """
    Vertical line Re s = -a_min/2 between the poles of Gamma(-s) at
    s = 0, 1, ... and the left poles at s = -a - m
    """
    left = list(integrand.upper())
    left.extend(-root for root in _prefactor_poles(integrand.prefactor_in_s()))
    if not left:
        return ContourSpec(Fraction(-1, 2), _initial_truncation(prec), INITIAL_STEP)
    a_min = min(left)
    if a_min <= 0:
        raise NoStraightSeparatingLine(f"left pole family starts at s = {-a_min}, not left of 0")
    return ContourSpec(-a_min / 2, _initial_truncation(prec), INITIAL_STEP)


def _initial_truncation(prec: Precision) -> Fraction:
    return Fraction(max(30, ceil(Fraction(6, 5) * prec.digits)))


def _check_domain(integrand: IntegrandSpec, upper, lower, ctx):
    z = integrand.z
    if z == 0:
        raise DomainError("z = 0")
    if z >= 1:
        raise DomainError(f"z = {z} lies on the branch cut [1, oo)")
    arg = 0 if z < 0 else ctx.pi
    theta = ctx.pi * (len(upper) - len(lower) + 1) / 2 - arg
    if theta <= 0:
        raise DomainError(f"integrand does not decay on the contour (p={len(upper)}, q={len(lower)}, z={z})")
    if any(b.denominator == 1 and b <= 0 for b in lower):
        raise UnsupportedIntegrand("denominator Pochhammer with non-positive integer base")


class _LineIntegrand:
    """Integrand on s = c + iy, evaluated in log space"""

    def __init__(self, integrand: IntegrandSpec, c: Fraction, prec: Precision):
        ctx = self.ctx = prec.context()
        self.upper = [to_mp(ctx, a) for a in integrand.upper()]
        self.lower = [to_mp(ctx, b) for b in integrand.lower()]
        self.prefactor = integrand.prefactor_in_s()
        self.convert = fraction_converter(ctx)
        self.c = to_mp(ctx, c)
        z = to_mp(ctx, integrand.z)
        self.log_mz = ctx.log(-z) if integrand.z < 0 else ctx.log(ctx.mpc(-z))
        self.log_const = sum((-ctx.loggamma(a) for a in self.upper), ctx.mpf(0))
        self.log_const += sum((ctx.loggamma(b) for b in self.lower), ctx.mpf(0))

    def __call__(self, y: Fraction):
        ctx = self.ctx
        s = ctx.mpc(self.c, to_mp(ctx, y))
        log_value = self.log_const + ctx.loggamma(-s) + s * self.log_mz
        for a in self.upper:
            log_value += ctx.loggamma(a + s)
        for b in self.lower:
            if ctx.isnpint(b + s):
                return ctx.mpc(0)
            log_value -= ctx.loggamma(b + s)
        return ctx.exp(log_value) * self.prefactor.evaluate_numeric(s, 0, self.convert)


def eval_integral(integrand: IntegrandSpec, contour: ContourSpec, prec: Precision,
                  max_levels: int = 12) -> QuadratureResult:
    """
    Trapezoid rule on the line with step halving

    Nodes are cached by position so every halving only evaluates the new
    midpoints. The window grows by half whenever the last nodes are not
    decreasing below 10^-(digits+5).
    """
    ctx = prec.context()
    upper, lower = integrand.upper(), integrand.lower()
    _check_domain(integrand, upper, lower, ctx)

    f = _LineIntegrand(integrand, contour.re_offset, prec)
    symmetric = integrand.z < 0
    tol = prec.tolerance()
    tail_tol = prec.tolerance(5)
    cache: Dict[Fraction, object] = {}

    def value(y: Fraction):
        if y not in cache:
            cache[y] = f(y)
        return cache[y]

    def tail_ok(h: Fraction, T: Fraction) -> bool:
        last = floor(T / h)
        sides = (1,) if symmetric else (1, -1)
        for side in sides:
            sizes = [abs(value(side * j * h)) for j in range(last - TAIL_NODES + 1, last + 1)]
            if any(b > a for a, b in zip(sizes, sizes[1:])) or sizes[-1] >= tail_tol:
                return False
        return True

    def estimate(h: Fraction, T: Fraction):
        last = floor(T / h)
        if symmetric:
            total = ctx.re(value(Fraction(0)))
            for j in range(1, last + 1):
                total += 2 * ctx.re(value(j * h))
        else:
            total = ctx.mpc(0)
            for j in range(-last, last + 1):
                total += value(j * h)
        return total * to_mp(ctx, h) / (2 * ctx.pi)

    h, T = contour.step_h, contour.truncation_T
    previous = None
    error = ctx.inf
    for level in range(max_levels):
        for _ in range(MAX_GROWTH):
            if tail_ok(h, T):
                break
            T = T * Fraction(3, 2)
        else:
            raise NotConverged(f"integrand tail still significant at T={float(T):.1f}")

        current = estimate(h, T)
        logger.debug("level %d: h=%s T=%s nodes=%d", level, h, T, len(cache))
        if previous is not None:
            error = abs(current - previous)
            if error < tol:
                scale = integrand.scale_value(prec)
                return QuadratureResult(current * scale, error * abs(scale), len(cache), True,
                                        ContourSpec(contour.re_offset, T, h))
        previous = current
        h = h / 2

    raise NotConverged(f"trapezoid rule did not settle within {max_levels} halvings (last change {ctx.nstr(error, 5)})")


class RecurrenceTerms:
    """Sequential series terms u_n * weight(n) with u advanced by a ratio"""

    def __init__(self, first, ratio, weight):
        self.u = first
        self.ratio = ratio
        self.weight = weight
        self.index = 0

    def __call__(self, n: int):
        while self.index < n:
            self.u = self.u * self.ratio(self.index + 1)
            self.index += 1
        return self.u * self.weight(n)


def series_right(integrand: IntegrandSpec, prec: Precision) -> SeriesSum:
    """Sum of the residues at s = 0, 1, 2, ...; needs |z| < 1"""
    ctx = prec.context()
    z = integrand.z
    if abs(z) >= 1:
        raise DomainError(f"right residue series needs |z| < 1, got {z}")
    upper, lower = integrand.upper(), integrand.lower()
    prefactor = integrand.prefactor_in_s()
    zc = to_mp(ctx, z)

    def ratio(n: int):
        # u_n / u_{n-1}
        value = zc / n
        for a in upper:
            value *= to_mp(ctx, a + n - 1)
        for b in lower:
            value /= to_mp(ctx, b + n - 1)
        return value

    terms = RecurrenceTerms(ctx.mpf(1), ratio, lambda n: to_mp(ctx, prefactor.evaluate(n, 0)))
    result = sum_terms(terms, prec)
    scale = integrand.scale_value(prec)
    return SeriesSum(result.value * scale, result.terms, result.tail_bound)


@dataclass(frozen=True)
class ResidueFamily:
    pole_base: Fraction
    prefactor: object
    series_value: object
    contribution: object


@dataclass(frozen=True)
class ResidueExpansion:
    families: Tuple[ResidueFamily, ...]
    total: object


def residue_series_left(integrand: IntegrandSpec, prec: Precision) -> ResidueExpansion:
    """
    Sum of the residues at s = -a_j - m, one family per numerator base

    Family j contributes
        prefactor_j = prod_{i!=j} Gamma(a_i-a_j)/Gamma(a_i) * prod_b Gamma(b)/Gamma(b-a_j) * (-z)^-a_j
    times a hypergeometric series in 1/z.
    """
    ctx = prec.context()
    z = integrand.z
    if z >= -1:
        raise DomainError(f"left residue series needs z < -1, got {z}")
    prefactor = integrand.prefactor_in_s()
    if prefactor.den.constant_value() is None:
        raise UnsupportedIntegrand("prefactor has poles in s")
    upper, lower = integrand.upper(), integrand.lower()

    for i, a in enumerate(upper):
        for b in upper[i + 1:]:
            if (a - b).denominator == 1:
                raise CollidingPoles(f"pole families at -{a} and -{b} overlap")

    mz = to_mp(ctx, -z)
    scale = integrand.scale_value(prec)
    families = []
    total = ctx.mpf(0)
    for j, aj in enumerate(upper):
        others = upper[:j] + upper[j + 1:]
        lead = ctx.power(mz, to_mp(ctx, -aj))
        for a in others:
            lead *= ctx.gamma(to_mp(ctx, a - aj)) / ctx.gamma(to_mp(ctx, a))
        for b in lower:
            lead *= ctx.gamma(to_mp(ctx, b)) * ctx.rgamma(to_mp(ctx, b - aj))
        lead *= scale

        def ratio(m: int, aj=aj, others=others):
            value = -to_mp(ctx, aj + m - 1) / (m * mz)
            for a in others:
                value /= to_mp(ctx, a - aj - m)
            for b in lower:
                value *= to_mp(ctx, b - aj - m)
            return value

        def weight(m: int, aj=aj):
            return to_mp(ctx, prefactor.evaluate(-aj - m, 0))

        if lead == 0:
            series = ctx.mpf(0)
        else:
            series = sum_terms(RecurrenceTerms(ctx.mpf(1), ratio, weight), prec).value
        contribution = lead * series
        families.append(ResidueFamily(aj, lead, series, contribution))
        total += contribution
        logger.debug("residue family at -%s: %s", aj, ctx.nstr(contribution, 15))

    return ResidueExpansion(tuple(families), total)


@dataclass(frozen=True)
class ParametricFamily:
    """
    Integral identity I(t) = constant * t_factor(t)

    t_factor is a term in k standing for t. limit_integrand, when given,
    is the integrand whose value the normalised family tends to.
    """

    name: str
    integrand: IntegrandSpec
    constant: Expr
    t_factor: HyperTerm = field(default_factory=HyperTerm.one)
    limit_integrand: Optional[IntegrandSpec] = None

    def rhs(self, t, prec: Precision):
        return self.constant.evaluate(prec) * self.t_value_factor(t, prec)

    def t_value_factor(self, t, prec: Precision):
        return numeric_eval(self.t_factor, 0, as_rational(t), prec)


@dataclass(frozen=True)
class ConstancyRow:
    t: Optional[Fraction]
    computed: object
    expected: object
    abs_diff: object


@dataclass(frozen=True)
class ConstancyReport:
    family: str
    rows: Tuple[ConstancyRow, ...]
    max_deviation: object
    tolerance: object

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def integrate(integrand: IntegrandSpec, prec: Precision, max_levels: int = 12) -> QuadratureResult:
    return eval_integral(integrand, choose_contour(integrand, prec), prec, max_levels)


def _report(name: str, rows: List[ConstancyRow], prec: Precision) -> ConstancyReport:
    ctx = prec.context()
    deviation = max((row.abs_diff for row in rows), default=ctx.mpf(0))
    return ConstancyReport(name, tuple(rows), deviation, prec.pass_threshold())


def t_independence_check(family: ParametricFamily, t_samples: Sequence, prec: Precision) -> ConstancyReport:
    """Compare the integral with its closed form at each sample t"""
    rows = []
    for t in t_samples:
        t = as_rational(t)
        computed = integrate(family.integrand.at(t), prec).value
        expected = family.rhs(t, prec)
        rows.append(ConstancyRow(t, computed, expected, abs(computed - expected)))
        logger.info("%s at t=%s: |diff| %s", family.name, t, prec.context().nstr(rows[-1].abs_diff, 5))
    return _report(family.name, rows, prec)


def weierstrass_limit_check(family: ParametricFamily, prec: Precision,
                            t_values: Sequence = (0, 1, 2, 4)) -> ConstancyReport:
    """
    Normalised integrals I(t)/t_factor(t) are all the same constant,
    and so is the limit integrand, reported with t = None
    """
    rows = []
    expected = family.constant.evaluate(prec)
    for t in t_values:
        t = as_rational(t)
        computed = integrate(family.integrand.at(t), prec).value / family.t_value_factor(t, prec)
        rows.append(ConstancyRow(t, computed, expected, abs(computed - expected)))
    if family.limit_integrand is not None:
        computed = integrate(family.limit_integrand, prec).value
        rows.append(ConstancyRow(None, computed, expected, abs(computed - expected)))
    return _report(family.name, rows, prec)
