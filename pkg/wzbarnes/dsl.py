"""
Term-definition language

    pair "s2" {
        U = poch(1/2, n) * poch(1/4 + 3/2*k, n) / poch(1 + k, n);
        F = U * rf(-n*(n-2), 3*(n+2*k+1)) * sign(n) * pow(16/9, n) / fact(n);
        G = U * (5*n + 6*k + 1) * sign(n) * pow(16/9, n) / fact(n);
    }

Definitions are "term", "pair", "integrand" and "series". Integrands use
the variables s and t, everything else n and k. Bindings may refer to
earlier bindings of the same definition and to earlier terms by name.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional

from lark import Lark, Token
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError
from lark.visitors import Interpreter

from . import closedform as cf
from .barnes import IntegrandSpec
from .errors import DSLSyntaxError, UndefinedName, UnsupportedIntegrand, WZBError
from .exact import AffineForm, RationalFunction, as_rational, format_rational
from .hyperterm import (
    HyperTerm,
    WZPair,
    factorial_of,
    format_term,
    gamma_of,
    pochhammer,
    pochhammer_form,
    power,
    sign,
)
from .series import WeightedSeries

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: definition*

definition: kind ESCAPED_STRING "{" binding* "}"

kind: "term"      -> kind_term
    | "pair"      -> kind_pair
    | "integrand" -> kind_integrand
    | "series"    -> kind_series

binding: NAME "=" sum ";"

?sum: product
    | sum "+" product -> add
    | sum "-" product -> sub

?product: unary
    | product "*" unary -> mul
    | product "/" unary -> div

?unary: power
    | "-" unary -> neg

?power: atom
    | atom "^" SIGNED_INT -> pow

?atom: INT -> number
    | NAME -> name
    | "(" sum ")"
    | "poch" "(" sum "," NAME ")" -> poch
    | "gamma" "(" sum ")" -> gamma
    | "pow" "(" sum "," sum ")" -> exponential
    | "sign" "(" NAME ")" -> sign
    | "fact" "(" sum ")" -> fact
    | "rf" "(" sum "," sum ")" -> rf

NAME: /[a-zA-Z_][a-zA-Z_0-9]*/
COMMENT: /#[^\n]*/

%import common.INT
%import common.SIGNED_INT
%import common.ESCAPED_STRING
%import common.WS
%ignore WS
%ignore COMMENT
"""

KINDS = ("term", "pair", "integrand", "series")
SERIES_NAMES = ("n", "k")
INTEGRAND_NAMES = ("s", "t")
_VARIABLES = {"n": "n", "k": "k", "s": "n", "t": "k"}

_parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)


@dataclass(frozen=True)
class Definition:
    kind: str
    name: str
    value: object
    expected: Optional[cf.Expr] = field(default=None, compare=False)


@dataclass
class TermFile:
    definitions: List[Definition] = field(default_factory=list)

    def __iter__(self) -> Iterator[Definition]:
        return iter(self.definitions)

    def __len__(self) -> int:
        return len(self.definitions)

    def get(self, name: str) -> Definition:
        for definition in self.definitions:
            if definition.name == name:
                return definition
        raise KeyError(name)

    def of_kind(self, kind: str) -> List[Definition]:
        return [d for d in self.definitions if d.kind == kind]


def _position(node):
    if isinstance(node, Token):
        return node.line, node.column
    meta = getattr(node, "meta", None)
    if meta is not None and not meta.empty:
        return meta.line, meta.column
    return None, None


def _fail(message: str, node=None, error=DSLSyntaxError):
    line, column = _position(node) if node is not None else (None, None)
    raise error(message, line, column)


def _simplify(value):
    if isinstance(value, RationalFunction):
        constant = value.constant_value()
        if constant is not None:
            return constant
    return value


def _as_term(value, node) -> HyperTerm:
    if isinstance(value, HyperTerm):
        return value
    if isinstance(value, (Fraction, RationalFunction)):
        return HyperTerm.rational(value)
    _fail("expected a hypergeometric term", node)


def _as_rational_function(value, node) -> RationalFunction:
    if isinstance(value, (Fraction, RationalFunction)):
        return RationalFunction.coerce(value)
    _fail("expected a rational function", node)


def _as_affine(value, node) -> AffineForm:
    if isinstance(value, Fraction):
        return AffineForm(value)
    if isinstance(value, RationalFunction):
        try:
            return AffineForm.from_rational_function(value)
        except ValueError as exc:
            _fail(str(exc), node)
    _fail("expected an affine expression", node)


class _Evaluator(Interpreter):
    """Evaluates one expression tree against a scope"""

    def __init__(self, scope: Dict[str, object], x_value: Optional[Fraction]):
        self.scope = scope
        self.x_value = x_value

    def _children(self, tree):
        return [self.visit(child) for child in tree.children]

    def number(self, tree):
        return Fraction(int(tree.children[0]))

    def name(self, tree):
        token = tree.children[0]
        text = str(token)
        if text in self.scope:
            return self.scope[text]
        if text in _VARIABLES:
            return RationalFunction.variable(_VARIABLES[text])
        if text == "x" and self.x_value is not None:
            return self.x_value
        if text in cf.ALIASES:
            return cf.constant(text)
        _fail(f"undefined name '{text}'", token, UndefinedName)

    def _arith(self, tree, op: str):
        a, b = self._children(tree)
        if isinstance(a, cf.Expr) or isinstance(b, cf.Expr):
            for value in (a, b):
                if not isinstance(value, (cf.Expr, Fraction)):
                    _fail("closed forms combine only with numbers", tree)
            a, b = cf.lift(a), cf.lift(b)
        elif op in "+-" and (isinstance(a, HyperTerm) or isinstance(b, HyperTerm)):
            _fail("sums of hypergeometric terms are not supported", tree)
        elif isinstance(a, HyperTerm) or isinstance(b, HyperTerm):
            a, b = _as_term(a, tree), _as_term(b, tree)
        if op == "/" and isinstance(b, Fraction) and b == 0:
            _fail("division by zero", tree)
        if op == "+":
            return _simplify(a + b)
        if op == "-":
            return _simplify(a - b)
        if op == "*":
            return _simplify(a * b)
        return _simplify(a / b)

    def add(self, tree):
        return self._arith(tree, "+")

    def sub(self, tree):
        return self._arith(tree, "-")

    def mul(self, tree):
        return self._arith(tree, "*")

    def div(self, tree):
        return self._arith(tree, "/")

    def neg(self, tree):
        (value,) = self._children(tree)
        return _simplify(-value)

    def pow(self, tree):
        base = self.visit(tree.children[0])
        exponent = int(tree.children[1])
        if isinstance(base, Fraction) and base == 0 and exponent < 0:
            _fail("division by zero", tree)
        return _simplify(base ** exponent)

    def _variable(self, token) -> str:
        text = str(token)
        if text not in _VARIABLES:
            _fail(f"'{text}' is not a variable", token)
        return _VARIABLES[text]

    def poch(self, tree):
        base = _as_affine(self.visit(tree.children[0]), tree)
        return pochhammer(base, self._variable(tree.children[1]))

    def gamma(self, tree):
        return gamma_of(_as_affine(self.visit(tree.children[0]), tree))

    def fact(self, tree):
        return factorial_of(_as_affine(self.visit(tree.children[0]), tree))

    def exponential(self, tree):
        base, exponent = self._children(tree)
        if not isinstance(base, Fraction):
            _fail("pow needs a rational base", tree)
        try:
            return power(base, _as_affine(exponent, tree))
        except ValueError as exc:
            _fail(str(exc), tree)

    def sign(self, tree):
        return sign(self._variable(tree.children[0]))

    def rf(self, tree):
        num, den = self._children(tree)
        den = _as_rational_function(den, tree)
        if den.is_zero:
            _fail("rf with zero denominator", tree)
        return _simplify(_as_rational_function(num, tree) / den)


def integrand_from_term(term: HyperTerm, z=None, t=None) -> IntegrandSpec:
    """Read an integrand written as Pochhammers in s times (-z)^s"""
    form = pochhammer_form(term, "n")
    if form.sign:
        raise UnsupportedIntegrand("integrand carries (-1)^s")
    if z is None:
        if form.ratio == 1:
            raise UnsupportedIntegrand("integrand has neither a z binding nor a pow(..., s) factor")
        z = -form.ratio
    elif form.ratio != 1:
        raise UnsupportedIntegrand("give either z or a pow(..., s) factor, not both")
    scale = None if form.rest == HyperTerm.one() else form.rest
    return IntegrandSpec(form.weight, form.upper, form.lower, as_rational(z), t, scale)


def series_from_term(term: HyperTerm, start: int = 0) -> WeightedSeries:
    """Read a series term written as Pochhammers in n, pow(r, n), sign(n) and a rational weight"""
    form = pochhammer_form(term, "n")
    if form.rest != HyperTerm.one():
        raise UnsupportedIntegrand(f"series term has factors free of n: {format_term(form.rest)}")
    if any(f.uses("k") for f in form.upper + form.lower) or form.weight.uses("k"):
        raise UnsupportedIntegrand("series term depends on k")
    return WeightedSeries(tuple(f.const for f in form.upper), tuple(f.const for f in form.lower),
                          form.weight, form.ratio, form.sign, start)


def series_as_term(w: WeightedSeries) -> HyperTerm:
    term = HyperTerm.rational(w.weight)
    for a in w.poch_num:
        term = term * pochhammer(a, "n")
    for b in w.poch_den:
        term = term / pochhammer(b, "n")
    if w.ratio != 1:
        term = term * power(w.ratio, AffineForm.of("n"))
    if w.sign:
        term = term * sign("n")
    return term


def _require(bindings: Dict[str, object], key: str, node, kind: str):
    if key not in bindings:
        _fail(f"{kind} definition needs a binding '{key}'", node)
    return bindings[key]


def _number(value, key: str, node) -> Fraction:
    if not isinstance(value, Fraction):
        _fail(f"'{key}' must be a rational number", node)
    return value


def _expected(bindings, node) -> Optional[cf.Expr]:
    if "expected" not in bindings:
        return None
    value = bindings["expected"]
    if isinstance(value, Fraction):
        return cf.lift(value)
    if not isinstance(value, cf.Expr):
        _fail("'expected' must be a closed form", node)
    return value


def _build(kind: str, name: str, bindings: Dict[str, object], order: List[str], node) -> Definition:
    try:
        if kind == "term":
            key = "T" if "T" in bindings else (order[-1] if order else None)
            if key is None:
                _fail("term definition is empty", node)
            return Definition(kind, name, _as_term(bindings[key], node))

        if kind == "pair":
            F = _as_term(_require(bindings, "F", node, kind), node)
            G = _as_term(_require(bindings, "G", node, kind), node)
            certificate = bindings.get("C")
            if certificate is not None:
                certificate = _as_rational_function(certificate, node)
            return Definition(kind, name, WZPair(F, G, certificate))

        if kind == "integrand":
            term = _as_term(_require(bindings, "I", node, kind), node)
            z = _number(bindings["z"], "z", node) if "z" in bindings else None
            t = _number(bindings["t"], "t", node) if "t" in bindings else None
            return Definition(kind, name, integrand_from_term(term, z, t), _expected(bindings, node))

        term = _as_term(_require(bindings, "S", node, kind), node)
        start = _number(bindings.get("start", Fraction(0)), "start", node)
        if start.denominator != 1:
            _fail("'start' must be an integer", node)
        return Definition(kind, name, series_from_term(term, int(start)), _expected(bindings, node))
    except DSLSyntaxError:
        raise
    except (WZBError, ValueError) as exc:
        _fail(str(exc), node)


def parse(source: str, x_value=None) -> TermFile:
    """Parse term-file text; x_value binds the formal parameter x"""
    x_value = None if x_value is None else as_rational(x_value)
    try:
        tree = _parser.parse(source)
    except UnexpectedEOF as exc:
        lines = source.splitlines() or [""]
        raise DSLSyntaxError(f"unexpected end of input, expected one of {sorted(exc.expected)}",
                             len(lines), len(lines[-1]) + 1) from None
    except UnexpectedInput as exc:
        token = getattr(exc, "token", None)
        found = f" '{token}'" if token is not None else ""
        raise DSLSyntaxError(f"unexpected input{found}", exc.line, exc.column) from None

    result = TermFile()
    terms: Dict[str, object] = {}
    for node in tree.children:
        kind_node, label, *bindings = node.children
        kind = kind_node.data[len("kind_"):]
        name = label[1:-1]
        if any(d.name == name for d in result.definitions):
            _fail(f"duplicate definition '{name}'", label)

        scope = dict(terms)
        values: Dict[str, object] = {}
        order = []
        for binding in bindings:
            target, expression = binding.children
            parameter = kind == "integrand" and str(target) == "t"
            if str(target) in _VARIABLES and not parameter:
                _fail(f"cannot bind the variable name '{target}'", target)
            try:
                value = _Evaluator(scope, x_value).visit(expression)
            except VisitError as exc:
                raise exc.orig_exc from None
            except (WZBError, ValueError) as exc:
                if isinstance(exc, DSLSyntaxError):
                    raise
                _fail(str(exc), binding)
            if not parameter:
                scope[str(target)] = value
            values[str(target)] = value
            order.append(str(target))

        definition = _build(kind, name, values, order, node)
        result.definitions.append(definition)
        if kind == "term" and name.isidentifier():
            terms[name] = definition.value
        logger.debug("parsed %s '%s'", kind, name)
    return result


def parse_file(path, x_value=None) -> TermFile:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read(), x_value)


def _format_definition(definition: Definition) -> str:
    value = definition.value
    lines = [f'{definition.kind} "{definition.name}" {{']
    if definition.kind == "term":
        lines.append(f"    T = {format_term(value)};")
    elif definition.kind == "pair":
        lines.append(f"    F = {format_term(value.F)};")
        lines.append(f"    G = {format_term(value.G)};")
        if value.certificate is not None:
            lines.append(f"    C = rf({value.certificate.num.to_text()}, {value.certificate.den.to_text()});")
    elif definition.kind == "integrand":
        lines.append(f"    z = {format_rational(value.z)};")
        if value.t_value is not None:
            lines.append(f"    t = {format_rational(value.t_value)};")
        lines.append(f"    I = {format_term(value.as_term(), INTEGRAND_NAMES)};")
    else:
        lines.append(f"    start = {value.start_index};")
        lines.append(f"    S = {format_term(series_as_term(value))};")
    if definition.expected is not None:
        lines.append(f"    expected = {definition.expected.text()};")
    lines.append("}")
    return "\n".join(lines)


def format_termfile(termfile: TermFile) -> str:
    """Canonical text; parse(format_termfile(f)) has equal definitions"""
    return "\n\n".join(_format_definition(d) for d in termfile) + ("\n" if len(termfile) else "")
