"""Smooth-function expressions and their extension to Fermat reals.

Expressions are immutable trees built through the smart constructors
(:func:`add`, :func:`mul`, ...), which fold rational constants and the
trivial identities; every tree produced by the parser or by
:func:`differentiate` is therefore in the same canonical shape, and
``parse_expr(format_expr(e)) == e``.

:func:`ext_apply` evaluates the Fermat extension of ``f`` with the finite
Taylor formula at the standard parts of the arguments.  The increments are
nilpotent, so the formula is exact once its degree reaches the largest
``floor(order(h_j))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from . import syntax
from ._numbers import Scalar, as_fraction, format_rational, iroot
from .errors import DomainError, EvaluationError, ModeError, NotSmoothHere, ParseError
from .fermat import FermatReal, compare, pow_int

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


# -- tree ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class PowInt:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Expr"


Expr = Union[Const, Var, Add, Sub, Mul, Div, Neg, PowInt, Func]

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(value) -> Const:
    return Const(as_fraction(value))


def var(index: int) -> Var:
    return Var(index)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if b == ZERO:
        return a
    if a == ZERO:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    if b == ONE:
        return a
    if a == ZERO and isinstance(b, Const) and b.value != 0:
        return ZERO
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def powi(base: Expr, exponent: int) -> Expr:
    if exponent < 0:
        raise DomainError("powi: exponent must be a natural number")
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**exponent)
    return PowInt(base, exponent)


def func(name: str, arg: Expr) -> Func:
    if name not in FUNCTIONS:
        raise DomainError(f"unknown function {name!r}")
    return Func(name, arg)


def dimension(e: Expr) -> int:
    """One more than the largest variable index in ``e`` (0 for constants)."""
    if isinstance(e, Var):
        return e.index + 1
    if isinstance(e, Const):
        return 0
    return max(dimension(c) for c in _children(e))


def _children(e: Expr) -> tuple:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, PowInt):
        return (e.base,)
    if isinstance(e, Func):
        return (e.arg,)
    return ()


# -- differentiation -----------------------------------------------------------------


@lru_cache(maxsize=8192)
def differentiate(e: Expr, index: int = 0) -> Expr:
    """Symbolic partial derivative with respect to variable ``index``."""
    d = lambda sub_e: differentiate(sub_e, index)
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == index else ZERO
    if isinstance(e, Add):
        return add(d(e.left), d(e.right))
    if isinstance(e, Sub):
        return sub(d(e.left), d(e.right))
    if isinstance(e, Mul):
        return add(mul(d(e.left), e.right), mul(e.left, d(e.right)))
    if isinstance(e, Div):
        num = sub(mul(d(e.left), e.right), mul(e.left, d(e.right)))
        if num == ZERO:
            return ZERO
        return div(num, powi(e.right, 2))
    if isinstance(e, Neg):
        return neg(d(e.arg))
    if isinstance(e, PowInt):
        inner = d(e.base)
        if inner == ZERO:
            return ZERO
        return mul(mul(const(e.exponent), powi(e.base, e.exponent - 1)), inner)
    if isinstance(e, Func):
        inner = d(e.arg)
        if inner == ZERO:
            return ZERO
        a = e.arg
        if e.name == "sin":
            outer = func("cos", a)
        elif e.name == "cos":
            outer = neg(func("sin", a))
        elif e.name == "exp":
            outer = e
        elif e.name == "log":
            return div(inner, a)
        else:  # sqrt
            return div(inner, mul(const(2), e))
        return mul(outer, inner)
    raise TypeError(f"not an expression: {e!r}")


def partial(e: Expr, multi_index: Sequence[int]) -> Expr:
    for i, k in enumerate(multi_index):
        for _ in range(k):
            e = differentiate(e, i)
    return e


# -- real evaluation ---------------------------------------------------------------


def _exact_sqrt(v: Fraction) -> Optional[Fraction]:
    num, den = iroot(v.numerator, 2), iroot(v.denominator, 2)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _apply_function(name: str, a: Scalar) -> Scalar:
    exact = isinstance(a, Fraction)
    if name == "sin":
        return Fraction(0) if exact and a == 0 else math.sin(a)
    if name == "cos":
        return Fraction(1) if exact and a == 0 else math.cos(a)
    if name == "exp":
        return Fraction(1) if exact and a == 0 else math.exp(a)
    if name == "log":
        if a <= 0:
            raise EvaluationError("log", f"argument must be positive, got {_show(a)}")
        return Fraction(0) if exact and a == 1 else math.log(a)
    if name == "sqrt":
        if a < 0:
            raise EvaluationError("sqrt", f"argument must be non-negative, got {_show(a)}")
        if exact:
            root = _exact_sqrt(a)
            if root is not None:
                return root
        return math.sqrt(a)
    raise DomainError(f"unknown function {name!r}")


def _show(v: Scalar) -> str:
    return format_rational(v) if isinstance(v, Fraction) else repr(v)


def eval_real(e: Expr, point: Sequence = ()) -> Scalar:
    """Value of ``e`` at a real point.

    Exact (a Fraction) as long as every step stays in the exact table --
    rational arithmetic, sin/cos/exp at 0, log at 1, sqrt of rational
    squares -- and a float otherwise.
    """
    values = [v if isinstance(v, float) else as_fraction(v) for v in point]
    return _eval(e, values)


def _eval(e: Expr, xs: list) -> Scalar:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if e.index >= len(xs):
            raise DomainError(f"variable x{e.index + 1} has no value")
        return xs[e.index]
    if isinstance(e, Add):
        return _eval(e.left, xs) + _eval(e.right, xs)
    if isinstance(e, Sub):
        return _eval(e.left, xs) - _eval(e.right, xs)
    if isinstance(e, Mul):
        return _eval(e.left, xs) * _eval(e.right, xs)
    if isinstance(e, Div):
        den = _eval(e.right, xs)
        if den == 0:
            raise EvaluationError("/", "division by zero")
        return _eval(e.left, xs) / den
    if isinstance(e, Neg):
        return -_eval(e.arg, xs)
    if isinstance(e, PowInt):
        return _eval(e.base, xs) ** e.exponent
    if isinstance(e, Func):
        return _apply_function(e.name, _eval(e.arg, xs))
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: Expr, args: Sequence):
    """Evaluate a polynomial expression over any commutative ring supporting ``+ - *``.

    Division is allowed only by nonzero constants.  Used to apply polynomials to
    Fermat reals and ultrapower elements without Taylor expansion.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return args[e.index]
    if isinstance(e, Add):
        return evaluate(e.left, args) + evaluate(e.right, args)
    if isinstance(e, Sub):
        return evaluate(e.left, args) - evaluate(e.right, args)
    if isinstance(e, Mul):
        return evaluate(e.left, args) * evaluate(e.right, args)
    if isinstance(e, Div) and isinstance(e.right, Const) and e.right.value != 0:
        return evaluate(e.left, args) * (1 / e.right.value)
    if isinstance(e, Neg):
        return -evaluate(e.arg, args)
    if isinstance(e, PowInt) and e.exponent >= 0:
        if e.exponent == 0:
            return Fraction(1)
        result = evaluate(e.base, args)
        for _ in range(e.exponent - 1):
            result = result * evaluate(e.base, args)
        return result
    raise DomainError("evaluate: only polynomial expressions can be applied pointwise")


def to_polynomial(e: Expr) -> dict:
    """Expanded form ``{exponent tuple: coefficient}``; raises on non-polynomial nodes."""
    d = max(dimension(e), 1)

    def mono(i):
        return tuple(1 if k == i else 0 for k in range(d))

    def padd(p, q):
        out = dict(p)
        for k, c in q.items():
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c != 0}

    def pmul(p, q):
        out = {}
        for k1, c1 in p.items():
            for k2, c2 in q.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return {k: c for k, c in out.items() if c != 0}

    def walk(n):
        if isinstance(n, Const):
            return {(0,) * d: n.value} if n.value else {}
        if isinstance(n, Var):
            return {mono(n.index): Fraction(1)}
        if isinstance(n, Add):
            return padd(walk(n.left), walk(n.right))
        if isinstance(n, Sub):
            return padd(walk(n.left), {k: -c for k, c in walk(n.right).items()})
        if isinstance(n, Mul):
            return pmul(walk(n.left), walk(n.right))
        if isinstance(n, Div) and isinstance(n.right, Const) and n.right.value != 0:
            return {k: c / n.right.value for k, c in walk(n.left).items()}
        if isinstance(n, Neg):
            return {k: -c for k, c in walk(n.arg).items()}
        if isinstance(n, PowInt):
            base, out = walk(n.base), {(0,) * d: Fraction(1)}
            for _ in range(n.exponent):
                out = pmul(out, base)
            return out
        raise DomainError("not a polynomial expression")

    return walk(e)


def is_polynomial(e: Expr) -> bool:
    try:
        to_polynomial(e)
    except DomainError:
        return False
    return True


def compose(f: Expr, gs: Sequence[Expr]) -> Expr:
    """Substitute ``gs[i]`` for variable ``i`` of ``f``."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Var):
        return gs[f.index]
    if isinstance(f, Add):
        return add(compose(f.left, gs), compose(f.right, gs))
    if isinstance(f, Sub):
        return sub(compose(f.left, gs), compose(f.right, gs))
    if isinstance(f, Mul):
        return mul(compose(f.left, gs), compose(f.right, gs))
    if isinstance(f, Div):
        return div(compose(f.left, gs), compose(f.right, gs))
    if isinstance(f, Neg):
        return neg(compose(f.arg, gs))
    if isinstance(f, PowInt):
        return powi(compose(f.base, gs), f.exponent)
    return func(f.name, compose(f.arg, gs))


# -- Fermat extension ----------------------------------------------------------------


@dataclass(frozen=True)
class TaylorData:
    """Mixed partials ``d^j f(point)`` for every multi-index ``|j| <= degree``."""

    point: tuple
    degree: int
    table: dict

    @classmethod
    def build(cls, f: Expr, point: Sequence, degree: int) -> "TaylorData":
        d = len(point)
        table = {}
        for j in itertools.product(range(degree + 1), repeat=d):
            if sum(j) <= degree:
                table[j] = eval_real(partial(f, j), point)
        return cls(tuple(point), degree, table)


def _as_fermat(value) -> FermatReal:
    if isinstance(value, FermatReal):
        return value
    return FermatReal(value)


def taylor_degree(increments: Sequence[FermatReal]) -> int:
    """Least ``n`` with ``h_j ** (n+1) == 0`` for every increment."""
    n = 0
    for h in increments:
        if h.terms:
            n = max(n, math.floor(h.terms[0].order))
    return n


def ext_apply(f: Expr, args: Sequence, degree: Optional[int] = None) -> FermatReal:
    """The Fermat extension of ``f`` evaluated at ``args``.

    With ``r_j = st(args_j)`` and ``h_j = args_j - r_j`` this is
    ``sum_{|j| <= n} h**j / j! * d^j f(r)`` where ``n`` is :func:`taylor_degree`
    (or ``degree`` when given; larger values must not change the result).
    """
    xs = [_as_fermat(a) for a in args]
    if len(xs) < dimension(f):
        raise DomainError(f"ext: function needs {dimension(f)} arguments, got {len(xs)}")
    if xs and len({x.exact for x in xs}) > 1:
        raise ModeError("ext: arguments mix exact and approximate values")
    exact_args = all(x.exact for x in xs)
    r = [x.std for x in xs]
    hs = [x - s for x, s in zip(xs, r)]
    n = taylor_degree(hs)
    if degree is not None:
        if degree < n:
            raise DomainError(f"ext: degree {degree} is below the nilpotency bound {n}")
        n = degree
    standard = all(not h.terms for h in hs)

    total: Optional[FermatReal] = None
    d = len(xs)
    for j in itertools.product(range(n + 1), repeat=d):
        if sum(j) > n:
            continue
        mono = FermatReal(1, exact=exact_args)
        for h, k in zip(hs, j):
            if k:
                mono = mono * pow_int(h, k)
        if not mono:
            continue
        try:
            value = eval_real(partial(f, j), r)
        except EvaluationError as err:
            if standard:
                raise
            raise NotSmoothHere(err.primitive, f"not smooth at the standard part ({err})") from err
        coef = value / math.prod(math.factorial(k) for k in j)
        if isinstance(coef, float) and mono.exact:
            mono = mono.to_approx()
            if total is not None:
                total = total.to_approx()
        elif total is not None and not total.exact and mono.exact:
            mono = mono.to_approx()
        piece = mono * coef
        total = piece if total is None else total + piece
    if total is None:
        return FermatReal(0, exact=exact_args)
    return total


def derivative_at(f: Expr, x) -> Scalar:
    """``f'(x)`` read off as the slope in ``f(x + h) = f(x) + h*m`` for ``h = dt``."""
    x = x if isinstance(x, float) else as_fraction(x)
    y = ext_apply(f, [FermatReal(x, [(1, 1)])])
    slope = 0.0 if isinstance(x, float) else Fraction(0)
    for c, w in y.terms:
        if w != 1:
            raise AssertionError(f"unexpected term of order {w} in first-order expansion")
        slope = c
    return slope


def ext_abs(x: FermatReal) -> FermatReal:
    """Absolute value through the order relation (abs is not smooth at 0)."""
    return -x if compare(x, 0) < 0 else x


def ext_function(name: str, x) -> FermatReal:
    """Fermat extension of a named one-variable primitive (``sin``, ``log``, ...)."""
    if name == "abs":
        return ext_abs(_as_fermat(x))
    return ext_apply(func(name, Var(0)), [x])


# -- text form --------------------------------------------------------------------------


def default_variable_names(d: int) -> list[str]:
    return ["x"] if d <= 1 else [f"x{i + 1}" for i in range(d)]


_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_SUM
    if isinstance(e, (Mul, Div)):
        return _PREC_PROD
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, PowInt):
        return _PREC_POW
    if isinstance(e, Const):
        if e.value < 0:
            return _PREC_UNARY
        if e.value.denominator != 1:
            return _PREC_PROD
    return _PREC_ATOM


def format_expr(e: Expr, names: Optional[Sequence[str]] = None) -> str:
    """Infix text with minimal parentheses; parses back to the same tree."""
    if names is None:
        names = default_variable_names(dimension(e))

    def wrap(child: Expr, min_prec: int) -> str:
        text = fmt(child)
        return f"({text})" if _prec(child) < min_prec else text

    def fmt(n: Expr) -> str:
        if isinstance(n, Const):
            v = n.value
            return ("-" if v < 0 else "") + format_rational(abs(v))
        if isinstance(n, Var):
            return names[n.index]
        if isinstance(n, (Add, Sub)):
            op = " + " if isinstance(n, Add) else " - "
            return wrap(n.left, _PREC_SUM) + op + wrap(n.right, _PREC_PROD)
        if isinstance(n, (Mul, Div)):
            op = "*" if isinstance(n, Mul) else "/"
            return wrap(n.left, _PREC_PROD) + op + wrap(n.right, _PREC_UNARY + 1)
        if isinstance(n, Neg):
            return "-" + wrap(n.arg, _PREC_POW)
        if isinstance(n, PowInt):
            return wrap(n.base, _PREC_ATOM) + "^" + str(n.exponent)
        return f"{n.name}({fmt(n.arg)})"

    return fmt(e)


def from_syntax(node: syntax.Node, names: Sequence[str]) -> Expr:
    """Convert a parsed syntax tree into an expression over the given variable names."""
    index = {name: i for i, name in enumerate(names)}

    def conv(n) -> Expr:
        if isinstance(n, syntax.Num):
            return Const(n.value)
        if isinstance(n, syntax.Name):
            if n.id not in index:
                raise ParseError(f"unknown variable {n.id!r}", n.column or 1)
            return Var(index[n.id])
        if isinstance(n, syntax.Unary):
            return neg(conv(n.operand))
        if isinstance(n, syntax.BinOp):
            if n.op == "^":
                return _power(conv(n.left), n.right)
            left, right = conv(n.left), conv(n.right)
            return {"+": add, "-": sub, "*": mul, "/": div}[n.op](left, right)
        if isinstance(n, syntax.Call):
            if n.func not in FUNCTIONS or len(n.args) != 1:
                raise ParseError(f"unknown function {n.func!r}", n.column or 1)
            return func(n.func, conv(n.args[0]))
        raise ParseError(f"unsupported syntax in expression: {n!r}", 1)

    def _power(base: Expr, exponent_node) -> Expr:
        try:
            k = _literal_value(exponent_node)
        except ValueError:
            raise ParseError("exponent must be a rational literal", 1) from None
        if k.denominator == 1:
            p = powi(base, abs(k.numerator))
        elif k.denominator == 2:
            p = powi(func("sqrt", base), abs(k.numerator))
        else:
            raise ParseError("only integer and half-integer exponents are supported", 1)
        return div(ONE, p) if k < 0 else p

    return conv(node)


def _literal_value(node) -> Fraction:
    if isinstance(node, syntax.Num):
        return node.value
    if isinstance(node, syntax.Unary):
        return -_literal_value(node.operand)
    if isinstance(node, syntax.BinOp) and node.op in ("/", "*"):
        a, b = _literal_value(node.left), _literal_value(node.right)
        return a / b if node.op == "/" else a * b
    raise ValueError("not a literal")


def parse_expr(text: str, names: Optional[Sequence[str]] = None) -> Expr:
    """Parse infix text.  Without ``names`` the variables are ``x`` or
    ``x1..xd`` when present, otherwise the free names in alphabetical order."""
    node = syntax.parse_expression(text)
    if names is None:
        names = infer_variable_names(node)
    return from_syntax(node, names)


def infer_variable_names(node: syntax.Node) -> list[str]:
    found = syntax.free_names(node)
    if not found:
        return ["x"]
    numbered = [n for n in found if n[0] == "x" and n[1:].isdigit() and n[1:] != "0"]
    if numbered and len(numbered) == len(found):
        top = max(int(n[1:]) for n in numbered)
        return [f"x{i + 1}" for i in range(top)]
    return sorted(found)
