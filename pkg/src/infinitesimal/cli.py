"""Command-line calculator for Fermat reals and the ultrapower sandbox.

A session reads statements such as ``x=dt(3)+2*dt(2)`` or
``decomposition(ext(f,x)/ext(g,y))`` and prints the canonical decomposition.
Sequences for the ultrapower ring are written with ``h`` standing for
``1/(n+1)``; ``seq(n%2==0: h, n%2==1: -h)`` builds a piecewise sequence and
``dominant(n>=5 | odd)`` asks the filter oracle about an index set.

Exit codes: 0 success, 1 parse error, 2 domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import smooth, syntax
from ._numbers import as_fraction, format_rational, format_scalar
from .errors import DomainError, InfinitesimalError, ParseError
from .fermat import (
    FermatReal,
    compare,
    dt,
    format_fermat,
    is_infinitesimal,
    is_invertible,
    is_real,
    order,
    orders,
    st,
    std_parts,
)
from .opensets import member_ext, parse_openset
from .plot import FORMATS, emit_plot, render_plot
from .realsets import parse_realset
from .ultrapower import (
    EpSet,
    FilterOracle,
    Hyper,
    HyperFrac,
    PowerSum,
    SeqExpr,
    Strategy,
    frac_add,
    frac_div,
    frac_eq,
    frac_member,
    frac_mul,
    frac_st,
    frac_sub,
    hyper_eq,
    hyper_le,
    hyper_lt,
    is_infinite_frac,
    is_infinitesimal_hyper,
    st_hyper,
    star_member,
)

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

_PLOT_RE = re.compile(r"^\s*plot\s*\((?P<args>.*)\)\s*>\s*(?P<path>[^\s;]+)\s*;?\s*$")
_ELEMENTARY = ("abs", "log", "exp", "sin", "cos", "sqrt")
_INDEX_NAMES = {
    "all": EpSet.all,
    "none": EpSet.none,
    "even": EpSet.evens,
    "odd": EpSet.odds,
}


@dataclass(frozen=True)
class Inline:
    """A smooth function given by text, as produced by ``inline('sin(x)')``."""

    text: str
    expr: smooth.Expr
    names: tuple

    @classmethod
    def parse(cls, text: str) -> "Inline":
        node = syntax.parse_expression(text)
        names = tuple(sorted(syntax.free_names(node))) or ("x",)
        return cls(text.strip(), smooth.from_syntax(node, names), names)

    def render(self, name: str) -> str:
        return f"Inline function: {name}({', '.join(self.names)}) = {self.text}"


class Session:
    """Variable bindings plus the scalar mode and the filter oracle of one run."""

    def __init__(self, mode: str = "exact", strategy: str = "prefer-in", fmt: str = "csv"):
        if mode not in ("exact", "approx"):
            raise DomainError(f"unknown mode {mode!r}")
        if fmt not in FORMATS:
            raise DomainError(f"unknown plot format {fmt!r}")
        self.mode = mode
        self.oracle = FilterOracle(Strategy(strategy))
        self.fmt = fmt
        self.bindings: dict = {}

    # -- entry points ----------------------------------------------------------------

    def execute(self, text: str) -> tuple[Optional[str], Optional[str]]:
        """Run one line; returns ``(name, payload)`` with None for silent or blank lines."""
        line = text.strip()
        if not line or line[0] in "#%":
            return None, None
        m = _PLOT_RE.match(line)
        if m:
            path = self._plot_to_file(m.group("args"), m.group("path"))
            return None, None if line.endswith(";") else f"wrote {path}"
        stmt = syntax.parse_statement(line)
        value = self.eval(stmt.expr)
        name = stmt.target or "ans"
        self.bindings[name] = value
        if stmt.silent:
            return name, None
        return name, self.render(value, name)

    def eval_line(self, text: str) -> str:
        """The printed payload of one line (empty when nothing is printed)."""
        return self.execute(text)[1] or ""

    def transcript_line(self, text: str) -> str:
        """The line in transcript form: prompt, ``name =`` header and payload."""
        name, payload = self.execute(text)
        out = f">> {text.strip()}\n"
        if payload is not None and name is None:
            out += f"{payload}\n"
        elif payload is not None:
            value = self.bindings.get(name)
            header = f"{name} =" if isinstance(value, Inline) else f"{name} = "
            out += f"{header}\n{payload}\n"
        return out

    # -- rendering -------------------------------------------------------------------

    def render(self, value, name: str = "ans") -> str:
        if isinstance(value, bool):
            return "1" if value else "0"
        if isinstance(value, FermatReal):
            return format_fermat(value)
        if isinstance(value, Inline):
            return value.render(name)
        if isinstance(value, (Fraction, int, float)):
            return format_scalar(value)
        if isinstance(value, list):
            return "[" + ", ".join(self.render(v) for v in value) + "]"
        return str(value)

    # -- evaluation ------------------------------------------------------------------

    def eval(self, node):
        if isinstance(node, syntax.Num):
            v = node.value
            return FermatReal(float(v) if self.mode == "approx" else v)
        if isinstance(node, syntax.DtLit):
            return self._dt(node.order)
        if isinstance(node, syntax.Str):
            return node.text
        if isinstance(node, syntax.Name):
            return self._lookup(node)
        if isinstance(node, syntax.Unary):
            if node.op == "~":
                return not self._truth(self.eval(node.operand))
            return _negate(self.eval(node.operand))
        if isinstance(node, syntax.BinOp):
            return self._binop(node)
        if isinstance(node, syntax.Compare):
            return self._compare(node.op, self.eval(node.left), self.eval(node.right))
        if isinstance(node, syntax.Call):
            return self._call(node)
        raise ParseError("set literals and guarded branches only appear inside seq(...) and dominant(...)", 1)

    def _lookup(self, node: syntax.Name):
        if node.id in self.bindings:
            return self.bindings[node.id]
        if node.id == "h":
            return Hyper.h()
        if node.id == "dt":
            return self._dt(1)
        raise DomainError(f"undefined name {node.id!r}")

    def _dt(self, a) -> FermatReal:
        x = dt(a)
        return x.to_approx() if self.mode == "approx" else x

    def _truth(self, v) -> bool:
        if isinstance(v, bool):
            return v
        if isinstance(v, FermatReal):
            return bool(v)
        raise DomainError("logical operators need logical or Fermat operands")

    def _binop(self, node: syntax.BinOp):
        op = node.op
        if op in ("&", "|"):
            a = self._truth(self.eval(node.left))
            b = self._truth(self.eval(node.right))
            return (a and b) if op == "&" else (a or b)
        if op == "^":
            return self._power(node)
        a, b = self.eval(node.left), self.eval(node.right)
        if _is_hyper(a) or _is_hyper(b):
            return self._hyper_arith(op, a, b)
        a, b = _fermat(a, op), _fermat(b, op)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a / b
        raise DomainError(f"operator {op!r} only applies to index sets")

    def _power(self, node: syntax.BinOp):
        if isinstance(node.left, syntax.Name) and node.left.id == "h" and "h" not in self.bindings:
            return Hyper.h(_rational(node.right, self))
        base = self.eval(node.left)
        k = _rational(node.right, self)
        if k.denominator != 1:
            raise DomainError("^: exponent must be an integer")
        k = int(k)
        if isinstance(base, Hyper):
            if k < 0:
                return HyperFrac.make(self.oracle, 1, base**-k)
            return base**k
        if isinstance(base, HyperFrac):
            out = HyperFrac.of(1)
            for _ in range(abs(k)):
                out = frac_mul(out, base)
            return out if k >= 0 else frac_div(self.oracle, 1, out)
        return _fermat(base, "^") ** k

    def _hyper_arith(self, op: str, a, b):
        for v in (a, b):
            if isinstance(v, FermatReal) and not is_real(v):
                raise DomainError(f"{op}: Fermat reals and ultrapower classes do not mix")
        a, b = _hyper_operand(a), _hyper_operand(b)
        if op == "/":
            return frac_div(self.oracle, a, b)
        if isinstance(a, HyperFrac) or isinstance(b, HyperFrac):
            fn = {"+": frac_add, "-": frac_sub, "*": frac_mul}.get(op)
        else:
            fn = {"+": Hyper.__add__, "-": Hyper.__sub__, "*": Hyper.__mul__}.get(op)
            a, b = Hyper.of(a), Hyper.of(b)
        if fn is None:
            raise DomainError(f"operator {op!r} does not apply to ultrapower classes")
        return fn(a, b)

    def _compare(self, op: str, a, b) -> bool:
        if _is_hyper(a) or _is_hyper(b):
            a, b = _hyper_operand(a), _hyper_operand(b)
            if isinstance(a, HyperFrac) or isinstance(b, HyperFrac):
                if op not in ("==", "~=", "!="):
                    raise DomainError(f"{op}: quotients only support equality")
                eq = frac_eq(self.oracle, a, b)
                return eq if op == "==" else not eq
            table = {
                "==": lambda: hyper_eq(self.oracle, a, b),
                "~=": lambda: not hyper_eq(self.oracle, a, b),
                "!=": lambda: not hyper_eq(self.oracle, a, b),
                "<": lambda: hyper_lt(self.oracle, a, b),
                "<=": lambda: hyper_le(self.oracle, a, b),
                ">": lambda: hyper_lt(self.oracle, b, a),
                ">=": lambda: hyper_le(self.oracle, b, a),
            }
            return table[op]()
        c = compare(_fermat(a, op), _fermat(b, op))
        return {
            "==": c == 0,
            "~=": c != 0,
            "!=": c != 0,
            "<": c < 0,
            "<=": c <= 0,
            ">": c > 0,
            ">=": c >= 0,
        }[op]

    # -- functions -------------------------------------------------------------------

    def _call(self, node: syntax.Call):
        name, args = node.func, node.args
        if name in self.bindings and isinstance(self.bindings[name], Inline):
            f = self.bindings[name]
            return smooth.ext_apply(f.expr, [_fermat(self.eval(a), name) for a in args])
        if name == "seq":
            return Hyper(self._sequence(args))
        if name == "dominant":
            _arity(name, args, 1)
            return self.oracle.dominant(self._index_set(args[0]))
        if name == "plot":
            if not 2 <= len(args) <= 3:
                raise DomainError("plot: expected plot(delta, x) or plot(delta, x, samples)")
            delta, x, samples = self._plot_args(args)
            return render_plot(x, delta, samples, self.fmt).rstrip("\n")
        if name == "inline":
            _arity(name, args, 1)
            text = self.eval(args[0])
            if not isinstance(text, str):
                raise DomainError("inline: expected a quoted expression")
            return Inline.parse(text)
        if name == "ext":
            if len(args) < 2:
                raise DomainError("ext: expected ext(f, x, ...)")
            f = self._function_arg(args[0])
            return smooth.ext_apply(f, [_fermat(self.eval(a), name) for a in args[1:]])
        if name == "derivative":
            _arity(name, args, 2)
            f = self._function_arg(args[0])
            return FermatReal(smooth.derivative_at(f, _standard(self.eval(args[1]), name)))
        if name == "dt":
            if len(args) > 1:
                raise DomainError("dt: expected at most one argument")
            return self._dt(_rational(args[0], self) if args else 1)
        if name == "member":
            _arity(name, args, 2)
            return self._member(self.eval(args[0]), self.eval(args[1]))
        if name in ("hst", "isinfinite"):
            _arity(name, args, 1)
            x = self.eval(args[0])
            if name == "isinfinite":
                return is_infinite_frac(self.oracle, _hyper_operand(x))
            return self._hst(x)
        values = [self.eval(a) for a in args]
        if name in _FERMAT_UNARY:
            _arity(name, args, 1)
            x = values[0]
            if name == "isinfinitesimal" and _is_hyper(x):
                return is_infinitesimal_hyper(self.oracle, _hyper_operand(x))
            return _FERMAT_UNARY[name](_fermat(x, name))
        if name in _ELEMENTARY:
            _arity(name, args, 1)
            return smooth.ext_function(name, _fermat(values[0], name))
        raise DomainError(f"unknown function {name!r}")

    def _function_arg(self, node) -> smooth.Expr:
        if isinstance(node, syntax.Name) and node.id not in self.bindings:
            if node.id in smooth.FUNCTIONS:
                return smooth.func(node.id, smooth.Var(0))
            raise DomainError(f"unknown function {node.id!r}")
        f = self.eval(node)
        if isinstance(f, Inline):
            return f.expr
        if isinstance(f, str):
            return smooth.parse_expr(f)
        raise DomainError("expected a function: a primitive name, an inline or a quoted expression")

    def _member(self, x, region):
        if not isinstance(region, str):
            raise DomainError("member: the set must be quoted, as in member(x, '(0,1)')")
        if isinstance(x, HyperFrac):
            return frac_member(self.oracle, x, parse_realset(region))
        if isinstance(x, Hyper):
            return star_member(self.oracle, x, parse_realset(region))
        return member_ext(_fermat(x, "member"), parse_openset(region))

    def _hst(self, x):
        if isinstance(x, HyperFrac):
            value = frac_st(x)
            if value is None:
                raise DomainError("hst: the quotient has no finite standard part")
            return value
        if isinstance(x, Hyper):
            return st_hyper(x)
        return st(_fermat(x, "hst"))

    # -- plots -----------------------------------------------------------------------

    def _plot_args(self, args):
        delta = _standard(self.eval(args[0]), "plot")
        if delta <= 0:
            raise DomainError("plot: delta must be positive")
        x = _fermat(self.eval(args[1]), "plot")
        samples = 100
        if len(args) == 3:
            k = _rational(args[2], self)
            if k.denominator != 1 or k < 2:
                raise DomainError("plot: samples must be an integer >= 2")
            samples = int(k)
        return delta, x, samples

    def _plot_to_file(self, arg_text: str, path: str) -> Path:
        call = syntax.parse_expression(f"plot({arg_text})")
        if not isinstance(call, syntax.Call) or not 2 <= len(call.args) <= 3:
            raise ParseError("expected plot(delta, x) > file", 1)
        delta, x, samples = self._plot_args(call.args)
        suffix = Path(path).suffix.lstrip(".").lower()
        fmt = suffix if suffix in FORMATS else self.fmt
        return emit_plot(x, delta, samples, fmt, path)

    # -- sequences and index sets ----------------------------------------------------

    def _sequence(self, args) -> SeqExpr:
        if len(args) == 1 and not isinstance(args[0], syntax.Branch):
            return SeqExpr.of(self._powersum(args[0]))
        branches, covered = [], EpSet.none()
        for a in args:
            if not isinstance(a, syntax.Branch):
                raise DomainError("seq: mix of plain and guarded arguments")
            if isinstance(a.guard, syntax.Name) and a.guard.id == "otherwise":
                block = ~covered
            else:
                block = self._index_set(a.guard) - covered
            covered = covered | block
            branches.append((block, self._powersum(a.value)))
        return SeqExpr(branches)

    def _powersum(self, node) -> PowerSum:
        if isinstance(node, syntax.Num):
            return PowerSum(node.value)
        if isinstance(node, syntax.Name):
            if node.id == "h":
                return PowerSum.power(1)
            raise DomainError(f"seq: unknown name {node.id!r} (use h for 1/(n+1))")
        if isinstance(node, syntax.Unary) and node.op == "-":
            return -self._powersum(node.operand)
        if isinstance(node, syntax.BinOp):
            if node.op == "^":
                k = _rational(node.right, self)
                if isinstance(node.left, syntax.Name) and node.left.id == "h":
                    return PowerSum.power(k)
                if k.denominator != 1 or k < 0:
                    raise DomainError("seq: only h takes fractional or negative powers")
                return self._powersum(node.left) ** int(k)
            if node.op == "/":
                return self._powersum(node.left) * (1 / _rational(node.right, self))
            a, b = self._powersum(node.left), self._powersum(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
        raise DomainError("seq: terms are built from rationals and h with + - * / ^")

    def _index_set(self, node) -> EpSet:
        if isinstance(node, syntax.Name):
            if node.id in _INDEX_NAMES:
                return _INDEX_NAMES[node.id]()
            bound = self.bindings.get(node.id)
            if isinstance(bound, EpSet):
                return bound
            raise DomainError(f"unknown index set {node.id!r}")
        if isinstance(node, syntax.SetLit):
            return EpSet.finite(_natural(self, a) for a in node.items)
        if isinstance(node, syntax.Unary) and node.op == "~":
            return ~self._index_set(node.operand)
        if isinstance(node, syntax.BinOp) and node.op in ("&", "|"):
            a, b = self._index_set(node.left), self._index_set(node.right)
            return a & b if node.op == "&" else a | b
        if isinstance(node, syntax.Compare):
            return self._index_compare(node)
        raise DomainError("index sets are built from n, even, odd, all, none, {..}, & | ~")

    def _index_compare(self, node: syntax.Compare) -> EpSet:
        left, op = node.left, node.op
        if isinstance(left, syntax.BinOp) and left.op == "%" and _is_n(left.left):
            if op not in ("==", "~=", "!="):
                raise DomainError("n%m only compares with == or ~=")
            m, r = _natural(self, left.right), _natural(self, node.right)
            if m < 1:
                raise DomainError("n%m needs m >= 1")
            s = EpSet.residue(m, r % m) if r < m else EpSet.none()
            return s if op == "==" else ~s
        if not _is_n(left):
            raise DomainError("index conditions have the form n>=k, n==k or n%m==r")
        k = _natural(self, node.right)
        table = {
            ">=": lambda: EpSet.at_least(k),
            ">": lambda: EpSet.at_least(k + 1),
            "<": lambda: ~EpSet.at_least(k),
            "<=": lambda: ~EpSet.at_least(k + 1),
            "==": lambda: EpSet.finite([k]),
            "~=": lambda: ~EpSet.finite([k]),
            "!=": lambda: ~EpSet.finite([k]),
        }
        return table[op]()


# -- helpers ----------------------------------------------------------------------------


_FERMAT_UNARY = {
    "decomposition": lambda x: x,
    "st": lambda x: FermatReal(st(x)),
    "order": lambda x: FermatReal(order(x)),
    "orders": lambda x: [FermatReal(w) for w in orders(x)],
    "stdparts": lambda x: [FermatReal(c) for c in std_parts(x)],
    "isreal": is_real,
    "isinfinitesimal": is_infinitesimal,
    "isinvertible": is_invertible,
}


def _arity(name: str, args, k: int) -> None:
    if len(args) != k:
        raise DomainError(f"{name}: expected {k} argument{'s' if k > 1 else ''}, got {len(args)}")


def _is_n(node) -> bool:
    return isinstance(node, syntax.Name) and node.id == "n"


def _is_hyper(v) -> bool:
    return isinstance(v, (Hyper, HyperFrac))


def _hyper_operand(v):
    if _is_hyper(v):
        return v
    if isinstance(v, FermatReal) and is_real(v) and v.exact:
        return Hyper.const(v.std)
    if isinstance(v, (int, Fraction)):
        return Hyper.const(v)
    raise DomainError("ultrapower classes only combine with exact standard reals")


def _fermat(v, op: str) -> FermatReal:
    if isinstance(v, FermatReal):
        return v
    if isinstance(v, bool):
        return FermatReal(int(v))
    if isinstance(v, (int, Fraction, float)):
        return FermatReal(v)
    raise DomainError(f"{op}: expected a Fermat real, got {type(v).__name__}")


def _negate(v):
    if _is_hyper(v):
        return -v if isinstance(v, Hyper) else HyperFrac(-v.num, v.den)
    return -_fermat(v, "-")


def _standard(v, op: str):
    x = _fermat(v, op)
    if not is_real(x):
        raise DomainError(f"{op}: expected a standard real, got {format_fermat(x)}")
    return x.std


def _rational(node, session: Session) -> Fraction:
    """A rational argument such as an order or exponent, read exactly even in approx mode."""
    try:
        return smooth._literal_value(node)
    except ValueError:
        pass
    v = _standard(session.eval(node), "order")
    return Fraction(v).limit_denominator(10**6) if isinstance(v, float) else as_fraction(v)


def _natural(session: Session, node) -> int:
    k = _rational(node, session)
    if k.denominator != 1 or k < 0:
        raise DomainError(f"expected a natural number, got {format_rational(k)}")
    return int(k)


# -- command line -----------------------------------------------------------------------


def _exit_code(err: Exception) -> int:
    if isinstance(err, ParseError):
        return EXIT_PARSE
    if isinstance(err, OSError):
        return EXIT_IO
    return EXIT_DOMAIN


def run_lines(session: Session, lines, out, transcript: bool = False, stop_on_error: bool = True) -> int:
    """Evaluate lines, writing payloads to ``out``; returns the exit code."""
    status = EXIT_OK
    for line in lines:
        try:
            if transcript:
                if line.strip():
                    out.write(session.transcript_line(line))
            else:
                payload = session.execute(line)[1]
                if payload is not None:
                    out.write(payload + "\n")
        except (InfinitesimalError, ValueError, ZeroDivisionError, OSError) as err:
            print(f"error: {err}", file=sys.stderr)
            status = status or _exit_code(err)
            if stop_on_error:
                return status
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infinitesimal", description=__doc__.split("\n\n")[0])
    p.add_argument("--mode", choices=("exact", "approx"), default="exact")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="prefer-in")
    p.add_argument("--batch", metavar="FILE", help="evaluate the statements in FILE")
    p.add_argument("--format", choices=FORMATS, default="csv", help="plot format when the file name does not decide it")
    p.add_argument("--transcript", action="store_true", help="echo each statement with a name header")
    p.add_argument("--eval", metavar="STMT", action="append", default=[], help="evaluate STMT (repeatable)")
    p.add_argument("--oracle-log", metavar="FILE", help="write the oracle query log to FILE")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    session = Session(args.mode, args.strategy, args.format)
    out = sys.stdout
    if args.batch:
        try:
            lines = Path(args.batch).read_text().splitlines()
        except OSError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_IO
        status = run_lines(session, lines, out, args.transcript)
    elif args.eval:
        status = run_lines(session, args.eval, out, args.transcript)
    else:
        status = _interactive(session, args.transcript)
    if args.oracle_log:
        try:
            Path(args.oracle_log).write_text(session.oracle.log_text())
        except OSError as err:
            print(f"error: {err}", file=sys.stderr)
            return status or EXIT_IO
    return status


def _interactive(session: Session, transcript: bool) -> int:
    if not sys.stdin.isatty():
        return run_lines(session, sys.stdin.read().splitlines(), sys.stdout, transcript)
    status = EXIT_OK
    while True:
        try:
            line = input(">> ")
        except EOFError:
            print()
            return status
        if line.strip() in ("exit", "quit"):
            return status
        status = run_lines(session, [line], sys.stdout, transcript, stop_on_error=False) or status


if __name__ == "__main__":
    sys.exit(main())
