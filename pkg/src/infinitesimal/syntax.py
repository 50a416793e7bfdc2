"""Tokenizer and Pratt parser for the calculator language.

The same grammar serves the command line (statements, comparisons, calls such
as ``dt(3)`` or ``ext(sin, x)``) and plain smooth-function expressions::

    statement  := [NAME '='] expr [';']
    expr       := conj ('|' conj)*
    conj       := comparison ('&' comparison)*
    comparison := sum [cmp sum]            cmp in  == ~= != < <= > >=
    sum        := product (('+'|'-') product)*
    product    := unary (('*'|'/'|'%') unary)*
    unary      := ('-'|'+'|'~') unary | power
    power      := postfix ['^' unary]      (right associative)
    postfix    := atom ['(' arg (',' arg)* ')']
    arg        := expr [':' expr]          (a guarded branch, used by seq)
    atom       := NUMBER | NAME | DT_LITERAL | STRING | '(' expr ')' | '{' [expr (',' expr)*] '}'

``dt`` alone and ``dt_W`` (``W`` an integer or ``p/q`` without spaces) are
literals for the basic infinitesimals, so printed decompositions parse back.
The operators ``| & ~ %`` and set literals ``{1,2}`` serve index-set
descriptions such as ``n%2==0 | {1,3}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<dtlit>dt_\d+(?:/\d+)?(?![\w.]))
  | (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<string>'[^']*'|"[^"]*")
  | (?P<op>==|~=|!=|<=|>=|[-+*/^(),=<>;:%&|~{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int  # 1-based


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


# -- syntax tree ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    text: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)

    @property
    def is_integer(self) -> bool:
        return self.text.isdigit()


@dataclass(frozen=True)
class Name:
    id: str
    column: int = 0


@dataclass(frozen=True)
class DtLit:
    order: Fraction


@dataclass(frozen=True)
class Str:
    text: str


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    column: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class SetLit:
    items: tuple


@dataclass(frozen=True)
class Branch:
    guard: "Node"
    value: "Node"


Node = Union[Num, Name, DtLit, Str, Call, BinOp, Unary, Compare, SetLit, Branch]


@dataclass(frozen=True)
class Statement:
    target: Optional[str]
    expr: Node
    silent: bool = False


_COMPARISONS = {"==", "~=", "!=", "<", "<=", ">", ">="}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.column)
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "end"

    def statement(self) -> Statement:
        target = None
        if (
            self.tok.kind == "name"
            and self.tokens[self.i + 1].text == "="
        ):
            target = self.advance().text
            self.advance()
        expr = self.expr()
        silent = False
        if self.tok.text == ";":
            self.advance()
            silent = True
        if not self.at_end():
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.column)
        return Statement(target, expr, silent)

    def expr(self) -> Node:
        left = self.conj()
        while self.tok.text == "|":
            self.advance()
            left = BinOp("|", left, self.conj())
        return left

    def conj(self) -> Node:
        left = self.comparison()
        while self.tok.text == "&":
            self.advance()
            left = BinOp("&", left, self.comparison())
        return left

    def comparison(self) -> Node:
        left = self.sum()
        if self.tok.text in _COMPARISONS:
            op = self.advance().text
            right = self.sum()
            if self.tok.text in _COMPARISONS:
                raise ParseError("comparisons do not chain", self.tok.column)
            return Compare("~=" if op == "!=" else op, left, right)
        return left

    def sum(self) -> Node:
        left = self.product()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            left = BinOp(op, left, self.product())
        return left

    def product(self) -> Node:
        left = self.unary()
        while self.tok.text in ("*", "/", "%"):
            op = self.advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Node:
        if self.tok.text in ("-", "+", "~"):
            op = self.advance().text
            operand = self.unary()
            return operand if op == "+" else Unary(op, operand)
        return self.power()

    def power(self) -> Node:
        base = self.postfix()
        if self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def postfix(self) -> Node:
        atom = self.atom()
        if isinstance(atom, Name) and self.tok.text == "(":
            self.advance()
            args = []
            if self.tok.text != ")":
                args.append(self.arg())
                while self.tok.text == ",":
                    self.advance()
                    args.append(self.arg())
            self.expect(")")
            return Call(atom.id, tuple(args), atom.column)
        return atom

    def arg(self) -> Node:
        node = self.expr()
        if self.tok.text == ":":
            self.advance()
            return Branch(node, self.expr())
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Num(t.text)
        if t.kind == "dtlit":
            self.advance()
            return DtLit(Fraction(t.text[3:]))
        if t.kind == "name":
            self.advance()
            if t.text == "dt" and self.tok.text != "(":
                return DtLit(Fraction(1))
            return Name(t.text, t.column)
        if t.kind == "string":
            self.advance()
            return Str(t.text[1:-1])
        if t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.text == "{":
            self.advance()
            items = []
            if self.tok.text != "}":
                items.append(self.expr())
                while self.tok.text == ",":
                    self.advance()
                    items.append(self.expr())
            self.expect("}")
            return SetLit(tuple(items))
        found = t.text or "end of input"
        raise ParseError(f"unexpected {found!r}", t.column)


def parse_statement(text: str) -> Statement:
    return _Parser(text).statement()


def parse_expression(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if not p.at_end():
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.column)
    return node


def free_names(node: Node, exclude=frozenset()) -> list[str]:
    """Names occurring in ``node`` outside call position, in order of first appearance."""
    seen: list[str] = []

    def walk(n):
        if isinstance(n, Name):
            if n.id not in seen and n.id not in exclude:
                seen.append(n.id)
        elif isinstance(n, Call):
            for a in n.args:
                walk(a)
        elif isinstance(n, (BinOp, Compare)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Unary):
            walk(n.operand)
        elif isinstance(n, SetLit):
            for a in n.items:
                walk(a)
        elif isinstance(n, Branch):
            walk(n.guard)
            walk(n.value)

    walk(node)
    return seen
