"""Boolean expressions: AST, evaluation, parsing and printing.

Concrete syntax::

    expr   := xor ('|' xor)*          -- sugar: a | b means ~(~a & ~b)
    xor    := and ('^' and)*
    and    := unary ('&' unary)*
    unary  := '~' unary | atom
    atom   := 't' | 'f' | IDENT | '(' expr ')'

Binary operators associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be non-empty")


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Bexp"


@dataclass(frozen=True)
class And:
    left: "Bexp"
    right: "Bexp"


@dataclass(frozen=True)
class Xor:
    left: "Bexp"
    right: "Bexp"


Bexp = Union[Var, Const, Not, And, Xor]

TRUE = Const(True)
FALSE = Const(False)


class UnboundVariable(KeyError):
    pass


class BexpSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def interp(b: Bexp, f: Mapping[str, bool]) -> bool:
    if isinstance(b, Var):
        try:
            return bool(f[b.name])
        except KeyError:
            raise UnboundVariable(b.name) from None
    if isinstance(b, Const):
        return b.value
    if isinstance(b, Not):
        return not interp(b.arg, f)
    if isinstance(b, And):
        return interp(b.left, f) and interp(b.right, f)
    if isinstance(b, Xor):
        return interp(b.left, f) != interp(b.right, f)
    raise TypeError(f"not a boolean expression: {b!r}")


def variables(b: Bexp) -> set[str]:
    if isinstance(b, Var):
        return {b.name}
    if isinstance(b, Const):
        return set()
    if isinstance(b, Not):
        return variables(b.arg)
    return variables(b.left) | variables(b.right)


def node_count(b: Bexp) -> int:
    if isinstance(b, (Var, Const)):
        return 1
    if isinstance(b, Not):
        return 1 + node_count(b.arg)
    return 1 + node_count(b.left) + node_count(b.right)


# -- printing -----------------------------------------------------------------

_PREC = {Xor: 1, And: 2, Not: 3, Var: 4, Const: 4}


def pretty(b: Bexp) -> str:
    """Render with the fewest parentheses the parser needs."""
    if isinstance(b, Var):
        return b.name
    if isinstance(b, Const):
        return "t" if b.value else "f"
    if isinstance(b, Not):
        inner = pretty(b.arg)
        return "~" + (inner if _PREC[type(b.arg)] >= 3 else f"({inner})")
    op = " & " if isinstance(b, And) else " ^ "
    p = _PREC[type(b)]
    left = pretty(b.left)
    right = pretty(b.right)
    if _PREC[type(b.left)] < p:
        left = f"({left})"
    if _PREC[type(b.right)] <= p:
        right = f"({right})"
    return left + op + right


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))", re.ASCII)
_WS = " \t\r\n\f\v"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in _WS:
            self.pos += 1

    def peek(self) -> str | None:
        self._skip()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        return m.group(1) or m.group(2)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise BexpSyntaxError("unexpected end of input", self.pos)
        self.pos += len(tok)
        return tok

    def expect(self, tok: str):
        self._skip()
        got = self.peek()
        if got != tok:
            what = "end of input" if got is None else repr(got)
            raise BexpSyntaxError(f"expected {tok!r}, found {what}", self.pos)
        self.take()

    def expr(self) -> Bexp:
        b = self.xor()
        while self.peek() == "|":
            self.take()
            b = Not(And(Not(b), Not(self.xor())))
        return b

    def xor(self) -> Bexp:
        b = self.conj()
        while self.peek() == "^":
            self.take()
            b = Xor(b, self.conj())
        return b

    def conj(self) -> Bexp:
        b = self.unary()
        while self.peek() == "&":
            self.take()
            b = And(b, self.unary())
        return b

    def unary(self) -> Bexp:
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Bexp:
        self._skip()
        start = self.pos
        tok = self.peek()
        if tok is None:
            raise BexpSyntaxError("unexpected end of input", self.pos)
        if tok == "(":
            self.take()
            b = self.expr()
            self.expect(")")
            return b
        if tok[0].isalpha() or tok[0] == "_":
            self.take()
            if tok == "t":
                return TRUE
            if tok == "f":
                return FALSE
            return Var(tok)
        raise BexpSyntaxError(f"unexpected {tok!r}", start)


def parse_bexp(text: str) -> Bexp:
    p = _Parser(text)
    b = p.expr()
    p._skip()
    if p.pos != len(text):
        raise BexpSyntaxError(f"unexpected {p.peek()!r}", p.pos)
    return b
