"""Formula language for surfaces and curves.

Surfaces and profile curves are specified as plain-text formulas (read from
TOML documents), parsed into small expression trees and evaluated either as
floats or as truncated Taylor jets.  The grammar is deliberately tiny:

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)*
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and only accepts literal integer
exponents, so polynomial inputs stay polynomial-exact in jet arithmetic.
Recognized functions: sin, cos, exp, sqrt, abs.  Recognized constant: pi.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .jets import Jet2, jet_elementary

__all__ = [
    "ParseError",
    "Expr",
    "Num",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "parse",
    "to_source",
    "eval_scalar",
    "eval_jet",
    "variables_of",
    "uses_function",
]

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs")
CONSTANTS = {"pi": math.pi}


class ParseError(ValueError):
    """Raised on malformed formula text; carries the byte offset."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


# -- AST ----------------------------------------------------------------------


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # '+', '-', '*', '/'
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[()+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number' | 'name' | 'op' | 'end'
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
                             tok.offset, expected=(repr(op),))
        self.advance()

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        node = self.parse_atom()
        while self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "number" or not re.fullmatch(r"\d+", tok.text):
                raise ParseError("power needs a literal integer exponent",
                                 tok.offset, expected=("integer",))
            self.advance()
            node = Pow(node, int(tok.text))
        return node

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {tok.text!r}", tok.offset,
                                     expected=FUNCTIONS)
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in CONSTANTS:
                return Const(tok.text)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
                         tok.offset, expected=("number", "name", "'('"))


def parse(source: str) -> Expr:
    parser = _Parser(_tokenize(source))
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.offset, expected=("end",))
    return node


# -- printing (round-trips through parse) --------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Pow):
        return _PREC["^"]
    return _PREC["atom"]


def to_source(node: Expr) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.arg)
        if _prec(node.arg) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        inner = to_source(node.base)
        if _prec(node.base) <= _PREC["^"]:
            inner = f"({inner})"
        return f"{inner}^{node.exponent}"
    if isinstance(node, BinOp):
        left = to_source(node.left)
        right = to_source(node.right)
        if _prec(node.left) < _PREC[node.op]:
            left = f"({left})"
        # left-associative: parenthesize right child at equal precedence
        if _prec(node.right) <= _PREC[node.op]:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation -----------------------------------------------------------------


def variables_of(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Neg):
        return variables_of(node.arg)
    if isinstance(node, Call):
        return variables_of(node.arg)
    if isinstance(node, Pow):
        return variables_of(node.base)
    if isinstance(node, BinOp):
        return variables_of(node.left) | variables_of(node.right)
    return set()


def uses_function(node: Expr, fn: str) -> bool:
    if isinstance(node, Call):
        return node.fn == fn or uses_function(node.arg, fn)
    if isinstance(node, Neg):
        return uses_function(node.arg, fn)
    if isinstance(node, Pow):
        return uses_function(node.base, fn)
    if isinstance(node, BinOp):
        return uses_function(node.left, fn) or uses_function(node.right, fn)
    return False


def eval_scalar(node: Expr, env: dict[str, float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise ValueError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -eval_scalar(node.arg, env)
    if isinstance(node, Pow):
        return eval_scalar(node.base, env) ** node.exponent
    if isinstance(node, Call):
        arg = eval_scalar(node.arg, env)
        return getattr(math, node.fn)(arg) if node.fn != "abs" else abs(arg)
    if isinstance(node, BinOp):
        a = eval_scalar(node.left, env)
        b = eval_scalar(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet(node: Expr, env: dict[str, Jet2]) -> Jet2:
    """Evaluate an expression tree in jet arithmetic.

    ``env`` maps variable names to coordinate jets sharing base and order.
    """
    sample = next(iter(env.values()))
    base, order = sample.base, sample.order

    def ev(n: Expr) -> Jet2:
        if isinstance(n, Num):
            return Jet2.constant(n.value, base, order)
        if isinstance(n, Var):
            try:
                return env[n.name]
            except KeyError:
                raise ValueError(f"unbound variable {n.name!r}") from None
        if isinstance(n, Const):
            return Jet2.constant(CONSTANTS[n.name], base, order)
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Pow):
            return ev(n.base) ** n.exponent
        if isinstance(n, Call):
            return jet_elementary(ev(n.arg), n.fn)
        if isinstance(n, BinOp):
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            return a / b
        raise TypeError(f"not an expression node: {n!r}")

    return ev(node)
