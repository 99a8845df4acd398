"""Closed-form scalar expressions in one variable ``x``.

A small recursive-descent parser for initial-data strings such as
``"-pi*sin(pi*x)"``. Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right-associative
    primary := NUMBER | 'x' | 'pi' | FUNC '(' expr ')' | '(' expr ')'

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Evaluation accepts
scalars or numpy arrays and raises :class:`DomainError` instead of
returning NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs")
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(
                f"unexpected character {source[pos]!r}", _byte_offset(source, pos), source
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None) -> ExprSyntaxError:
        tok = tok or self.peek()
        where = "end of input" if tok[0] == "end" else repr(tok[1])
        return ExprSyntaxError(
            f"{message} (found {where})", _byte_offset(self.source, tok[2]), self.source
        )

    def expect(self, op: str):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}")
        return self.advance()

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.peek()
        kind, text, _ = tok
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if text == "x":
                return Var()
            if text in CONSTANTS:
                return Const(text)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownIdentifier(
                f"unknown identifier {text!r}", _byte_offset(self.source, tok[2]), self.source
            )
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected a number, name or '('")


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ExprSyntaxError` (with a byte offset) on malformed input
    and :class:`UnknownIdentifier` for names other than ``x``, ``pi`` and the
    supported functions.
    """
    return _Parser(source).parse()


# -- printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def _fmt_num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_string(e: Expr) -> str:
    """Canonical text form; ``parse(to_string(e)) == e`` for parsed trees."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_string(e.arg)})"
    if isinstance(e, Neg):
        inner = to_string(e.operand)
        # a power operand binds tighter than unary minus; anything looser needs parens
        if _prec(e.operand) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[e.op]
    left, right = to_string(e.left), to_string(e.right)
    if e.op == "^":
        # base must be an atom; exponent may be any unary-level node
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    # left-associative: a right operand of equal precedence needs parens
    if _prec(e.right) <= p:
        right = f"({right})"
    sep = f" {e.op} " if p == 1 else e.op
    return f"{left}{sep}{right}"


# -- evaluation --------------------------------------------------------------


def _check(result, what: str):
    if np.any(np.isnan(result)):
        raise DomainError(f"{what} produced NaN", 0)
    if np.any(np.isinf(result)):
        raise DomainError(f"{what} overflowed", 0)
    return result


def _eval(e: Expr, x):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, Call):
        v = _eval(e.arg, x)
        if e.func == "sqrt":
            if np.any(np.asarray(v) < 0):
                raise DomainError("sqrt of a negative number", 0)
            return np.sqrt(v)
        if e.func == "exp":
            with np.errstate(over="ignore"):
                return _check(np.exp(v), "exp")
        return getattr(np, e.func)(v)
    left = _eval(e.left, x)
    right = _eval(e.right, x)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if e.op == "/":
        if np.any(np.asarray(right) == 0):
            raise DomainError("division by zero", 0)
        return left / right
    base = np.asarray(left, dtype=float)
    expo = np.asarray(right, dtype=float)
    if np.any((base < 0) & (expo != np.round(expo))):
        raise DomainError("non-integer power of a negative number", 0)
    if np.any((base == 0) & (expo < 0)):
        raise DomainError("zero raised to a negative power", 0)
    with np.errstate(over="ignore"):
        return _check(np.power(base, expo), "power")


def evaluate(e: Expr, x):
    """Evaluate ``e`` at ``x`` (scalar or array); scalars give a float."""
    with np.errstate(all="ignore"):
        out = _eval(e, np.asarray(x, dtype=float))
    out = _check(np.asarray(out, dtype=float), "expression")
    if np.ndim(x) == 0:
        return float(out)
    return np.broadcast_to(out, np.shape(x)).copy()


class Function:
    """A parsed expression wrapped as a callable ``f(x)``."""

    __slots__ = ("source", "tree")

    def __init__(self, source: str):
        self.source = source
        self.tree = parse(source)

    def __call__(self, x):
        return evaluate(self.tree, x)

    def __repr__(self):
        return f"Function({self.source!r})"

    def __eq__(self, other):
        return isinstance(other, Function) and other.tree == self.tree

    def __hash__(self):
        return hash(self.tree)
