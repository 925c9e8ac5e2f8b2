"""Small symbolic expression language for pair and confinement functions.

Expressions are over one variable ``x``, numeric literals, and named
parameters, with unary ``neg, abs, sgn, exp, log, sinh, cosh, tanh, coth``
and binary ``+ - * / ^``.  The module provides a tokenizing parser with
byte-offset error reporting, numpy-backed evaluation, symbolic
differentiation (``d|x|/dx = sgn x``, ``d sgn x / dx = 0`` away from the
kink), constant folding, and a pretty printer whose output reparses to a
structurally equal tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = [
    "Node", "Num", "Var", "Param", "Unary", "Binary",
    "ExprError", "ParseError", "EvalError", "SingularEvaluationError",
    "parse", "evaluate", "differentiate", "simplify", "pretty",
    "param_names", "contains_var", "uses_ops",
]

UNARY_FUNCTIONS = ("abs", "sgn", "exp", "log", "sinh", "cosh", "tanh", "coth")
BINARY_OPS = ("+", "-", "*", "/", "^")


class ExprError(ValueError):
    """Base class for expression language errors."""


class ParseError(ExprError):
    """Syntax error carrying the byte offset and the tokens expected there."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {' or '.join(expected)})"
        super().__init__(detail)


class EvalError(ExprError):
    """Evaluation failure, e.g. a parameter without a bound value."""


class SingularEvaluationError(ExprError):
    """Evaluation produced a non-finite value (pole, log of <= 0, overflow)."""


# ---------------------------------------------------------------------------
# AST

class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    """The free variable x."""


@dataclass(frozen=True)
class Param(Node):
    name: str


@dataclass(frozen=True)
class Unary(Node):
    op: str
    arg: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            # skip leading space to point at the offending byte
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            if bad >= len(src):
                break
            raise ParseError(f"unexpected character {src[bad]!r}", bad)
        kind = m.lastgroup or "op"
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    """Recursive descent over the token list.

    Precedence, loosest first: additive, multiplicative, unary minus, power
    (right associative, so x^-2 and 2^3^2 parse the conventional way).
    """

    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, text: str) -> None:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            self.advance()
            return
        raise ParseError(f"found {tok.text!r}" if tok.kind != "end" else "input ended",
                         tok.pos, expected=(repr(text),))

    def parse(self) -> Node:
        node = self.additive()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input {tok.text!r}", tok.pos,
                             expected=("operator", "end of input"))
        return node

    def additive(self) -> Node:
        node = self.multiplicative()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.multiplicative())
        return node

    def multiplicative(self) -> Node:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            inner = self.unary()
            if tok.text == "+":
                return inner
            if isinstance(inner, Num):  # fold -3 into a literal
                return Num(-inner.value)
            return Unary("neg", inner)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "number":
            return Num(float(tok.text))
        if tok.kind == "ident":
            if self.peek().kind == "op" and self.peek().text == "(":
                if tok.text not in UNARY_FUNCTIONS:
                    raise ParseError(f"unknown function {tok.text!r}", tok.pos,
                                     expected=UNARY_FUNCTIONS)
                self.advance()
                arg = self.additive()
                self.expect_op(")")
                return Unary(tok.text, arg)
            return Var() if tok.text == "x" else Param(tok.text)
        if tok.kind == "op" and tok.text == "(":
            node = self.additive()
            self.expect_op(")")
            return node
        what = "input ended" if tok.kind == "end" else f"found {tok.text!r}"
        raise ParseError(what, tok.pos, expected=("number", "identifier", "'('"))


def parse(src: str) -> Node:
    """Parse an expression string; raises ParseError with a byte offset."""
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# evaluation

def _coth(u):
    return 1.0 / np.tanh(u)


_UNARY_EVAL = {
    "neg": np.negative,
    "abs": np.abs,
    "sgn": np.sign,
    "exp": np.exp,
    "log": np.log,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "coth": _coth,
}


def evaluate(node: Node, x, params: Mapping[str, float] | None = None,
             check: bool = True):
    """Evaluate at x (scalar or array) with parameter bindings.

    Raises EvalError for an unbound parameter and, when check is true,
    SingularEvaluationError if the result is non-finite anywhere.
    """
    params = params or {}
    val = _eval(node, np.asarray(x, dtype=float), params)
    val = np.asarray(val, dtype=float)
    if check and not np.all(np.isfinite(val)):
        raise SingularEvaluationError(
            f"expression {pretty(node)!r} is singular or overflows at the evaluation point")
    return val if val.ndim else float(val)


def _eval(node: Node, x: np.ndarray, params: Mapping[str, float]):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Param):
        try:
            return float(params[node.name])
        except KeyError:
            raise EvalError(f"parameter {node.name!r} has no bound value") from None
    if isinstance(node, Unary):
        with np.errstate(all="ignore"):
            return _UNARY_EVAL[node.op](_eval(node.arg, x, params))
    if isinstance(node, Binary):
        a = _eval(node.left, x, params)
        b = _eval(node.right, x, params)
        with np.errstate(all="ignore"):
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                return a / b
            return np.power(a, b)
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# differentiation

def differentiate(node: Node) -> Node:
    """d/dx, treating parameters as constants.

    abs differentiates to sgn and sgn to zero, which is the correct smooth
    branch away from the kink at the origin.
    """
    return simplify(_diff(node))


def _diff(node: Node) -> Node:
    if isinstance(node, (Num, Param)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Unary):
        u, du = node.arg, _diff(node.arg)
        outer = {
            "neg": lambda: Unary("neg", du),
            "abs": lambda: Binary("*", Unary("sgn", u), du),
            "sgn": lambda: Num(0.0),
            "exp": lambda: Binary("*", Unary("exp", u), du),
            "log": lambda: Binary("/", du, u),
            "sinh": lambda: Binary("*", Unary("cosh", u), du),
            "cosh": lambda: Binary("*", Unary("sinh", u), du),
            "tanh": lambda: Binary("*", Binary("-", Num(1.0), Binary("^", Unary("tanh", u), Num(2.0))), du),
            "coth": lambda: Binary("*", Binary("-", Num(1.0), Binary("^", Unary("coth", u), Num(2.0))), du),
        }[node.op]
        return outer()
    if isinstance(node, Binary):
        a, b = node.left, node.right
        da, db = _diff(a), _diff(b)
        if node.op == "+":
            return Binary("+", da, db)
        if node.op == "-":
            return Binary("-", da, db)
        if node.op == "*":
            return Binary("+", Binary("*", da, b), Binary("*", a, db))
        if node.op == "/":
            num = Binary("-", Binary("*", da, b), Binary("*", a, db))
            return Binary("/", num, Binary("^", b, Num(2.0)))
        # power: use the plain power rule whenever the exponent is x-free,
        # which keeps u^c valid for negative bases
        if not contains_var(b):
            return Binary("*", Binary("*", b, Binary("^", a, Binary("-", b, Num(1.0)))), da)
        if not contains_var(a):
            return Binary("*", Binary("*", Binary("^", a, b), Unary("log", a)), db)
        # general u^v = exp(v log u)
        inner = Binary("+", Binary("*", db, Unary("log", a)),
                       Binary("/", Binary("*", b, da), a))
        return Binary("*", Binary("^", a, b), inner)
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# simplification: constant folding plus neutral-element pruning

def simplify(node: Node) -> Node:
    if isinstance(node, Unary):
        arg = simplify(node.arg)
        if isinstance(arg, Num):
            return Num(float(_UNARY_EVAL[node.op](arg.value)))
        return Unary(node.op, arg)
    if not isinstance(node, Binary):
        return node
    a = simplify(node.left)
    b = simplify(node.right)
    if isinstance(a, Num) and isinstance(b, Num):
        folded = evaluate(Binary(node.op, a, b), 0.0, check=False)
        if np.isfinite(folded):
            return Num(float(folded))
        return Binary(node.op, a, b)  # e.g. 1/0: keep, let evaluation flag it
    op = node.op
    if op == "+":
        if _is_num(a, 0.0):
            return b
        if _is_num(b, 0.0):
            return a
    elif op == "-":
        if _is_num(b, 0.0):
            return a
        if _is_num(a, 0.0):
            return b if isinstance(b, Num) else Unary("neg", b)
    elif op == "*":
        if _is_num(a, 0.0) or _is_num(b, 0.0):
            return Num(0.0)
        if _is_num(a, 1.0):
            return b
        if _is_num(b, 1.0):
            return a
    elif op == "/":
        if _is_num(a, 0.0) and not _is_num(b, 0.0):
            return Num(0.0)
        if _is_num(b, 1.0):
            return a
    elif op == "^":
        if _is_num(b, 1.0):
            return a
        if _is_num(b, 0.0):
            return Num(1.0)
    return Binary(op, a, b)


def _is_num(node: Node, v: float) -> bool:
    return isinstance(node, Num) and node.value == v


# ---------------------------------------------------------------------------
# pretty printer

# binding levels, loosest to tightest; atoms sit at 5
_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def pretty(node: Node) -> str:
    """Render with minimal parentheses; parse(pretty(t)) is structurally t
    for any parsed or simplified tree."""
    return _render(node, 0)


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _intrinsic(node: Node) -> int:
    if isinstance(node, Num):
        return _LEVEL["neg"] if node.value < 0 else _ATOM
    if isinstance(node, Unary):
        return _LEVEL["neg"] if node.op == "neg" else _ATOM
    if isinstance(node, Binary):
        return _LEVEL[node.op]
    return _ATOM


def _render(node: Node, min_level: int) -> str:
    if isinstance(node, Num):
        s = _fmt_num(node.value)
    elif isinstance(node, Var):
        s = "x"
    elif isinstance(node, Param):
        s = node.name
    elif isinstance(node, Unary):
        if node.op == "neg":
            s = f"-{_render(node.arg, _LEVEL['neg'])}"
        else:
            s = f"{node.op}({_render(node.arg, 0)})"
    elif isinstance(node, Binary):
        lvl = _LEVEL[node.op]
        if node.op == "^":
            # right associative; the grammar parses the exponent as a unary,
            # so a leading minus there needs no parentheses
            s = f"{_render(node.left, _ATOM)}^{_render(node.right, _LEVEL['neg'])}"
        else:
            s = f"{_render(node.left, lvl)} {node.op} {_render(node.right, lvl + 1)}"
    else:
        raise TypeError(f"not an expression node: {node!r}")
    return f"({s})" if _intrinsic(node) < min_level else s


# ---------------------------------------------------------------------------
# queries

def param_names(node: Node) -> set[str]:
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, Unary):
        return param_names(node.arg)
    if isinstance(node, Binary):
        return param_names(node.left) | param_names(node.right)
    return set()


def contains_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Unary):
        return contains_var(node.arg)
    if isinstance(node, Binary):
        return contains_var(node.left) or contains_var(node.right)
    return False


def uses_ops(node: Node, ops: tuple[str, ...]) -> bool:
    """True when any listed unary op appears in the tree (e.g. abs, sgn)."""
    if isinstance(node, Unary):
        return node.op in ops or uses_ops(node.arg, ops)
    if isinstance(node, Binary):
        return uses_ops(node.left, ops) or uses_ops(node.right, ops)
    return False
