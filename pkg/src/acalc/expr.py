"""Expression language: tokenizer, recursive-descent parser, AST and evaluators.

Grammar (``^`` is right associative and binds tighter than unary minus)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary | <implicit> power)*
    unary   := ("+" | "-") unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

A number directly followed by a name or parenthesis multiplies implicitly
(``4j``, ``2(1+j)``). Identifiers may carry trailing primes (``w''``).
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import functions as fn
from .algebra import Algebra, Element, mul
from .errors import ParseError

CALLS = ("exp", "log", "sqrt", "cos", "sin", "cosh", "sinh", "pow")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*'*)
  | (?P<op>[-+*/^(),=;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def tokenize(text: str, col_offset: int = 0) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1 + col_offset)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos + 1 + col_offset))
        pos = m.end()
    out.append(Token("end", "", len(text) + 1 + col_offset))
    return out


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float
    col: int = 0


@dataclass(frozen=True)
class Name:
    id: str
    col: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    col: int = 0


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"
    col: int = 0


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple
    col: int = 0


Node = Union[Num, Name, Unary, Bin, Call]


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", column=self.tok.col)
        return self.advance()

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            t = self.advance()
            node = Bin(t.text, node, self.term(), t.col)
        return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            t = self.tok
            if t.text in ("*", "/"):
                self.advance()
                node = Bin(t.text, node, self.unary(), t.col)
            elif isinstance(node, Num) and (t.kind == "ident" or t.text == "("):
                node = Bin("*", node, self.power(), t.col)
            else:
                return node

    def unary(self) -> Node:
        t = self.tok
        if t.text in ("+", "-"):
            self.advance()
            operand = self.unary()
            return operand if t.text == "+" else Unary("-", operand, t.col)
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.tok.text == "^":
            t = self.advance()
            return Bin("^", base, self.unary(), t.col)
        return base

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text), t.col)
        if t.kind == "ident":
            self.advance()
            if self.tok.text == "(" and t.text in CALLS:
                self.advance()
                args = [self.expr()]
                while self.tok.text == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                want = 2 if t.text == "pow" else 1
                if len(args) != want:
                    raise ParseError(f"{t.text} takes {want} argument(s), got {len(args)}",
                                     column=t.col)
                return Call(t.text, tuple(args), t.col)
            if t.text in CALLS:
                raise ParseError(f"{t.text} must be called with parentheses", column=t.col)
            return Name(t.text, t.col)
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise ParseError(f"unexpected {found!r}", column=t.col)


def parse_expr(text: str, col_offset: int = 0) -> Node:
    p = _Parser(tokenize(text, col_offset))
    node = p.expr()
    if p.tok.kind != "end":
        raise ParseError(f"unexpected {p.tok.text!r}", column=p.tok.col)
    return node


def names_in(node: Node) -> set:
    if isinstance(node, Name):
        return {node.id}
    if isinstance(node, Unary):
        return names_in(node.operand)
    if isinstance(node, Bin):
        return names_in(node.left) | names_in(node.right)
    if isinstance(node, Call):
        return set().union(*(names_in(a) for a in node.args))
    return set()


def check_names(node: Node, allowed: Iterable[str], what: str = "name"):
    allowed = set(allowed)

    def walk(n):
        if isinstance(n, Name) and n.id not in allowed:
            raise ParseError(f"unknown {what} {n.id!r}", column=n.col)
        for child in _children(n):
            walk(child)

    walk(node)


def _children(n: Node):
    if isinstance(n, Unary):
        return (n.operand,)
    if isinstance(n, Bin):
        return (n.left, n.right)
    if isinstance(n, Call):
        return n.args
    return ()


def to_text(node: Node) -> str:
    if isinstance(node, Num):
        v = node.value
        return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    if isinstance(node, Name):
        return node.id
    if isinstance(node, Unary):
        return f"-({to_text(node.operand)})"
    if isinstance(node, Bin):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    return f"{node.fn}({', '.join(to_text(a) for a in node.args)})"


# ---------------------------------------------------------------------------
# evaluation


def _lift(A: Optional[Algebra], v):
    if isinstance(v, numbers.Real) and A is not None:
        return A.scalar(float(v))
    return v


def _call(name: str, args, A: Optional[Algebra]):
    if name == "pow":
        base, ex = args
        if isinstance(base, numbers.Real) and isinstance(ex, numbers.Real) and base > 0:
            return float(base) ** float(ex)
        return _power(base, ex, A)
    (x,) = args
    if isinstance(x, numbers.Real):
        if A is None:
            return getattr(math, name)(float(x))
        x = A.scalar(float(x))
    if not isinstance(x, Element):
        raise TypeError(f"{name} needs a number, got {type(x).__name__}")
    return fn.FUNCTIONS[name](x)


def _power(base, ex, A: Optional[Algebra]):
    if isinstance(ex, numbers.Real) and float(ex).is_integer():
        return base ** int(ex)
    if isinstance(base, numbers.Real):
        B = ex.algebra if isinstance(ex, Element) else A
        if B is None:
            return float(base) ** float(ex)
        base = B.scalar(float(base))
    if isinstance(base, Element):
        return fn.power(base, ex)
    return base ** ex


def evaluate(node: Node, env: Mapping[str, object], algebra: Optional[Algebra] = None):
    """Evaluate with Python operators; numbers stay floats until combined."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        try:
            return env[node.id]
        except KeyError:
            raise ParseError(f"unknown name {node.id!r}", column=node.col) from None
    if isinstance(node, Unary):
        return -evaluate(node.operand, env, algebra)
    if isinstance(node, Call):
        return _call(node.fn, [evaluate(a, env, algebra) for a in node.args], algebra)
    left = evaluate(node.left, env, algebra)
    right = evaluate(node.right, env, algebra)
    op = node.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if isinstance(right, numbers.Real) and isinstance(left, numbers.Real):
            return left / right if right != 0 else _lift(algebra, left) / _lift(algebra, right)
        return left / right
    return _power(left, right, algebra)


def algebra_env(A: Algebra) -> dict:
    env = {label: A.basis(i) for i, label in enumerate(A.basis_labels) if label != "1"}
    return env


def eval_element(text: str, A: Algebra, extra: Optional[Mapping] = None,
                 col_offset: int = 0) -> Element:
    """Parse and evaluate ``text`` to an element of ``A``."""
    node = parse_expr(text, col_offset)
    env = algebra_env(A)
    if extra:
        env.update(extra)
    check_names(node, env)
    val = evaluate(node, env, A)
    val = _lift(A, val)
    if not isinstance(val, Element):
        raise ParseError(f"expression does not evaluate to a number: {text!r}")
    return val


# ---------------------------------------------------------------------------
# linear forms in w, w', ... with optional powers of z


class LinForm:
    """Finite sum ``sum c * z^p * w^(k)``; key ``(k, p)`` with ``k = -1`` for w-free terms."""

    __array_priority__ = 2000

    def __init__(self, A: Algebra, terms: Mapping):
        self.algebra = A
        self.terms = {k: v for k, v in terms.items() if np.any(v.coords)}

    @classmethod
    def const(cls, A: Algebra, c) -> "LinForm":
        return cls(A, {(-1, 0): _lift(A, c)})

    def _coerce(self, o):
        if isinstance(o, LinForm):
            return o
        if isinstance(o, (numbers.Real, Element)):
            return LinForm.const(self.algebra, o)
        return None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t[k] + v if k in t else v
        return LinForm(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return LinForm(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if self.has_w and o.has_w:
            raise ParseError("equation is not linear in w")
        t = {}
        for (k1, p1), a in self.terms.items():
            for (k2, p2), b in o.terms.items():
                key = (max(k1, k2), p1 + p2)
                val = mul(a, b)
                t[key] = t[key] + val if key in t else val
        return LinForm(self.algebra, t)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, LinForm):
            if o.has_w or any(p for (_, p) in o.terms):
                raise ParseError("cannot divide by w or z")
            o = o.terms.get((-1, 0), self.algebra.zero())
        inv = _lift(self.algebra, o)
        inv = inv.inverse()
        return LinForm(self.algebra, {k: mul(v, inv) for k, v in self.terms.items()})

    def __pow__(self, n):
        if isinstance(n, LinForm):
            if n.has_w or any(p for (_, p) in n.terms):
                raise ParseError("exponent must be a constant")
            n = n.terms.get((-1, 0), self.algebra.zero())
            if np.abs(n.coords - n.coords[0] * self.algebra.unity).max() > 0:
                raise ParseError("exponent must be a real integer")
            n = float(n.coords @ self.algebra.unity) / float(self.algebra.unity @ self.algebra.unity)
        if not float(n).is_integer() or n < 0:
            raise ParseError("only non-negative integer powers of z or w are allowed")
        out = LinForm.const(self.algebra, 1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    @property
    def has_w(self) -> bool:
        return any(k >= 0 for (k, _) in self.terms)


def parse_linear_lhs(node: Node, A: Algebra, var: str = "w", allow_z: bool = False) -> dict:
    """Collect ``{(order, zpow): coefficient}`` from an expression linear in ``var``."""
    env = algebra_env(A)
    for k in range(9):
        env[var + "'" * k] = LinForm(A, {(k, 0): A.one()})
    if allow_z:
        env["z"] = LinForm(A, {(-1, 1): A.one()})
    check_names(node, env, "name")

    def lift(v):
        return v if isinstance(v, LinForm) else LinForm.const(A, v)

    def ev(n):
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Name):
            return env[n.id]
        if isinstance(n, Unary):
            return -ev(n.operand)
        if isinstance(n, Call):
            args = [ev(a) for a in n.args]
            if any(isinstance(a, LinForm) for a in args):
                raise ParseError(f"{n.fn} of w or z is not allowed in a linear equation",
                                 column=n.col)
            return _call(n.fn, args, A)
        l, r = ev(n.left), ev(n.right)
        try:
            if n.op == "+":
                return lift(l) + r if isinstance(r, LinForm) or isinstance(l, LinForm) else l + r
            if n.op == "-":
                return lift(l) - r if isinstance(r, LinForm) or isinstance(l, LinForm) else l - r
            if n.op == "*":
                return lift(l) * r if isinstance(r, LinForm) or isinstance(l, LinForm) else l * r
            if n.op == "/":
                return lift(l) / r if isinstance(l, LinForm) or isinstance(r, LinForm) else l / r
            if isinstance(l, LinForm):
                return l ** r
            if isinstance(r, LinForm):
                raise ParseError("exponent must be a constant", column=n.col)
            return _power(l, r, A)
        except ParseError as e:
            if e.column is None:
                raise ParseError(e.message, column=n.col) from None
            raise

    val = lift(ev(node))
    if any(k < 0 for (k, _) in val.terms):
        raise ParseError(f"equation has a term without {var}", column=getattr(node, "col", None))
    return val.terms


# ---------------------------------------------------------------------------
# vector fields


class FieldExpr:
    """Right-hand side ``f(z, y_1, ..., y_k)`` of a first-order system."""

    def __init__(self, algebra: Algebra, nodes: Sequence[Node], variables: Sequence[str],
                 point: str = "z", source: Optional[Sequence[str]] = None):
        self.algebra = algebra
        self.nodes = tuple(nodes)
        self.variables = tuple(variables)
        self.point = point
        self.source = tuple(source) if source is not None else tuple(to_text(n) for n in nodes)
        if len(self.nodes) != len(self.variables):
            raise ValueError("need one expression per variable")
        allowed = set(algebra_env(algebra)) | set(self.variables) | {point}
        for n in self.nodes:
            check_names(n, allowed)

    @classmethod
    def parse(cls, algebra: Algebra, exprs: Union[str, Sequence[str]],
              variables: Optional[Sequence[str]] = None, point: str = "z") -> "FieldExpr":
        if isinstance(exprs, str):
            exprs = [exprs]
        if variables is None:
            variables = ["w"] if len(exprs) == 1 else [f"w{i + 1}" for i in range(len(exprs))]
        return cls(algebra, [parse_expr(e) for e in exprs], variables, point, exprs)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def __call__(self, zeta: Element, ys: Sequence[Element]) -> list:
        env = algebra_env(self.algebra)
        env[self.point] = zeta
        env.update(zip(self.variables, ys))
        return [_lift(self.algebra, evaluate(n, env, self.algebra)) for n in self.nodes]

    def __repr__(self):
        return f"FieldExpr({self.algebra.name}, {list(self.source)})"


def as_field(f, algebra: Algebra) -> Callable:
    """Accept a :class:`FieldExpr` or a callable ``(zeta, ys) -> sequence``."""
    if isinstance(f, FieldExpr):
        return f
    return lambda z, ys: [_lift(algebra, v) for v in f(z, ys)]
