"""Line-oriented specification files for algebras, operators and fields.

Statements (``#`` starts a comment)::

    algebra NAME dim N basis L1 ... LN     followed by   mul Li Lj = <expr>
    algebra NAME = R[x]/(<real monic polynomial in x>)
    algebra NAME = product(A, B, ...)
    algebra NAME = extend(BASE, <monic polynomial in x over BASE>)
    ode NAME over ALG : <linear expression in w, w', w'', ...> = 0
    field NAME over ALG : w' = <expr in z, w>        (systems: w1' = ...; w2' = ...)

Products with the unity ``1`` are implied in a ``mul`` table; every other
unordered pair of labels needs exactly one row.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import Algebra
from .construct import (REALS, APolynomial, direct_product, extend, from_presentation,
                        named_algebra)
from .errors import AlgebraError, ParseError
from .expr import (FieldExpr, Node, Num, algebra_env, check_names, evaluate, parse_expr,
                   parse_linear_lhs)
from .linear.cauchy_euler import CauchyEulerProblem
from .linear.operators import ConstCoeffOperator

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_LABEL_RE = re.compile(r"^(?:1|[A-Za-z_][A-Za-z_0-9]*(?:[\^*][A-Za-z_0-9]+)*)$")


def builtin_algebra(name: str) -> Optional[Algebra]:
    """``R``, ``C``, ``H``, ``Gamma`` and the families ``Hn`` / ``Cn`` (e.g. ``H3``)."""
    if name == "R":
        return REALS
    if name == "C":
        return named_algebra("Cn", 2)
    if name == "H":
        return named_algebra("Hn", 2)
    if name in ("Gamma", "G"):
        return named_algebra("Gamma")
    m = re.fullmatch(r"([HC])(\d+)", name)
    if m and int(m.group(2)) >= 1:
        return named_algebra(m.group(1) + "n", int(m.group(2)))
    return None


@dataclass(frozen=True)
class OdeDef:
    name: str
    algebra: Algebra
    kind: str  # "constant" or "cauchy-euler"
    operator: Optional[ConstCoeffOperator]
    problem: Optional[CauchyEulerProblem]
    source: str
    line: int


@dataclass(frozen=True)
class FieldDef:
    name: str
    algebra: Algebra
    field: FieldExpr
    source: str
    line: int


@dataclass
class SpecDocument:
    algebras: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    odes: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def algebra(self, name: str) -> Algebra:
        if name in self.algebras:
            return self.algebras[name]
        A = builtin_algebra(name)
        if A is None:
            raise ParseError(f"unknown algebra {name!r}")
        return A


class _Vec:
    """Coordinate vector for ``mul`` right-hand sides (linear in labels only)."""

    def __init__(self, c, unity):
        self.c = np.asarray(c, dtype=float)
        self.unity = unity

    def _other(self, o) -> np.ndarray:
        return o.c if isinstance(o, _Vec) else float(o) * self.unity

    def __add__(self, o):
        return _Vec(self.c + self._other(o), self.unity)

    __radd__ = __add__

    def __sub__(self, o):
        return _Vec(self.c - self._other(o), self.unity)

    def __rsub__(self, o):
        return _Vec(self._other(o) - self.c, self.unity)

    def __neg__(self):
        return _Vec(-self.c, self.unity)

    def __mul__(self, o):
        if isinstance(o, _Vec):
            raise ParseError("products of basis labels are not allowed in a mul row")
        return _Vec(float(o) * self.c, self.unity)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, _Vec):
            raise ParseError("division by a basis label in a mul row")
        return _Vec(self.c / float(o), self.unity)

    def __pow__(self, o):
        raise ParseError("powers of basis labels are not allowed in a mul row")


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if line.strip():
                self.items.append((no, line))
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self):
        item = self.items[self.i]
        self.i += 1
        return item


def _located(fn, line: int):
    try:
        return fn()
    except ParseError as e:
        raise e.at_line(line) from None
    except AlgebraError as e:
        raise ParseError(str(e), line, None) from None


def _split_top(text: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def parse_spec(text: str) -> SpecDocument:
    doc = SpecDocument()
    lines = _Lines(text)
    while lines.peek() is not None:
        no, raw = lines.next()
        words = raw.split()
        head = words[0]
        if head == "algebra":
            _parse_algebra(doc, no, raw, lines)
        elif head == "ode":
            _parse_ode(doc, no, raw)
        elif head == "field":
            _parse_field(doc, no, raw)
        elif head == "mul":
            raise ParseError("mul row outside an explicit algebra definition", no, 1)
        else:
            raise ParseError(f"unknown statement {head!r}", no, raw.index(head) + 1)
    return doc


def _define(doc: SpecDocument, name: str, A: Algebra, no: int):
    if name in doc.algebras:
        raise ParseError(f"algebra {name!r} already defined", no, None)
    if builtin_algebra(name) is not None:
        doc.diagnostics.append(f"line {no}: algebra {name!r} shadows a builtin")
    doc.algebras[name] = A


def _parse_algebra(doc: SpecDocument, no: int, raw: str, lines: _Lines):
    m = re.match(rf"\s*algebra\s+({_NAME})\s*(.*)$", raw)
    if not m:
        raise ParseError("expected 'algebra NAME ...'", no, 1)
    name, rest = m.group(1), m.group(2)
    rest_col = m.start(2)
    if rest.startswith("="):
        body = rest[1:].strip()
        body_col = raw.index(body, rest_col) if body else len(raw)
        _define(doc, name, _located(lambda: _algebra_expr(doc, name, body, body_col), no), no)
        return
    m2 = re.match(r"dim\s+(\d+)\s+basis\s+(.+)$", rest)
    if not m2:
        raise ParseError("expected 'dim N basis L1 ... LN' or '= ...'", no, rest_col + 1)
    n = int(m2.group(1))
    labels = m2.group(2).split()
    if len(labels) != n:
        raise ParseError(f"dim {n} but {len(labels)} basis labels", no, rest_col + m2.start(2) + 1)
    for lab in labels:
        if not _LABEL_RE.match(lab):
            raise ParseError(f"invalid basis label {lab!r}", no, raw.index(lab) + 1)
    if len(set(labels)) != n:
        raise ParseError("basis labels are not distinct", no, rest_col + m2.start(2) + 1)
    if "1" not in labels:
        raise ParseError("basis must include the unity label 1", no, rest_col + m2.start(2) + 1)
    u = labels.index("1")
    unity = np.zeros(n)
    unity[u] = 1.0
    C = np.zeros((n, n, n))
    for i in range(n):
        C[u, i, i] = C[i, u, i] = 1.0
    seen = {}
    while lines.peek() is not None and lines.peek()[1].split()[0] == "mul":
        mno, mraw = lines.next()
        mm = re.match(r"\s*mul\s+(\S+)\s+(\S+)\s*=\s*(.*)$", mraw)
        if not mm:
            raise ParseError("expected 'mul Li Lj = <expr>'", mno, 1)
        a, b, rhs = mm.group(1), mm.group(2), mm.group(3)
        for lab, pos in ((a, mm.start(1)), (b, mm.start(2))):
            if lab not in labels:
                raise ParseError(f"unknown basis label {lab!r}", mno, pos + 1)
        i, j = labels.index(a), labels.index(b)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(f"duplicate mul row for {a} {b} (first on line {seen[key]})", mno, 1)
        seen[key] = mno
        vec = _located(lambda: _mul_rhs(rhs, labels, unity, mm.start(3)), mno)
        if u in (i, j):
            other = j if i == u else i
            expect = np.zeros(n)
            expect[other] = 1.0
            if not np.allclose(vec, expect):
                raise ParseError(f"row {a} {b} contradicts the unity", mno, mm.start(3) + 1)
            continue
        C[i, j] = C[j, i] = vec
    for i in range(n):
        for j in range(i, n):
            if u in (i, j):
                continue
            if (i, j) not in seen:
                raise ParseError(f"missing mul row for {labels[i]} {labels[j]}", no, None)
    try:
        A = Algebra(name, labels, C, unity)
    except AlgebraError as e:
        raise ParseError(str(e), no, None) from None
    _define(doc, name, A, no)


def _mul_rhs(rhs: str, labels, unity, col: int) -> np.ndarray:
    node = parse_expr(rhs, col)
    n = len(labels)
    env = {}
    for k, lab in enumerate(labels):
        if lab != "1":
            e = np.zeros(n)
            e[k] = 1.0
            env[lab] = _Vec(e, unity)
    check_names(node, env, "basis label")
    val = evaluate(node, env)
    if isinstance(val, _Vec):
        return val.c
    return float(val) * unity


def _algebra_expr(doc: SpecDocument, name: str, body: str, col: int) -> Algebra:
    m = re.fullmatch(r"R\s*\[\s*x\s*\]\s*/\s*\((.*)\)\s*", body)
    if m:
        poly = _real_poly(m.group(1), col + m.start(1))
        return from_presentation(poly, name=name)
    m = re.fullmatch(r"product\s*\((.*)\)\s*", body)
    if m:
        names = [s.strip() for s in _split_top(m.group(1))]
        if not all(names):
            raise ParseError("empty factor in product", None, col + 1)
        factors = [doc.algebra(s) for s in names]
        if len(factors) == 1:
            F = factors[0]
            factors = [Algebra(name, F.basis_labels, F.structure, F.unity)]
        P = direct_product(factors, name=name)
        doc.products[name] = P
        return P.algebra
    m = re.fullmatch(r"extend\s*\((.*)\)\s*", body)
    if m:
        parts = _split_top(m.group(1))
        if len(parts) != 2:
            raise ParseError("extend takes a base algebra and a polynomial", None, col + 1)
        base = doc.algebra(parts[0].strip())
        poly_col = col + m.start(1) + len(parts[0]) + 1
        p = _base_poly(base, parts[1], poly_col)
        E = extend(base, p, name=name)
        doc.extensions[name] = E
        return E.carrier
    raise ParseError("expected R[x]/(...), product(...) or extend(...)", None, col + 1)


def _poly_value(node: Node, A: Algebra, col: int) -> APolynomial:
    env = algebra_env(A)
    env["x"] = APolynomial.x(A)
    check_names(node, env)
    val = evaluate(node, env, A)
    if not isinstance(val, APolynomial):
        val = APolynomial(A, [val])
    return val


def _real_poly(text: str, col: int) -> list:
    p = _poly_value(parse_expr(text, col), REALS, col)
    return [float(c.coords[0]) for c in p.coeffs]


def _base_poly(A: Algebra, text: str, col: int) -> APolynomial:
    return _poly_value(parse_expr(text, col), A, col)


def _header(raw: str, kw: str, no: int):
    m = re.match(rf"\s*{kw}\s+({_NAME})\s+over\s+({_NAME})\s*:\s*(.*)$", raw)
    if not m:
        raise ParseError(f"expected '{kw} NAME over ALGEBRA : ...'", no, 1)
    return m.group(1), m.group(2), m.group(3), m.start(3)


def operator_from_equation(A: Algebra, text: str, col: int = 0):
    """Parse ``<lhs> = 0`` into a :class:`ConstCoeffOperator` or :class:`CauchyEulerProblem`."""
    lhs_text, rhs_text = _split_equation(text, col)
    rhs_col = col + len(lhs_text) + 1
    rhs = parse_expr(rhs_text, rhs_col)
    if not (isinstance(rhs, Num) and rhs.value == 0.0):
        raise ParseError("right-hand side must be 0 (homogeneous equations only)",
                         column=rhs_col + 1)
    terms = parse_linear_lhs(parse_expr(lhs_text, col), A, allow_z=True)
    order = max(k for k, _ in terms)
    if all(p == 0 for _, p in terms):
        coeffs = [terms.get((k, 0), A.zero()) for k in range(order + 1)]
        return ConstCoeffOperator(A, coeffs)
    if all(p == k for k, p in terms):
        coeffs = [terms.get((k, k), A.zero()) for k in range(order + 1)]
        return CauchyEulerProblem(A, tuple(coeffs))
    raise ParseError("equation mixes powers of z; expected constant coefficients or "
                     "Cauchy-Euler form a_k z^k w^(k)", column=col + 1)


def _split_equation(text: str, col: int):
    if text.count("=") != 1:
        raise ParseError("expected exactly one '='", column=col + 1)
    lhs, rhs = text.split("=")
    return lhs, rhs


def _parse_ode(doc: SpecDocument, no: int, raw: str):
    name, alg, body, col = _header(raw, "ode", no)
    A = _located(lambda: doc.algebra(alg), no)
    op = _located(lambda: operator_from_equation(A, body, col), no)
    if name in doc.odes:
        raise ParseError(f"ode {name!r} already defined", no, None)
    if isinstance(op, ConstCoeffOperator):
        doc.odes[name] = OdeDef(name, A, "constant", op, None, body.strip(), no)
    else:
        doc.odes[name] = OdeDef(name, A, "cauchy-euler", None, op, body.strip(), no)


def field_from_text(A: Algebra, text: str, col: int = 0) -> FieldExpr:
    """Parse ``w' = expr`` or ``w1' = e1; w2' = e2``."""
    variables, nodes, sources = [], [], []
    offset = col
    for piece in text.split(";"):
        if not piece.strip():
            raise ParseError("empty equation in field", column=offset + 1)
        m = re.match(rf"\s*({_NAME})'\s*=\s*(.*)$", piece)
        if not m:
            raise ParseError("expected \"VAR' = <expr>\"", column=offset + 1)
        variables.append(m.group(1))
        nodes.append(parse_expr(m.group(2), offset + m.start(2)))
        sources.append(m.group(2).strip())
        offset += len(piece) + 1
    if len(set(variables)) != len(variables):
        raise ParseError("variable defined twice in field", column=col + 1)
    if "z" in variables:
        raise ParseError("z is the independent variable", column=col + 1)
    return FieldExpr(A, nodes, variables, "z", sources)


def _parse_field(doc: SpecDocument, no: int, raw: str):
    name, alg, body, col = _header(raw, "field", no)
    A = _located(lambda: doc.algebra(alg), no)
    fe = _located(lambda: field_from_text(A, body, col), no)
    if name in doc.fields:
        raise ParseError(f"field {name!r} already defined", no, None)
    doc.fields[name] = FieldDef(name, A, fe, body.strip(), no)


def load_spec(path: str) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())
