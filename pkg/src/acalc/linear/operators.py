"""Constant-coefficient operators and their fundamental solution sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..algebra import Algebra, Element, Kind, classify, format_element, integer_power, mul
from ..construct import (APolynomial, DirectProduct, ExtensionAlgebra, Isomorphism,
                         apply_iso, apply_iso_inv, canonical_isomorphism, extend,
                         poly_text)
from ..errors import (AlgebraMismatchError, DegenerateOperatorError,
                      DependentExponentialsError)
from ..functions import exp
from ..numerics import binomial, richardson_derivative


def _elt(A: Algebra, c) -> Element:
    if isinstance(c, Element):
        if c.algebra != A:
            raise AlgebraMismatchError(f"coefficient in {c.algebra.name}, operator over {A.name}")
        return c
    return A.scalar(float(c))


def as_point(A: Algebra, zeta) -> Element:
    return zeta if isinstance(zeta, Element) else A.scalar(float(zeta))


class ConstCoeffOperator:
    """``a_n D^n + ... + a_1 D + a_0`` with coefficients listed lowest order first."""

    def __init__(self, algebra: Algebra, coeffs: Sequence):
        cs = [_elt(algebra, c) for c in coeffs]
        while cs and not np.any(cs[-1].coords):
            cs.pop()
        if len(cs) < 2:
            raise ValueError("operator must have order at least 1")
        self.algebra = algebra
        self.coeffs = tuple(cs)

    @classmethod
    def from_polynomial(cls, p: APolynomial) -> "ConstCoeffOperator":
        return cls(p.algebra, p.coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Element:
        return self.coeffs[-1]

    @property
    def degeneracy(self) -> Kind:
        return classify(self.leading).kind

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy is not Kind.UNIT

    def characteristic_polynomial(self) -> APolynomial:
        return APolynomial(self.algebra, self.coeffs)

    def monic(self) -> "ConstCoeffOperator":
        if self.is_degenerate:
            raise DegenerateOperatorError(
                f"leading coefficient {format_element(self.leading)} is not a unit; "
                "use analyze_degenerate")
        inv = self.leading.inverse()
        return ConstCoeffOperator(self.algebra, [mul(c, inv) for c in self.coeffs])

    def apply(self, derivatives: Sequence[Element]) -> Element:
        """``sum a_i f^(i)`` given the jet ``f, f', ..., f^(n)``."""
        if len(derivatives) < len(self.coeffs):
            raise ValueError(f"need derivatives up to order {self.order}")
        acc = self.algebra.zero()
        for a, d in zip(self.coeffs, derivatives):
            acc = acc + mul(a, d)
        return acc

    def __eq__(self, other):
        if not isinstance(other, ConstCoeffOperator):
            return NotImplemented
        return self.algebra == other.algebra and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)) and self.order == other.order

    def __repr__(self):
        return f"ConstCoeffOperator({self.algebra.name}, {self})"

    def __str__(self):
        return poly_text(self.coeffs, "D")


class Provenance(enum.Enum):
    EXTENSION = "Extension"
    FACTORIZATION = "Factorization"
    PRODUCT_TRANSPORT = "ProductTransport"


Evaluator = Callable[[Element, int], tuple]


@dataclass(frozen=True)
class SolutionBasis:
    """A fundamental solution set with exact derivatives of every order."""

    operator: ConstCoeffOperator
    extension: Optional[ExtensionAlgebra]
    evaluator: Evaluator = field(repr=False)
    provenance: Provenance
    labels: tuple = ()

    @property
    def size(self) -> int:
        return self.operator.order

    @property
    def algebra(self) -> Algebra:
        return self.operator.algebra

    def evaluate(self, zeta, order: int = 0) -> tuple:
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        return tuple(self.evaluator(as_point(self.algebra, zeta), order))

    def jets(self, zeta, upto: int) -> list:
        """``jets[i][j]`` = ``f_i^(j)(zeta)`` for ``j <= upto``."""
        by_order = [self.evaluate(zeta, j) for j in range(upto + 1)]
        return [[by_order[j][i] for j in range(upto + 1)] for i in range(self.size)]

    def residuals(self, zeta) -> list:
        """Operator applied to each basis function using exact derivatives."""
        L = self.operator
        return [float(np.abs(L.apply(jet).coords).max()) for jet in self.jets(zeta, L.order)]

    def residual(self, zeta) -> float:
        return max(self.residuals(zeta))

    def fd_residual(self, zeta, h: float = 1e-2) -> float:
        """Residual with derivatives from Richardson-extrapolated 6th-order central differences.

        Differentiation runs along the unity direction, which for an
        A-differentiable function recovers the A-derivative.
        """
        A = self.algebra
        z = as_point(A, zeta)
        L = self.operator
        worst = 0.0
        for i in range(self.size):
            def path(t, i=i):
                return self.evaluate(Element(A, z.coords + t * A.unity), 0)[i].coords
            derivs = [Element(A, path(0.0))]
            for j in range(1, L.order + 1):
                derivs.append(Element(A, richardson_derivative(path, 0.0, j, h)))
            worst = max(worst, float(np.abs(L.apply(derivs).coords).max()))
        return worst

    def combine(self, coeffs: Sequence[Element]) -> Callable:
        """The solution ``sum c_i f_i`` as ``(zeta, order) -> Element``."""
        cs = [_elt(self.algebra, c) for c in coeffs]
        if len(cs) != self.size:
            raise ValueError(f"need {self.size} coefficients")

        def solution(zeta, order: int = 0) -> Element:
            vals = self.evaluate(zeta, order)
            acc = self.algebra.zero()
            for c, v in zip(cs, vals):
                acc = acc + mul(c, v)
            return acc

        return solution


# ---------------------------------------------------------------------------
# extension technique


def solve_cc(L: ConstCoeffOperator) -> SolutionBasis:
    """Fundamental solution set from the characteristic extension ``A[x]/<p>``.

    With ``k`` the class of ``x``, the components of ``exp(k zeta)`` across
    ``1, k, ..., k^(n-1)`` are the solutions; their ``j``-th derivatives are
    the components of ``k^j exp(k zeta)``.
    """
    M = L.monic()
    E = extend(L.algebra, M.characteristic_polynomial())
    k = E.k

    def evaluator(zeta: Element, order: int) -> tuple:
        val = exp(mul(k, E.embed(zeta)))
        if order:
            val = mul(integer_power(k, order), val)
        return tuple(E.components(val))

    return SolutionBasis(M, E, evaluator, Provenance.EXTENSION)


# ---------------------------------------------------------------------------
# factorization


def exponential_evaluator(alpha: Element, p: int = 0) -> Callable[[Element, int], Element]:
    """``(zeta, r) -> d^r/dzeta^r [zeta^p exp(alpha zeta)]`` by the Leibniz rule."""
    A = alpha.algebra

    def ev(zeta: Element, r: int) -> Element:
        e = exp(mul(alpha, zeta))
        acc = A.zero()
        coef_p = 1.0
        for s in range(min(r, p) + 1):
            if s:
                coef_p *= p - s + 1
            term = binomial(r, s) * coef_p * mul(integer_power(zeta, p - s),
                                                  integer_power(alpha, r - s))
            acc = acc + term
        return mul(acc, e)

    return ev


def _root_list(roots, algebra: Optional[Algebra]):
    out = []
    for item in roots:
        if isinstance(item, tuple):
            alpha, m = item
        else:
            alpha, m = item, 1
        if not isinstance(alpha, Element):
            if algebra is None:
                raise ValueError("real roots need an explicit algebra")
            alpha = algebra.scalar(float(alpha))
        if int(m) < 1:
            raise ValueError("multiplicities must be positive")
        out.append((alpha, int(m)))
    if not out:
        raise ValueError("need at least one root")
    A = out[0][0].algebra
    for a, _ in out:
        if a.algebra != A:
            raise AlgebraMismatchError("roots from different algebras")
    return A, out


def solve_by_factors(roots, algebra: Optional[Algebra] = None) -> SolutionBasis:
    """Basis ``zeta^(j-1) exp(alpha_i zeta)`` for ``prod (D - alpha_i)^(m_i)``.

    ``roots`` holds ``(alpha, multiplicity)`` pairs or bare roots. Every
    pairwise difference of distinct roots must be a unit.
    """
    A, rs = _root_list(roots, algebra)
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            d = rs[i][0] - rs[j][0]
            kind = classify(d).kind
            if kind is not Kind.UNIT:
                raise DependentExponentialsError(
                    f"dependent exponentials: roots {format_element(rs[i][0])} and "
                    f"{format_element(rs[j][0])} differ by {format_element(d)}, which is "
                    f"{'zero' if kind is Kind.ZERO else 'a zero divisor'}")
    p = APolynomial(A, [A.one()])
    for alpha, m in rs:
        p = p * (APolynomial(A, [-alpha, A.one()]) ** m)
    L = ConstCoeffOperator.from_polynomial(p)
    evs, labels = [], []
    for alpha, m in rs:
        for q in range(m):
            evs.append(exponential_evaluator(alpha, q))
            mono = "" if q == 0 else ("z*" if q == 1 else f"z^{q}*")
            labels.append(f"{mono}exp(({format_element(alpha)})*z)")

    def evaluator(zeta: Element, order: int) -> tuple:
        return tuple(ev(zeta, order) for ev in evs)

    return SolutionBasis(L, None, evaluator, Provenance.FACTORIZATION, tuple(labels))


# ---------------------------------------------------------------------------
# product transport


def solve_via_product(L: ConstCoeffOperator, P: Optional[DirectProduct] = None,
                      psi: Optional[Isomorphism] = None) -> SolutionBasis:
    """Solve componentwise in a direct product and pull the basis back.

    With ``psi`` omitted, either ``L`` already lives on ``P.algebra`` or the
    canonical isomorphism of ``L.algebra`` is used.
    """
    A = L.algebra
    if psi is None:
        if P is not None and P.algebra == A:
            psi = Isomorphism(A, A, np.eye(A.dim), product=P)
        else:
            psi = canonical_isomorphism(A)
    if P is None:
        P = psi.product
    if P is None or P.algebra != psi.target:
        raise ValueError("isomorphism target must be the given direct product")
    M = L.monic()
    parts = [P.split(apply_iso(psi, a)) for a in M.coeffs]
    factor_bases = []
    for r, F in enumerate(P.factors):
        Lr = ConstCoeffOperator(F, [parts[i][r] for i in range(len(M.coeffs))])
        factor_bases.append(solve_cc(Lr))
    n = M.order

    def evaluator(zeta: Element, order: int) -> tuple:
        comps = P.split(apply_iso(psi, zeta))
        vals = [B.evaluate(c, order) for B, c in zip(factor_bases, comps)]
        return tuple(apply_iso_inv(psi, P.join([v[i] for v in vals])) for i in range(n))

    return SolutionBasis(M, None, evaluator, Provenance.PRODUCT_TRANSPORT)
