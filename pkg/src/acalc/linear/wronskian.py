"""Wronskians, Abel's formula and initial value fitting over an algebra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..algebra import Classification, Element, classify, format_element, mul, rep_matrix
from ..errors import NotInvertibleError, WronskianError
from ..functions import exp
from ..numerics import segment_integral
from .operators import ConstCoeffOperator, as_point


def _evaluate(basis, zeta, order: int) -> tuple:
    if hasattr(basis, "evaluate"):
        return tuple(basis.evaluate(zeta, order))
    return tuple(basis(zeta, order))


def solution_matrix(basis, zeta: Element, n: int = None) -> list:
    """Rows ``j = 0..n-1`` hold ``f_1^(j), ..., f_n^(j)`` at ``zeta``."""
    first = _evaluate(basis, zeta, 0)
    n = len(first) if n is None else n
    return [list(first)] + [list(_evaluate(basis, zeta, j)) for j in range(1, n)]


def determinant(rows: Sequence[Sequence[Element]]) -> Element:
    """Division-free determinant over a commutative algebra.

    Laplace expansion along rows, memoised on the set of remaining columns.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    A = rows[0][0].algebra
    memo = {}

    def minor(r: int, cols: int) -> Element:
        if r == n:
            return A.one()
        if cols in memo:
            return memo[cols]
        acc = A.zero()
        sign = 1.0
        for c in range(n):
            bit = 1 << c
            if cols & bit:
                continue
            entry = rows[r][c]
            if np.any(entry.coords):
                term = mul(entry, minor(r + 1, cols | bit))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[cols] = acc
        return acc

    return minor(0, 0)


def wronskian(basis, zeta) -> tuple:
    """Return ``(W, classification)`` for a basis at ``zeta``.

    ``basis`` is a :class:`SolutionBasis` or a callable ``(zeta, order)``
    returning the ``order``-th derivatives of every basis function.
    """
    if hasattr(basis, "algebra") and not isinstance(zeta, Element):
        zeta = as_point(basis.algebra, zeta)
    W = determinant(solution_matrix(basis, zeta))
    return W, classify(W)


@dataclass(frozen=True)
class AbelReport:
    start: Element
    end: Element
    w_start: Element
    w_end: Element
    predicted: Element
    deviation: float
    kind_start: str
    kind_end: str


def abel_check(L: ConstCoeffOperator, basis, z0, z1, panels: int = 128) -> AbelReport:
    """Compare ``W(z1)`` with ``W(z0) exp(-int a_(n-1)/a_n)`` along ``[z0, z1]``."""
    A = L.algebra
    z0, z1 = as_point(A, z0), as_point(A, z1)
    lead, sub = L.coeffs[-1], L.coeffs[-2]
    try:
        ratio = mul(sub, lead.inverse())
    except NotInvertibleError as e:
        raise NotInvertibleError(
            f"leading coefficient {format_element(lead)} is not a unit on the segment") from e
    integral = segment_integral(lambda z: ratio, z0, z1, panels)
    W0, c0 = wronskian(basis, z0)
    W1, c1 = wronskian(basis, z1)
    pred = mul(W0, exp(-integral))
    scale = max(float(np.linalg.norm(W1.coords)), float(np.linalg.norm(pred.coords)), 1e-300)
    dev = float(np.linalg.norm((W1 - pred).coords)) / scale
    return AbelReport(z0, z1, W0, W1, pred, dev, c0.kind.value, c1.kind.value)


def block_system(basis, zeta: Element) -> np.ndarray:
    """Real ``(n m) x (n m)`` matrix of the A-linear system ``sum_i c_i f_i^(j) = d_j``."""
    W = solution_matrix(basis, zeta)
    return np.block([[rep_matrix(e) for e in row] for row in W])


def fit_ivp(basis, zeta0, data: Sequence) -> tuple:
    """Constants ``c_i`` with ``sum c_i f_i^(j)(zeta0) = data[j]`` for ``j < n``."""
    if hasattr(basis, "algebra") and not isinstance(zeta0, Element):
        zeta0 = as_point(basis.algebra, zeta0)
    rows = solution_matrix(basis, zeta0)
    n = len(rows)
    A = rows[0][0].algebra
    if len(data) != n:
        raise ValueError(f"need {n} initial values")
    d = [x if isinstance(x, Element) else A.scalar(float(x)) for x in data]
    W = determinant(rows)
    cl: Classification = classify(W)
    if not cl.is_unit:
        raise WronskianError(
            f"non-unit Wronskian {format_element(W)} ({cl.kind.value}) at "
            f"{format_element(zeta0)}; initial value problem is not uniquely solvable")
    B = np.block([[rep_matrix(e) for e in row] for row in rows])
    rhs = np.concatenate([x.coords for x in d])
    sol = np.linalg.solve(B, rhs)
    resid = float(np.abs(B @ sol - rhs).max())
    if resid > 1e-9 * max(1.0, float(np.abs(rhs).max())):
        raise WronskianError(f"ill-conditioned initial value fit, residual {resid:.3g}")
    m = A.dim
    return tuple(Element(A, sol[i * m:(i + 1) * m]) for i in range(n))
