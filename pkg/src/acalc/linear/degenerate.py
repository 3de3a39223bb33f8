"""Diagnostics for operators whose leading coefficient is a zero divisor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import Element, Kind, classify, null_space, rep_matrix
from .operators import ConstCoeffOperator


@dataclass(frozen=True)
class WitnessIVP:
    point: Element
    data: tuple
    offending_index: int


@dataclass(frozen=True)
class DegeneracyReport:
    operator_is_zd: bool
    annihilator_basis: tuple
    witness_ivp: Optional[WitnessIVP]
    leading_kind: Kind


def in_ideal(alpha: Element, q: Element, tol: float = 1e-10) -> bool:
    """Whether ``q`` lies in the principal ideal ``alpha A``."""
    M = rep_matrix(alpha)
    x, *_ = np.linalg.lstsq(M, q.coords, rcond=None)
    return float(np.abs(M @ x - q.coords).max()) <= tol * max(1.0, float(np.abs(q.coords).max()))


def analyze_degenerate(L: ConstCoeffOperator, tol: float = 1e-10) -> DegeneracyReport:
    """Common annihilator of all coefficients and an unsolvable initial value problem.

    Any nonzero ``c`` with ``c a_i = 0`` for every ``i`` makes ``c f`` a
    solution for arbitrary ``f``. When some lower coefficient ``a_j`` is not
    a multiple of the leading one, the data ``eta^(i)(0) = delta_ij`` at the
    highest such ``j`` has no solution.
    """
    A = L.algebra
    stacked = np.vstack([rep_matrix(a) for a in L.coeffs])
    ann = tuple(Element(A, row) for row in null_space(stacked, tol))
    alpha = L.leading
    kind = classify(alpha).kind
    witness = None
    if kind is not Kind.UNIT:
        bad = [j for j in range(L.order) if not in_ideal(alpha, L.coeffs[j], tol)]
        if bad:
            j = max(bad)
            data = tuple(A.one() if i == j else A.zero() for i in range(L.order))
            witness = WitnessIVP(A.zero(), data, j)
    return DegeneracyReport(bool(ann), ann, witness, kind)
