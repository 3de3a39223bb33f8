"""Cauchy-Euler equations ``sum a_k z^k w^(k) = 0`` via ``z = exp(zeta)``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from ..algebra import Algebra, Element, classify, format_element, integer_power
from ..construct import APolynomial
from ..errors import DegenerateOperatorError, LogDomainError, NotInvertibleError
from ..functions import in_log_domain, log, log_domain_violation
from ..numerics import falling_factorial, stirling1
from .operators import ConstCoeffOperator, SolutionBasis, _elt, as_point, solve_cc


@dataclass(frozen=True)
class CauchyEulerProblem:
    algebra: Algebra
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_elt(self.algebra, c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("Cauchy-Euler problem needs order at least 1")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def transformed(self) -> ConstCoeffOperator:
        return cauchy_euler_transform(self)


def transformed_coefficients(A: Algebra, coeffs: Sequence[Element]) -> list:
    """``b_r = sum_k a_k s(k, r)`` since ``z^k D_z^k = D(D-1)...(D-k+1)`` in ``zeta``."""
    n = len(coeffs) - 1
    out = []
    for r in range(n + 1):
        acc = A.zero()
        for k in range(r, n + 1):
            s = stirling1(k, r)
            if s:
                acc = acc + s * coeffs[k]
        out.append(acc)
    return out


def cauchy_euler_transform(P: CauchyEulerProblem) -> ConstCoeffOperator:
    lead = P.coeffs[-1]
    if not classify(lead).is_unit:
        raise DegenerateOperatorError(
            f"leading coefficient {format_element(lead)} is not a unit")
    return ConstCoeffOperator(P.algebra, transformed_coefficients(P.algebra, P.coeffs))


def characteristic_equation(P: CauchyEulerProblem) -> APolynomial:
    """``sum a_k alpha(alpha-1)...(alpha-k+1)`` expanded in powers of ``alpha``."""
    return P.transformed.characteristic_polynomial()


def _integer_roots(L: ConstCoeffOperator) -> Optional[list]:
    A = L.algebra
    u = A.unity
    real = []
    for c in L.coeffs:
        s = float(c.coords @ u) / float(u @ u)
        if np.abs(c.coords - s * u).max() > 1e-12:
            return None
        real.append(s)
    roots = np.roots(real[::-1])
    n = L.order
    ints = []
    for r in roots:
        m = round(r.real)
        if abs(r - m) > 1e-8:
            return None
        ints.append(int(m))
    if len(set(ints)) != n:
        return None
    return sorted(ints, reverse=True)


@dataclass(frozen=True)
class CauchyEulerSolution:
    """Fundamental solutions ``w_i(z)``.

    Either pure powers ``z^m`` (all characteristic roots distinct integers)
    or ``eta_i(log z)`` from the transformed constant-coefficient basis.
    """

    problem: CauchyEulerProblem
    basis: Optional[SolutionBasis]
    exponents: Optional[tuple]
    domains: tuple

    @property
    def fast_path(self) -> bool:
        return self.exponents is not None

    @property
    def size(self) -> int:
        return self.problem.order

    @property
    def algebra(self) -> Algebra:
        return self.problem.algebra

    def evaluate(self, z, order: int = 0) -> tuple:
        A = self.algebra
        z = as_point(A, z)
        if self.exponents is not None:
            out = []
            for m in self.exponents:
                c = falling_factorial(m, order)
                if c == 0.0:
                    out.append(A.zero())
                    continue
                try:
                    out.append(c * integer_power(z, m - order))
                except NotInvertibleError as e:
                    raise NotInvertibleError(
                        f"z^{m - order} needs a unit argument, got {format_element(z)}") from e
            return tuple(out)
        if not in_log_domain(z):
            bad = log_domain_violation(z)
            detail = f"eigenvalue {bad.real:.6g}" if bad is not None else "not a unit"
            raise LogDomainError(f"{format_element(z)} is outside the log domain ({detail})")
        zeta = log(z)
        derivs = [self.basis.evaluate(zeta, r) for r in range(order + 1)]
        scale = integer_power(z, -order) if order else A.one()
        out = []
        for i in range(self.size):
            acc = A.zero()
            for r in range(order + 1):
                s = stirling1(order, r)
                if s:
                    acc = acc + s * derivs[r][i]
            out.append(scale * acc)
        return tuple(out)


def solve_cauchy_euler(P: CauchyEulerProblem) -> CauchyEulerSolution:
    L = P.transformed
    roots = _integer_roots(L)
    if roots is not None:
        domains = tuple("entire" if m >= 0 else "units" for m in roots)
        return CauchyEulerSolution(P, None, tuple(roots), domains)
    basis = solve_cc(L)
    return CauchyEulerSolution(P, basis, None, ("log-domain",) * P.order)
