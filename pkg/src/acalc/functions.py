"""Analytic functions on algebra elements via the regular representation.

For ``x`` with multiplication matrix ``M``, ``f(x) = f(M) 1``; the matrix
functions come from :mod:`scipy.linalg`.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import linalg as sla

from .algebra import Element, classify, format_element, integer_power, mul, rep_matrix
from .construct import ExtensionAlgebra
from .errors import AlgebraMismatchError, LogDomainError

Scalar = Union[float, Element]


def _apply(fn, x: Element) -> Element:
    F = fn(rep_matrix(x))
    return Element(x.algebra, np.real_if_close(F @ x.algebra.unity, tol=1e6).real)


def exp(x: Element) -> Element:
    return _apply(sla.expm, x)


def cos(x: Element) -> Element:
    return _apply(sla.cosm, x)


def sin(x: Element) -> Element:
    return _apply(sla.sinm, x)


def cosh(x: Element) -> Element:
    return _apply(sla.coshm, x)


def sinh(x: Element) -> Element:
    return _apply(sla.sinhm, x)


def log_domain_violation(x: Element):
    """Return the first offending eigenvalue of ``M_x`` on ``(-inf, 0]``, else ``None``."""
    lam = np.linalg.eigvals(rep_matrix(x))
    for v in lam:
        if abs(v.imag) <= 1e-7 * max(1.0, abs(v)) and v.real <= 1e-12 * max(1.0, abs(v)):
            return complex(v)
    return None


def in_log_domain(x: Element) -> bool:
    return classify(x).is_unit and log_domain_violation(x) is None


def log(x: Element) -> Element:
    """Principal logarithm; ``x`` must be a unit whose spectrum avoids ``(-inf, 0]``."""
    if not classify(x).is_unit:
        raise LogDomainError(f"{format_element(x)} is not a unit, log undefined")
    bad = log_domain_violation(x)
    if bad is not None:
        raise LogDomainError(
            f"log({format_element(x)}) undefined: eigenvalue {bad.real:.6g} lies on the "
            f"non-positive real axis")
    L = sla.logm(rep_matrix(x))
    v = L @ x.algebra.unity
    return Element(x.algebra, np.real(v))


def _as_element(alpha: Scalar, like: Element) -> Element:
    if isinstance(alpha, Element):
        if alpha.algebra != like.algebra:
            raise AlgebraMismatchError(
                f"exponent in {alpha.algebra.name}, base in {like.algebra.name}")
        return alpha
    if isinstance(alpha, numbers.Real):
        return like.algebra.scalar(float(alpha))
    raise TypeError(f"unsupported exponent {alpha!r}")


def power(x: Element, alpha: Scalar) -> Element:
    """``x^alpha = exp(alpha log x)``; integer real exponents use repeated products."""
    if isinstance(alpha, numbers.Real) and float(alpha).is_integer():
        return integer_power(x, int(alpha))
    a = _as_element(alpha, x)
    return exp(mul(a, log(x)))


def sqrt(x: Element) -> Element:
    return power(x, 0.5)


FUNCTIONS = {
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "cos": cos,
    "sin": sin,
    "cosh": cosh,
    "sinh": sinh,
}


@dataclass(frozen=True)
class SpecialFunctionValue:
    """``E(zeta, j) = k^j exp(k zeta)`` and its base-algebra components."""

    extension: ExtensionAlgebra
    zeta: Element
    j: int
    value: Element
    components: tuple


def special_functions(E: ExtensionAlgebra, zeta: Scalar, j: int = 0) -> SpecialFunctionValue:
    """Components ``f_1 .. f_n`` of ``k^j exp(k zeta)`` over the base algebra."""
    if isinstance(zeta, numbers.Real):
        zeta = E.base.scalar(float(zeta))
    if zeta.algebra != E.base:
        raise AlgebraMismatchError(f"zeta must lie in {E.base.name}")
    k = E.k
    Z = E.embed(zeta)
    val = mul(integer_power(k, j), exp(mul(k, Z)))
    return SpecialFunctionValue(E, zeta, j, val, tuple(E.components(val)))
