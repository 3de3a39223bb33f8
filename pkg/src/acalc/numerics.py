"""Finite-difference stencils and segment quadrature shared by the solvers."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .algebra import Element, mul, norm_bound


def fornberg_weights(x0: float, xs, m: int) -> np.ndarray:
    """Weights ``w[k, i]`` so that ``f^(k)(x0) ~ sum_i w[k, i] f(xs[i])`` for ``k <= m``."""
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    if m >= n:
        raise ValueError("need more nodes than the derivative order")
    w = np.zeros((m + 1, n))
    w[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    w[k, i] = c1 * (k * w[k - 1, i - 1] - c5 * w[k, i - 1]) / c2
                w[0, i] = -c1 * c5 * w[0, i - 1] / c2
            for k in range(mn, 0, -1):
                w[k, j] = (c4 * w[k, j] - k * w[k - 1, j]) / c3
            w[0, j] = c4 * w[0, j] / c3
        c1 = c2
    return w


@lru_cache(maxsize=64)
def central_weights(order: int, accuracy: int) -> tuple:
    """Integer offsets and unit-step weights of a central stencil."""
    half = (order + 1) // 2 - 1 + accuracy // 2
    offsets = np.arange(-half, half + 1, dtype=float)
    w = fornberg_weights(0.0, offsets, order)[order]
    return tuple(offsets), tuple(w)


def central_derivative(f: Callable[[float], np.ndarray], t: float, order: int, h: float,
                       accuracy: int = 6) -> np.ndarray:
    offsets, w = central_weights(order, accuracy)
    acc = None
    for o, c in zip(offsets, w):
        if c == 0.0:
            continue
        term = c * np.asarray(f(t + o * h), dtype=float)
        acc = term if acc is None else acc + term
    return acc / h ** order


def richardson_derivative(f: Callable[[float], np.ndarray], t: float, order: int,
                          h: float = 1e-2, accuracy: int = 6) -> np.ndarray:
    """Central difference of the given accuracy, extrapolated once in ``h``."""
    coarse = central_derivative(f, t, order, h, accuracy)
    fine = central_derivative(f, t, order, h / 2, accuracy)
    r = 2.0 ** accuracy
    return (r * fine - coarse) / (r - 1.0)


# ---------------------------------------------------------------------------
# segment quadrature


def segment_nodes(start: Element, end: Element, panels: int):
    if panels < 2 or panels % 2:
        raise ValueError("Simpson quadrature needs an even number of panels >= 2")
    t = np.linspace(0.0, 1.0, panels + 1)
    d = end.coords - start.coords
    return t, [Element(start.algebra, start.coords + ti * d) for ti in t]


def segment_integral(f: Callable[[Element], Element], start: Element, end: Element,
                     panels: int = 128) -> Element:
    """Composite Simpson approximation of the contour integral of ``f`` along ``[start, end]``."""
    t, nodes = segment_nodes(start, end, panels)
    dz = end - start
    vals = np.array([mul(f(z), dz).coords for z in nodes])
    return Element(start.algebra, simpson(vals, x=t, axis=0))


def cumulative_segment_integral(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Running Simpson integral over axis 0 with a leading zero row."""
    return cumulative_simpson(values, x=t, axis=0, initial=0.0)


def ml_bound(f: Callable[[Element], Element], start: Element, end: Element,
             panels: int = 128) -> float:
    """``m_A * max|f| * L`` on the segment; ``m_A`` is the submultiplicative constant."""
    _, nodes = segment_nodes(start, end, panels)
    M = max(float(np.linalg.norm(f(z).coords)) for z in nodes)
    L = float(np.linalg.norm((end - start).coords))
    return norm_bound(start.algebra) * M * L


def falling_factorial(m: float, j: int) -> float:
    out = 1.0
    for r in range(j):
        out *= m - r
    return out


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: ``x(x-1)...(x-n+1) = sum_k s(n,k) x^k``."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
