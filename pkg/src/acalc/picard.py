"""First-order systems ``dy/dzeta = f(zeta, y)`` along a segment.

Picard iteration on a uniform parameter grid, a Runge-Kutta cross-check, and
finite-difference checks of the algebra Cauchy-Riemann equations and the
real PDEs they imply.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from .algebra import Algebra, Element, format_element, mul, rep_matrix
from .errors import RelationError
from .expr import as_field
from .numerics import cumulative_segment_integral, fornberg_weights, segment_integral

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 60
DEFAULT_PANELS = 256


@dataclass(frozen=True)
class Segment:
    """The path ``zeta(t) = start + t (end - start)`` for ``t`` in ``[0, 1]``."""

    start: Element
    end: Element
    panels: int = DEFAULT_PANELS

    def __post_init__(self):
        if self.start.algebra != self.end.algebra:
            raise ValueError("segment endpoints lie in different algebras")
        if self.panels < 2 or self.panels % 2:
            raise ValueError("panels must be an even integer >= 2")

    @property
    def algebra(self) -> Algebra:
        return self.start.algebra

    @property
    def delta(self) -> Element:
        return self.end - self.start

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.delta.coords))

    def grid(self, n: Optional[int] = None) -> np.ndarray:
        return np.linspace(0.0, 1.0, (self.panels if n is None else n) + 1)

    def point(self, t: float) -> Element:
        return Element(self.algebra, self.start.coords + t * self.delta.coords)


@dataclass(frozen=True)
class Trajectory:
    """Samples ``y(zeta(t_i))``; ``values[i, c]`` holds coordinates of component ``c``."""

    segment: Segment
    t: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.t)

    def point(self, i: int) -> Element:
        return self.segment.point(float(self.t[i]))

    def state(self, i: int) -> list:
        A = self.segment.algebra
        return [Element(A, row) for row in self.values[i]]

    @property
    def end_state(self) -> list:
        return self.state(len(self.t) - 1)

    def samples(self):
        for i in range(len(self.t)):
            yield float(self.t[i]), self.state(i)


@dataclass(frozen=True)
class PicardResult:
    trajectory: Trajectory
    iterations: int
    final_delta: float
    converged: bool
    residual: float
    field_scale: float

    @property
    def samples(self):
        return list(self.trajectory.samples())


def _initial(A: Algebra, w0) -> np.ndarray:
    if isinstance(w0, Element) or np.isscalar(w0):
        w0 = [w0]
    rows = []
    for w in w0:
        w = w if isinstance(w, Element) else A.scalar(float(w))
        if w.algebra != A:
            raise ValueError("initial value lies in the wrong algebra")
        rows.append(w.coords)
    return np.array(rows)


def _rhs(field, seg: Segment, Dm: np.ndarray):
    A = seg.algebra

    def g(t: float, Y: np.ndarray) -> np.ndarray:
        ys = [Element(A, row) for row in Y]
        F = field(seg.point(t), ys)
        # f * dzeta, componentwise
        return np.array([Dm @ v.coords for v in F])

    return g


def grid_derivative(values: np.ndarray, t: np.ndarray, width: int = 7) -> np.ndarray:
    """First derivative along axis 0 from ``width``-point Fornberg stencils."""
    N = len(t)
    width = min(width, N)
    out = np.empty_like(values)
    for i in range(N):
        lo = min(max(0, i - width // 2), N - width)
        idx = np.arange(lo, lo + width)
        w = fornberg_weights(t[i], t[idx], 1)[1]
        out[i] = np.tensordot(w, values[idx], axes=(0, 0))
    return out


def picard_solve(f, seg: Segment, w0, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> PicardResult:
    """Iterate ``y_(n+1)(t) = w0 + int_0^t f(zeta, y_n) * dzeta`` to a fixed point.

    Non-convergence is reported in the result rather than raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = seg.algebra
    field = as_field(f, A)
    Y0 = _initial(A, w0)
    t = seg.grid()
    Dm = rep_matrix(seg.delta)
    g = _rhs(field, seg, Dm)
    Y = np.broadcast_to(Y0, (len(t),) + Y0.shape).copy()
    delta = np.inf
    it = 0
    converged = False
    while it < max_iter:
        G = np.array([g(ti, Yi) for ti, Yi in zip(t, Y)])
        Ynew = Y0 + cumulative_segment_integral(G, t)
        delta = float(np.abs(Ynew - Y).max())
        Y = Ynew
        it += 1
        if delta <= tol:
            converged = True
            break
    G = np.array([g(ti, Yi) for ti, Yi in zip(t, Y)])
    # cumulative Simpson is only composite Simpson at even nodes; odd nodes
    # carry a non-smooth O(h^4) error that differencing would amplify
    residual = float(np.abs(grid_derivative(Y[::2], t[::2]) - G[::2]).max())
    scale = max(1.0, float(np.abs(G).max()))
    return PicardResult(Trajectory(seg, t, Y), it, delta, converged, residual, scale)


def rk4_oracle(f, seg: Segment, w0, steps: int = 1000) -> Trajectory:
    """Classical RK4 on the real system ``dy/dt = f(zeta(t), y) * (end - start)``."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    A = seg.algebra
    g = _rhs(as_field(f, A), seg, rep_matrix(seg.delta))
    Y = _initial(A, w0)
    t = np.linspace(0.0, 1.0, steps + 1)
    h = 1.0 / steps
    out = [Y]
    for i in range(steps):
        ti = t[i]
        k1 = g(ti, Y)
        k2 = g(ti + h / 2, Y + h / 2 * k1)
        k3 = g(ti + h / 2, Y + h / 2 * k2)
        k4 = g(ti + h, Y + h * k3)
        Y = Y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(Y)
    return Trajectory(seg, t, np.array(out))


def trajectory_difference(a: Trajectory, b: Trajectory) -> float:
    """Sup-norm gap at shared parameter values (grids must nest)."""
    ta = {round(float(x), 12): i for i, x in enumerate(a.t)}
    worst = 0.0
    shared = 0
    for j, x in enumerate(b.t):
        i = ta.get(round(float(x), 12))
        if i is not None:
            shared += 1
            worst = max(worst, float(np.abs(a.values[i] - b.values[j]).max()))
    if not shared:
        raise ValueError("trajectories share no grid points")
    return worst


# ---------------------------------------------------------------------------
# Cauchy-Riemann and PDE checks


def _partial(f, p: np.ndarray, direction: np.ndarray, h: float, A: Algebra) -> np.ndarray:
    def at(s):
        return f(Element(A, p + s * h * direction)).coords
    return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h)


@dataclass(frozen=True)
class ACRReport:
    point: Element
    derivative: Element
    residuals: tuple
    max_residual: float
    scale: float
    relative: float
    flagged: bool


def acr_check(f: Callable[[Element], Element], p: Element, h: float = 1e-4,
              threshold: float = 1e-6) -> ACRReport:
    """Compare ``df/dx_j`` with ``f'(p) * v_j`` for every non-unity basis direction.

    ``f'(p)`` is the derivative along the unity direction. Partials use the
    fourth-order central stencil with step ``h``. The residual is measured
    relative to ``max(1, |f(p)|, |f'(p)|)`` and flagged above ``threshold``.
    """
    A = p.algebra
    fp = _partial(f, p.coords, A.unity, h, A)
    d = Element(A, fp)
    res = []
    for j in range(A.dim):
        vj = np.zeros(A.dim)
        vj[j] = 1.0
        if np.array_equal(vj, A.unity):
            continue
        dj = _partial(f, p.coords, vj, h, A)
        res.append(float(np.abs(dj - mul(d, A.basis(j)).coords).max()))
    mx = max(res) if res else 0.0
    scale = max(1.0, float(np.abs(f(p).coords).max()), float(np.abs(fp).max()))
    rel = mx / scale
    return ACRReport(p, d, tuple(res), mx, scale, rel, rel > threshold)


def _index(A: Algebra, i) -> int:
    if isinstance(i, str):
        return A.basis_labels.index(i)
    return int(i)


def relation_value(A: Algebra, relation: Mapping) -> Element:
    """``sum B v_i1 * ... * v_ik`` for a relation ``{(i1, ..., ik): B}``."""
    acc = A.zero()
    for word, B in relation.items():
        term = A.one()
        for i in word:
            term = mul(term, A.basis(_index(A, i)))
        acc = acc + float(B) * term
    return acc


def pde_consequence_check(f: Callable[[Element], Element], p: Element, relation: Mapping,
                          h: float = 1e-3) -> float:
    """Contract finite-difference mixed partials of ``f`` with a vanishing relation.

    Raises :class:`RelationError` unless the relation is zero in the algebra
    to ``1e-12``. Each ``k``-fold partial uses the tensor product of central
    differences with step ``h``.
    """
    A = p.algebra
    r = relation_value(A, relation)
    if float(np.abs(r.coords).max()) > 1e-12:
        raise RelationError(f"relation evaluates to {format_element(r)}, not 0")
    acc = np.zeros(A.dim)
    for word, B in relation.items():
        B = float(B)
        if B == 0.0:
            continue
        idx = [_index(A, i) for i in word]
        k = len(idx)
        part = np.zeros(A.dim)
        for signs in itertools.product((-1.0, 1.0), repeat=k):
            x = p.coords.copy()
            for s, i in zip(signs, idx):
                x[i] += s * h
            part += np.prod(signs) * f(Element(A, x)).coords
        acc += B * part / (2 * h) ** k
    return float(np.abs(acc).max())


# ---------------------------------------------------------------------------
# conservation checks for first-order solution formulas


@dataclass(frozen=True)
class ConservationReport:
    kind: str
    values: tuple
    drift: float


def verify_first_order_solution(kind: str, pieces: Mapping[str, Callable],
                                trajectory: Trajectory) -> ConservationReport:
    """Evaluate a conserved combination along a one-component trajectory.

    ``separable``: pieces ``G(w)``, ``F(z)`` with ``G' = 1/g``, ``F' = f``;
    conserved ``G(w) - F(z)``.
    ``linear``: pieces ``I(z)``, ``Q(z)`` for ``w' + P w = Q`` with
    integrating factor ``I``; conserved ``I w - int I Q``.
    ``exact``: piece ``F(z, w)``; conserved ``F``.
    """
    seg = trajectory.segment
    kind = kind.lower()
    zs = [trajectory.point(i) for i in range(len(trajectory))]
    ws = [trajectory.state(i)[0] for i in range(len(trajectory))]
    if kind == "separable":
        vals = [pieces["G"](w) - pieces["F"](z) for z, w in zip(zs, ws)]
    elif kind == "exact":
        vals = [pieces["F"](z, w) for z, w in zip(zs, ws)]
    elif kind == "linear":
        I, Q = pieces["I"], pieces.get("Q")
        Is = [I(z) for z in zs]
        if Q is None:
            integ = np.zeros((len(zs), seg.algebra.dim))
        else:
            Dm = rep_matrix(seg.delta)
            G = np.array([Dm @ mul(a, Q(z)).coords for a, z in zip(Is, zs)])
            integ = cumulative_segment_integral(G, trajectory.t)
        vals = [mul(a, w) - Element(seg.algebra, c) for a, w, c in zip(Is, ws, integ)]
    else:
        raise ValueError(f"unknown kind {kind!r}; expected separable, linear or exact")
    ref = vals[0].coords
    drift = max(float(np.abs(v.coords - ref).max()) for v in vals)
    return ConservationReport(kind, tuple(vals), drift)


def path_independence(f: Callable[[Element], Element], z0: Element, zmid: Element,
                      z1: Element, panels: int = 128) -> float:
    """Gap between the direct segment integral and the detour through ``zmid``."""
    direct = segment_integral(f, z0, z1, panels)
    detour = segment_integral(f, z0, zmid, panels) + segment_integral(f, zmid, z1, panels)
    return float(np.abs((direct - detour).coords).max())
