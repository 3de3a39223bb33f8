"""Finite-dimensional commutative associative unital real algebras.

An :class:`Algebra` is fixed by its structure constants ``C[i, j, k]`` with
``v_i * v_j = sum_k C[i, j, k] v_k``.  Elements are coordinate vectors with
respect to the basis ``v_1 .. v_n``.  The unity is ``e_1`` unless the
constructor is told otherwise (direct products use componentwise bases).
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import AlgebraMismatchError, NotInvertibleError, StructureError

DEFAULT_TOL = 1e-10


class Algebra:
    """An immutable algebra given by dense structure constants.

    Construction validates commutativity, associativity and the unity axiom;
    an invalid table raises :class:`StructureError` immediately.
    """

    def __init__(self, name: str, basis_labels: Sequence[str], structure, unity=None,
                 *, validate: bool = True):
        labels = tuple(str(s) for s in basis_labels)
        C = np.array(structure, dtype=float)
        n = len(labels)
        if n == 0:
            raise StructureError("algebra must have positive dimension")
        if len(set(labels)) != n:
            raise StructureError(f"basis labels are not distinct: {labels}")
        if C.shape != (n, n, n):
            raise StructureError(f"structure array has shape {C.shape}, expected {(n, n, n)}")
        if unity is None:
            u = np.zeros(n)
            u[0] = 1.0
        else:
            u = np.array(unity, dtype=float)
            if u.shape != (n,):
                raise StructureError("unity vector has the wrong length")
        C.setflags(write=False)
        u.setflags(write=False)
        self.name = str(name)
        self.basis_labels = labels
        self.structure = C
        self.unity = u
        if validate:
            self._validate()

    def _validate(self):
        C = self.structure
        scale = max(1.0, float(np.abs(C).max()))
        tol = 1e-12 * scale
        if not np.allclose(C, C.transpose(1, 0, 2), rtol=0.0, atol=tol):
            raise StructureError(f"{self.name}: structure constants are not commutative")
        left = np.einsum("ijk,klm->ijlm", C, C)
        right = np.einsum("jlk,ikm->ijlm", C, C)
        if np.abs(left - right).max() > tol * scale:
            raise StructureError(f"{self.name}: multiplication is not associative")
        left_unit = np.einsum("i,ijk->jk", self.unity, C)
        if np.abs(left_unit - np.eye(self.dim)).max() > tol:
            raise StructureError(f"{self.name}: unity does not act as identity")

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        if self is other:
            return True
        return (self.name == other.name
                and self.structure.shape == other.structure.shape
                and np.array_equal(self.structure, other.structure)
                and np.array_equal(self.unity, other.unity))

    def __hash__(self):
        return hash((self.name, self.structure.tobytes()))

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, basis={list(self.basis_labels)})"

    def same_structure(self, other: "Algebra") -> bool:
        """Structure equality ignoring the name."""
        return (self.structure.shape == other.structure.shape
                and np.allclose(self.structure, other.structure, rtol=0, atol=1e-12)
                and np.allclose(self.unity, other.unity, rtol=0, atol=1e-12))

    # -- element factories -------------------------------------------------

    def element(self, coords) -> "Element":
        return Element(self, coords)

    def __call__(self, *coords) -> "Element":
        if len(coords) == 1 and not isinstance(coords[0], numbers.Number):
            return Element(self, coords[0])
        return Element(self, coords)

    def one(self) -> "Element":
        return Element(self, self.unity)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim))

    def scalar(self, c: float) -> "Element":
        return Element(self, float(c) * self.unity)

    def basis(self, i: int) -> "Element":
        e = np.zeros(self.dim)
        e[i] = 1.0
        return Element(self, e)

    def basis_elements(self) -> list:
        return [self.basis(i) for i in range(self.dim)]

    def __getitem__(self, label: str) -> "Element":
        try:
            return self.basis(self.basis_labels.index(label))
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> "Element":
        return Element(self, rng.uniform(-scale, scale, self.dim))

    # -- raw coordinate kernels -------------------------------------------

    def mul_coords(self, a, b):
        return np.einsum("i,j,ijk->k", a, b, self.structure)

    def rep_coords(self, a):
        # column j is a * v_j
        return np.einsum("i,ijk->kj", a, self.structure)


class Element:
    """An algebra number: a coordinate vector tied to an :class:`Algebra`."""

    __slots__ = ("algebra", "coords")
    __array_priority__ = 1000

    def __init__(self, algebra: Algebra, coords):
        c = np.array(coords, dtype=float).reshape(-1)
        if c.shape != (algebra.dim,):
            raise ValueError(f"expected {algebra.dim} coordinates for {algebra.name}, got {c.shape[0]}")
        c.setflags(write=False)
        self.algebra = algebra
        self.coords = c

    def _coerce(self, other) -> Optional["Element"]:
        if isinstance(other, Element):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise AlgebraMismatchError(
                    f"cannot combine elements of {self.algebra.name} and {other.algebra.name}")
            return other
        if isinstance(other, numbers.Real):
            return self.algebra.scalar(float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Element(self.algebra, self.coords + o.coords)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Element(self.algebra, self.coords - o.coords)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Element(self.algebra, o.coords - self.coords)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Element(self.algebra, float(other) * self.coords)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return Element(self.algebra, float(other) * self.coords)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return Element(self.algebra, self.coords / float(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return mul(self, o.inverse())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return mul(o, self.inverse())

    def __pow__(self, exponent):
        if isinstance(exponent, numbers.Integral) or (
                isinstance(exponent, numbers.Real) and float(exponent).is_integer()
                and abs(exponent) < 2**31):
            return integer_power(self, int(exponent))
        from .functions import power
        if isinstance(exponent, numbers.Real):
            exponent = self.algebra.scalar(float(exponent))
        return power(self, exponent)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.coords, other.coords)

    __hash__ = None

    def isclose(self, other, tol: float = 1e-10) -> bool:
        o = self._coerce(other)
        return bool(np.abs(self.coords - o.coords).max() <= tol)

    def inverse(self, tol: float = DEFAULT_TOL) -> "Element":
        M = rep_matrix(self)
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] <= tol:
            raise NotInvertibleError(f"{format_element(self)} is not a unit in {self.algebra.name}")
        return Element(self.algebra, np.linalg.solve(M, self.algebra.unity))

    def norm(self) -> float:
        return norm(self)

    def __repr__(self):
        return f"Element({self.algebra.name}, {format_element(self)})"

    def __str__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# operations


def _check_same(a: Element, b: Element):
    if a.algebra is not b.algebra and a.algebra != b.algebra:
        raise AlgebraMismatchError(
            f"cannot combine elements of {a.algebra.name} and {b.algebra.name}")


def mul(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return Element(a.algebra, a.algebra.mul_coords(a.coords, b.coords))


def integer_power(x: Element, n: int) -> Element:
    if n < 0:
        return integer_power(x.inverse(), -n)
    result = x.algebra.one()
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def rep_matrix(x: Element) -> np.ndarray:
    """Matrix of left multiplication by ``x``; column j holds ``x * v_j``."""
    return x.algebra.rep_coords(x.coords)


def norm(x: Element) -> float:
    return float(np.linalg.norm(x.coords))


def norm_bound(A: Algebra) -> float:
    """Submultiplicativity constant ``C (n^2 - n + 1) sqrt(n)`` with ``C = max |C_ijk|``."""
    n = A.dim
    C = float(np.abs(A.structure).max())
    return C * (n * n - n + 1) * math.sqrt(n)


class Kind(enum.Enum):
    ZERO = "zero"
    UNIT = "unit"
    ZERO_DIVISOR = "zero-divisor"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    inverse: Optional[Element] = None
    annihilator_basis: Optional[tuple] = None

    @property
    def is_unit(self) -> bool:
        return self.kind is Kind.UNIT


def null_space(M: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows form a reduced-echelon basis of ``{x : M x = 0}``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    _, s, vt = np.linalg.svd(M)
    s = np.concatenate([s, np.zeros(n - len(s))])
    N = vt[s <= tol]
    return reduced_echelon(N)


def reduced_echelon(B: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    B = np.array(B, dtype=float)
    if B.size == 0:
        return B.reshape(0, B.shape[1] if B.ndim == 2 else 0)
    rows, cols = B.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(B[r:, c])))
        if abs(B[p, c]) <= tol:
            continue
        B[[r, p]] = B[[p, r]]
        B[r] /= B[r, c]
        for i in range(rows):
            if i != r:
                B[i] -= B[i, c] * B[r]
        r += 1
    B = B[:r]
    return snap(B)


def snap(a, tol: float = 1e-12):
    """Round entries within ``tol`` of an integer (kills SVD noise like 1.0000000000000002)."""
    a = np.array(a, dtype=float)
    r = np.round(a)
    near = np.abs(a - r) <= tol
    a[near] = r[near]
    a[a == 0] = 0.0
    return a


def classify(x: Element, tol: float = DEFAULT_TOL) -> Classification:
    """Sort ``x`` into zero, unit (with inverse) or zero divisor (with annihilator).

    Singularity is judged by the smallest singular value of the regular
    representation against the absolute threshold ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = x.algebra
    if norm(x) <= tol:
        return Classification(Kind.ZERO)
    M = rep_matrix(x)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] > tol:
        inv = Element(A, np.linalg.solve(M, A.unity))
        return Classification(Kind.UNIT, inverse=inv)
    basis = tuple(Element(A, row) for row in null_space(M, tol=max(tol, s[-1])))
    return Classification(Kind.ZERO_DIVISOR, annihilator_basis=basis)


# ---------------------------------------------------------------------------
# text form


def format_number(c: float, digits: Optional[int] = None) -> str:
    if digits is None:
        if float(c).is_integer() and abs(c) < 1e15:
            return str(int(c))
        return repr(float(c))
    s = f"{c:.{digits}g}"
    return s


def format_element(x: Element, digits: Optional[int] = None) -> str:
    """Render ``x`` as ``c1 + c2*v2 + ...`` in a form the expression parser accepts."""
    A = x.algebra
    terms = []
    unity_is_e1 = A.basis_labels[0] == "1" and A.unity[0] == 1.0 and np.count_nonzero(A.unity) == 1
    for i, c in enumerate(x.coords):
        if c == 0.0:
            continue
        label = A.basis_labels[i]
        mag = format_number(abs(c), digits)
        if i == 0 and unity_is_e1:
            body = mag
        elif mag == "1":
            body = label
        else:
            body = f"{mag}*{label}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
