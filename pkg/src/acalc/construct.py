"""Building algebras: presentations, direct products, extensions, named families."""

from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (Algebra, Element, format_element, format_number, integer_power, mul,
                      snap)
from .errors import (AlgebraMismatchError, NoIsomorphismError, NotMonicError,
                     StructureError)

REALS = Algebra("R", ["1"], [[[1.0]]])


class APolynomial:
    """Polynomial ``a_0 + a_1 x + ... + a_n x^n`` with coefficients in an algebra.

    Exact trailing zeros are dropped so the stored leading coefficient is
    nonzero; the zero polynomial has no coefficients and degree -1.
    """

    def __init__(self, algebra: Algebra, coeffs: Sequence):
        cs = []
        for c in coeffs:
            if isinstance(c, Element):
                if c.algebra != algebra:
                    raise AlgebraMismatchError(
                        f"coefficient in {c.algebra.name}, polynomial over {algebra.name}")
                cs.append(c)
            else:
                cs.append(algebra.scalar(float(c)))
        while cs and not np.any(cs[-1].coords):
            cs.pop()
        self.algebra = algebra
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, algebra: Algebra) -> "APolynomial":
        return cls(algebra, [algebra.zero(), algebra.one()])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Element:
        return self.coeffs[-1]

    def is_monic(self, tol: float = 1e-12) -> bool:
        return bool(self.coeffs) and self.leading.isclose(self.algebra.one(), tol)

    def monic(self) -> "APolynomial":
        inv = self.leading.inverse()
        return APolynomial(self.algebra, [mul(c, inv) for c in self.coeffs])

    def coefficient(self, i: int) -> Element:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.algebra.zero()

    def _coerce(self, other):
        if isinstance(other, APolynomial):
            if other.algebra != self.algebra:
                raise AlgebraMismatchError("polynomials over different algebras")
            return other
        if isinstance(other, (Element, numbers.Real)):
            return APolynomial(self.algebra, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return APolynomial(self.algebra, [self.coefficient(i) + o.coefficient(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return APolynomial(self.algebra, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return APolynomial(self.algebra, [])
        out = [self.algebra.zero() for _ in range(len(self.coeffs) + len(o.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + mul(a, b)
        return APolynomial(self.algebra, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return APolynomial(self.algebra, [c / float(other) for c in self.coeffs])
        if isinstance(other, Element):
            inv = other.inverse()
            return APolynomial(self.algebra, [mul(c, inv) for c in self.coeffs])
        return NotImplemented

    def __pow__(self, n):
        if not (isinstance(n, numbers.Integral) or (isinstance(n, float) and n.is_integer())) or n < 0:
            raise ValueError("polynomials only take non-negative integer powers")
        out = APolynomial(self.algebra, [self.algebra.one()])
        for _ in range(int(n)):
            out = out * self
        return out

    def __call__(self, x: Element) -> Element:
        acc = x.algebra.zero()
        embed = (lambda c: c) if x.algebra == self.algebra else _embedder(self.algebra, x.algebra)
        for c in reversed(self.coeffs):
            acc = mul(acc, x) + embed(c)
        return acc

    def derivative(self) -> "APolynomial":
        return APolynomial(self.algebra, [i * c for i, c in enumerate(self.coeffs) if i > 0])

    def shift(self, alpha: Element) -> "APolynomial":
        """Return ``q(x) = p(x + alpha)``."""
        xa = APolynomial(self.algebra, [alpha, self.algebra.one()])
        out = APolynomial(self.algebra, [])
        for c in reversed(self.coeffs):
            out = out * xa + c
        return out

    def __repr__(self):
        return f"APolynomial({self.algebra.name}, {self})"

    def __str__(self):
        return poly_text(self.coeffs, "x")


def poly_text(coeffs: Sequence[Element], var: str) -> str:
    """``x^2 - 3*x + 2`` style text; non-scalar coefficients are parenthesised."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not np.any(c.coords):
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        A = c.algebra
        s = float(c.coords @ A.unity) / float(A.unity @ A.unity)
        if np.array_equal(c.coords, s * A.unity):
            mag = format_number(abs(s))
            body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
            parts.append(("-" if s < 0 else "+", body))
        else:
            txt = format_element(c)
            parts.append(("+", f"({txt})*{mono}" if mono else f"({txt})"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _embedder(base: Algebra, target: Algebra):
    if target.dim % base.dim == 0 and np.allclose(target.unity[:base.dim], base.unity) \
            and not np.any(target.unity[base.dim:]):
        return lambda c: Element(target, np.concatenate([c.coords, np.zeros(target.dim - base.dim)]))
    raise AlgebraMismatchError(f"cannot embed {base.name} into {target.name}")


def _as_apoly(A: Algebra, p) -> APolynomial:
    if isinstance(p, APolynomial):
        if p.algebra != A:
            raise AlgebraMismatchError(f"polynomial over {p.algebra.name}, expected {A.name}")
        return p
    return APolynomial(A, list(p))


# ---------------------------------------------------------------------------
# extensions


def _power_label(label: str, b: int) -> str:
    return label if b == 1 else f"{label}^{b}"


@dataclass(frozen=True, eq=False)
class ExtensionAlgebra:
    """The quotient ``base[x]/<modulus>`` with module basis ``1, k, ..., k^(n-1)``.

    Carrier slot ``(a, b)`` (base basis vector ``v_a`` times ``k^b``) sits at
    index ``b * dim(base) + a``.
    """

    base: Algebra
    modulus: APolynomial
    carrier: Algebra
    module_rank: int
    embed_table: np.ndarray

    def embed(self, x: Element) -> Element:
        if x.algebra != self.base:
            raise AlgebraMismatchError(f"{x.algebra.name} is not the base {self.base.name}")
        c = np.zeros(self.carrier.dim)
        c[: self.base.dim] = x.coords
        return Element(self.carrier, c)

    @property
    def k(self) -> Element:
        if self.module_rank == 1:
            # p = x + a_0, so k = -a_0
            return self.embed(-self.modulus.coeffs[0])
        m = self.base.dim
        c = np.zeros(self.carrier.dim)
        c[m:2 * m] = self.base.unity
        return Element(self.carrier, c)

    def k_power(self, j: int) -> Element:
        return integer_power(self.k, j)

    def components(self, X: Element) -> list:
        """Split a carrier element into base elements ``f_1 .. f_n`` with ``X = sum f_b k^(b-1)``."""
        if X.algebra != self.carrier:
            raise AlgebraMismatchError(f"{X.algebra.name} is not this extension's carrier")
        m = self.base.dim
        return [Element(self.base, X.coords[b * m:(b + 1) * m]) for b in range(self.module_rank)]

    def assemble(self, parts: Sequence[Element]) -> Element:
        m = self.base.dim
        c = np.zeros(self.carrier.dim)
        for b, f in enumerate(parts):
            c[b * m:(b + 1) * m] = f.coords
        return Element(self.carrier, c)


def _reduction_table(A: Algebra, monic: APolynomial) -> list:
    """``red[e][r]`` = base coordinates of the coefficient of ``k^r`` in ``k^e``."""
    n = monic.degree
    m = A.dim
    a = [c.coords for c in monic.coeffs[:n]]
    red = []
    for e in range(2 * n - 1):
        if e < n:
            t = np.zeros((n, m))
            t[e] = A.unity
        else:
            prev = red[-1]
            t = np.zeros((n, m))
            t[1:] = prev[:-1]
            top = prev[n - 1]
            for r in range(n):
                t[r] -= A.mul_coords(top, a[r])
        red.append(t)
    return red


def extend(A: Algebra, p, label: str = "k", name: Optional[str] = None) -> ExtensionAlgebra:
    """Characteristic extension ``A[x]/<p(x)>`` for a monic ``p`` over ``A``."""
    p = _as_apoly(A, p)
    if p.degree < 1:
        raise NotMonicError("modulus must have degree at least 1")
    if not p.is_monic():
        raise NotMonicError(f"modulus {p} is not monic")
    n, m = p.degree, A.dim
    C = A.structure
    red = _reduction_table(A, p)
    big = np.zeros((n * m, n * m, n * m))
    for b in range(n):
        for d in range(n):
            block = np.einsum("acg,rh,ghl->acrl", C, red[b + d], C)
            big[b * m:(b + 1) * m, d * m:(d + 1) * m, :] = block.reshape(m, m, n * m)
    unity = np.zeros(n * m)
    unity[:m] = A.unity
    labels = []
    base_unit_label = A.basis_labels[0] if (A.unity[0] == 1 and np.count_nonzero(A.unity) == 1) else None
    for b in range(n):
        for la in A.basis_labels:
            if b == 0:
                labels.append(la)
            elif la == base_unit_label:
                labels.append(_power_label(label, b))
            else:
                labels.append(f"{la}*{_power_label(label, b)}")
    if name is None:
        name = f"{A.name}[{label}]/({p})"
    carrier = Algebra(name, labels, big, unity)
    table = np.array([[b * m + a for b in range(n)] for a in range(m)], dtype=int)
    table.setflags(write=False)
    return ExtensionAlgebra(A, p, carrier, n, table)


def from_presentation(p, name: Optional[str] = None, label: str = "k") -> Algebra:
    """The real algebra ``R[x]/<p>`` with basis ``1, k, ..., k^(deg-1)``.

    ``p`` is a sequence of real coefficients, lowest degree first, or an
    :class:`APolynomial` over the reals.
    """
    if isinstance(p, APolynomial):
        p = [float(c.coords[0]) for c in p.coeffs]
    coeffs = [float(c) for c in p]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise NotMonicError("presentation polynomial must have degree at least 1")
    if coeffs[-1] != 1.0:
        raise NotMonicError(f"presentation polynomial is not monic: leading coefficient {coeffs[-1]}")
    if name is None:
        name = f"R[{label}]/({_real_poly_text(coeffs)})"
    ext = extend(REALS, coeffs, label=label, name=name)
    return ext.carrier


def _real_poly_text(coeffs) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        mag = format_number(abs(c))
        body = mag if not mono else (mono if mag == "1" else f"{mag}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f"{s}{body}"
    return out


# ---------------------------------------------------------------------------
# direct products


@dataclass(frozen=True, eq=False)
class DirectProduct:
    algebra: Algebra
    factors: tuple
    idempotents: tuple
    offsets: tuple

    def split(self, x: Element) -> list:
        if x.algebra != self.algebra:
            raise AlgebraMismatchError(f"{x.algebra.name} is not {self.algebra.name}")
        return [Element(F, x.coords[o:o + F.dim]) for F, o in zip(self.factors, self.offsets)]

    def join(self, parts: Sequence[Element]) -> Element:
        c = np.zeros(self.algebra.dim)
        for F, o, p in zip(self.factors, self.offsets, parts):
            if p.algebra != F:
                raise AlgebraMismatchError(f"{p.algebra.name} is not factor {F.name}")
            c[o:o + F.dim] = p.coords
        return Element(self.algebra, c)


def _sanitize(label: str) -> str:
    return "".join(ch for ch in label if ch.isalnum() or ch == "_")


def direct_product(As: Sequence[Algebra], name: Optional[str] = None) -> DirectProduct:
    """Componentwise product; returns the algebra with its orthogonal idempotents."""
    As = tuple(As)
    if not As:
        raise StructureError("direct product needs at least one factor")
    if len(As) == 1:
        A = As[0]
        return DirectProduct(A, As, (A.one(),), (0,))
    dims = [A.dim for A in As]
    N = sum(dims)
    offsets = tuple(int(o) for o in np.cumsum([0] + dims[:-1]))
    C = np.zeros((N, N, N))
    unity = np.zeros(N)
    labels = []
    for r, (A, o) in enumerate(zip(As, offsets), start=1):
        C[o:o + A.dim, o:o + A.dim, o:o + A.dim] = A.structure
        unity[o:o + A.dim] = A.unity
        for i, la in enumerate(A.basis_labels):
            if i == 0 and A.unity[0] == 1 and np.count_nonzero(A.unity) == 1:
                labels.append(f"e{r}")
            else:
                labels.append(f"{_sanitize(la)}_{r}")
    if name is None:
        name = "×".join(A.name for A in As)
    P = Algebra(name, labels, C, unity)
    idem = []
    for A, o in zip(As, offsets):
        c = np.zeros(N)
        c[o:o + A.dim] = A.unity
        idem.append(Element(P, c))
    return DirectProduct(P, As, tuple(idem), offsets)


# ---------------------------------------------------------------------------
# named families


def _cyclic(n: int, sign: float) -> np.ndarray:
    C = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            s = a + b
            if s < n:
                C[a, b, s] = 1.0
            else:
                C[a, b, s - n] = sign
    return C


def named_algebra(family: str, n: int = 2) -> Algebra:
    """``Hn`` (j^n = 1), ``Cn`` (i^n = -1) or ``Gamma`` (dual numbers, eps^2 = 0)."""
    fam = family.lower()
    if fam in ("gamma", "dual"):
        C = np.zeros((2, 2, 2))
        C[0, 0, 0] = C[0, 1, 1] = C[1, 0, 1] = 1.0
        return Algebra("Gamma", ["1", "eps"], C)
    if fam not in ("hn", "cn", "h", "c"):
        raise ValueError(f"unknown algebra family {family!r}")
    if n < 1:
        raise ValueError("family index must be at least 1")
    if n == 1:
        return REALS
    hyper = fam.startswith("h")
    sym = "j" if hyper else "i"
    labels = ["1"] + [_power_label(sym, a) for a in range(1, n)]
    name = ("H" if hyper else "C") + ("" if n == 2 else str(n))
    return Algebra(name, labels, _cyclic(n, 1.0 if hyper else -1.0))


def hyperbolic() -> Algebra:
    return named_algebra("Hn", 2)


def complex_numbers() -> Algebra:
    return named_algebra("Cn", 2)


def dual_numbers() -> Algebra:
    return named_algebra("Gamma")


# ---------------------------------------------------------------------------
# isomorphisms


class Isomorphism:
    """Linear algebra isomorphism ``source -> target`` acting on coordinates."""

    def __init__(self, source: Algebra, target: Algebra, matrix, inverse_matrix=None,
                 product: Optional[DirectProduct] = None, *, validate: bool = True):
        M = np.array(matrix, dtype=float)
        if M.shape != (target.dim, source.dim) or source.dim != target.dim:
            raise StructureError("isomorphism matrix has the wrong shape")
        Minv = np.linalg.inv(M) if inverse_matrix is None else np.array(inverse_matrix, dtype=float)
        M.setflags(write=False)
        Minv.setflags(write=False)
        self.source = source
        self.target = target
        self.matrix = M
        self.inverse_matrix = Minv
        self.product = product
        if validate:
            self._validate()

    def _validate(self, pairs: int = 16):
        n = self.source.dim
        if np.abs(self.matrix @ self.inverse_matrix - np.eye(n)).max() > 1e-12 * max(1.0, np.abs(self.matrix).max()):
            raise StructureError("isomorphism matrix and inverse do not match")
        if np.abs(self.matrix @ self.source.unity - self.target.unity).max() > 1e-12:
            raise StructureError("map does not send unity to unity")
        rng = np.random.default_rng(0)
        for _ in range(pairs):
            x = self.source.random(rng)
            y = self.source.random(rng)
            lhs = self(mul(x, y))
            rhs = mul(self(x), self(y))
            if not lhs.isclose(rhs, 1e-10):
                raise StructureError("map is not multiplicative")

    def __call__(self, x: Element) -> Element:
        return apply_iso(self, x)

    def inverse(self, y: Element) -> Element:
        return apply_iso_inv(self, y)

    def __repr__(self):
        return f"Isomorphism({self.source.name} -> {self.target.name})"


def apply_iso(psi: Isomorphism, x: Element) -> Element:
    if x.algebra != psi.source:
        raise AlgebraMismatchError(f"{x.algebra.name} is not the source {psi.source.name}")
    return Element(psi.target, psi.matrix @ x.coords)


def apply_iso_inv(psi: Isomorphism, y: Element) -> Element:
    if y.algebra != psi.target:
        raise AlgebraMismatchError(f"{y.algebra.name} is not the target {psi.target.name}")
    return Element(psi.source, psi.inverse_matrix @ y.coords)


def _family_of(A: Algebra):
    n = A.dim
    if n == 1 and A.same_structure(REALS):
        return "R", 1
    for fam in ("Hn", "Cn"):
        if n >= 2 and A.same_structure(named_algebra(fam, n)):
            return fam, n
    return None


def canonical_isomorphism(A: Algebra) -> Isomorphism:
    """Explicit splitting of ``Hn`` or ``Cn`` into a product of copies of R and C.

    Real factors come first (``j -> 1`` then ``j -> -1`` for even ``Hn``),
    followed by one complex factor per conjugate pair of roots with positive
    imaginary part, in increasing argument.
    """
    fam = _family_of(A)
    if fam is None:
        raise NoIsomorphismError(f"no canonical isomorphism for {A.name}")
    kind, n = fam
    if kind == "R":
        return Isomorphism(A, A, np.eye(1), product=direct_product([A]))
    if kind == "Hn":
        real = [1.0] + ([-1.0] if n % 2 == 0 else [])
        cplx = [cmath.exp(2j * math.pi * m / n) for m in range(1, (n - 1) // 2 + 1)]
    else:
        real = [-1.0] if n % 2 == 1 else []
        cplx = [cmath.exp(1j * math.pi * (2 * m + 1) / n) for m in range(n // 2)]
    C = complex_numbers()
    prod = direct_product([REALS] * len(real) + [C] * len(cplx))
    rows = []
    for r in real:
        rows.append([r ** a for a in range(n)])
    for w in cplx:
        powers = [w ** a for a in range(n)]
        rows.append([p.real for p in powers])
        rows.append([p.imag for p in powers])
    return Isomorphism(A, prod.algebra, snap(np.array(rows), 1e-14), product=prod)
