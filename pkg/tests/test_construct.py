import numpy as np
import pytest

from acalc import (REALS, APolynomial, NoIsomorphismError, NotMonicError, StructureError,
                   apply_iso, apply_iso_inv, canonical_isomorphism, classify, direct_product,
                   dual_numbers, extend, from_presentation, named_algebra)
from acalc.construct import Isomorphism


def test_presentation_gives_complex_numbers():
    A = from_presentation([1, 0, 1], name="CC")
    k = A["k"]
    assert (k * k).coords.tolist() == [-1.0, 0.0]
    assert A.same_structure(named_algebra("Cn", 2))


def test_presentation_rejects_non_monic():
    with pytest.raises(NotMonicError):
        from_presentation([1, 0, 2])
    with pytest.raises(NotMonicError):
        from_presentation([3])


def test_named_families():
    H3 = named_algebra("Hn", 3)
    j = H3["j"]
    assert (j ** 3).coords.tolist() == [1.0, 0.0, 0.0]
    assert H3.basis_labels == ("1", "j", "j^2")
    C3 = named_algebra("Cn", 3)
    assert (C3["i"] ** 3).coords.tolist() == [-1.0, 0.0, 0.0]
    assert named_algebra("Hn", 1) is REALS
    assert named_algebra("Hn", 2).name == "H"
    assert named_algebra("Cn", 2).basis_labels == ("1", "i")
    with pytest.raises(ValueError):
        named_algebra("Q", 2)


def test_direct_product_componentwise(RR):
    P = RR.algebra
    e1, e2 = RR.idempotents
    assert (e1 * e2).coords.tolist() == [0.0, 0.0]
    assert (e1 * e1) == e1
    assert (e1 + e2) == P.one()
    x = RR.join([REALS.scalar(2.0), REALS.scalar(-3.0)])
    assert [p.coords[0] for p in RR.split(x)] == [2.0, -3.0]
    assert P.basis_labels == ("e1", "e2")


def test_direct_product_labels_nested():
    C = named_algebra("Cn", 2)
    P = direct_product([REALS, C, C])
    assert P.algebra.basis_labels == ("e1", "e2", "i_2", "e3", "i_3")
    assert P.algebra.name == "R×C×C"
    single = direct_product([C])
    assert single.algebra is C


def test_extension_relation(H):
    j = H["j"]
    E = extend(H, [j, -(1 + j), H.one()])
    k = E.k
    p = E.modulus
    assert p(k).isclose(E.carrier.zero(), 1e-12)
    assert E.carrier.basis_labels == ("1", "j", "k", "j*k")
    assert E.module_rank == 2
    parts = E.components(E.embed(j) + 3 * k)
    assert parts[0] == j and parts[1] == H.scalar(3)


def test_extension_k_powers_reduce(rng):
    A = named_algebra("Cn", 3)
    coeffs = [A.random(rng) for _ in range(3)] + [A.one()]
    E = extend(A, coeffs)
    k = E.k
    lhs = E.k_power(3)
    rhs = -sum((E.embed(c) * E.k_power(i) for i, c in enumerate(coeffs[:3])), E.carrier.zero())
    assert lhs.isclose(rhs, 1e-12)
    assert E.k_power(5).isclose(k * k * k * k * k, 1e-10)


def test_extension_rejects_non_monic(H):
    with pytest.raises(NotMonicError):
        extend(H, [H.one(), H["j"]])
    with pytest.raises(NotMonicError):
        extend(H, [H.one()])


def test_extension_degree_one(H):
    E = extend(H, [-(1 + H["j"]), H.one()])
    assert E.carrier.dim == 2
    assert E.k.coords.tolist() == [1.0, 1.0]


def test_apolynomial_arithmetic(H):
    j = H["j"]
    x = APolynomial.x(H)
    p = (x - 1) * (x - j)
    assert p.degree == 2
    assert p.coefficient(1).isclose(-(1 + j))
    assert p.coefficient(0).isclose(j)
    assert p(H.one()).isclose(H.zero())
    assert p.derivative().coefficient(0).isclose(-(1 + j))
    q = p.shift(j)
    z = H(0.3, -0.7)
    assert q(z).isclose(p(z + j), 1e-12)
    assert str(APolynomial(REALS, [2, -3, 1])) == "x^2 - 3*x + 2"


def test_canonical_isomorphism_hyperbolic(H):
    psi = canonical_isomorphism(H)
    j = H["j"]
    assert apply_iso(psi, H(2, 3)).coords.tolist() == [5.0, -1.0]
    assert apply_iso(psi, 1 + j).coords.tolist() == [2.0, 0.0]
    y = apply_iso(psi, H(0.25, 4))
    assert apply_iso_inv(psi, y).isclose(H(0.25, 4), 1e-14)


def test_canonical_isomorphism_h4():
    H4 = named_algebra("Hn", 4)
    psi = canonical_isomorphism(H4)
    assert psi.target.name == "R×R×C"
    assert apply_iso(psi, H4["j"]).coords.tolist() == [1.0, -1.0, 0.0, 1.0]


@pytest.mark.parametrize("fam", ["Hn", "Cn"])
@pytest.mark.parametrize("n", range(1, 8))
def test_canonical_isomorphism_is_multiplicative(fam, n, rng):
    A = named_algebra(fam, n)
    psi = canonical_isomorphism(A)
    for _ in range(10):
        x, y = A.random(rng), A.random(rng)
        assert apply_iso(psi, x * y).isclose(apply_iso(psi, x) * apply_iso(psi, y), 1e-10)


def test_canonical_isomorphism_detects_by_structure():
    A = from_presentation([-1, 0, 1], name="split")
    psi = canonical_isomorphism(A)
    assert psi.target.basis_labels == ("e1", "e2")


def test_no_isomorphism_for_dual_numbers():
    with pytest.raises(NoIsomorphismError):
        canonical_isomorphism(dual_numbers())


def test_isomorphism_validation_rejects_non_multiplicative(H):
    P = direct_product([REALS, REALS])
    with pytest.raises(StructureError):
        Isomorphism(H, P.algebra, [[1, 1], [1, 2]])


def test_zero_divisors_map_to_component_zeros(H):
    psi = canonical_isomorphism(H)
    for x in (1 + H["j"], 1 - H["j"]):
        assert classify(x).kind.value == "zero-divisor"
        assert np.count_nonzero(apply_iso(psi, x).coords) == 1
