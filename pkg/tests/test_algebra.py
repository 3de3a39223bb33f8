import math

import numpy as np
import pytest

from acalc import (Algebra, AlgebraMismatchError, Kind, NotInvertibleError, StructureError,
                   classify, format_element, integer_power, named_algebra, norm_bound,
                   null_space, rep_matrix)
from acalc.expr import eval_element

from conftest import sample_algebras


def test_hyperbolic_products(H):
    j = H["j"]
    assert (j * j).coords.tolist() == [1.0, 0.0]
    assert ((2 + j) ** 2).coords.tolist() == [5.0, 4.0]
    assert ((1 + j) * (1 - j)).coords.tolist() == [0.0, 0.0]


def test_structure_validation_rejects_noncommutative():
    C = np.zeros((2, 2, 2))
    C[0, 0, 0] = C[0, 1, 1] = C[1, 0, 1] = 1.0
    C[1, 1, 0] = 1.0
    Algebra("ok", ["1", "j"], C)
    bad = C.copy()
    bad[0, 1, 1] = 2.0
    with pytest.raises(StructureError):
        Algebra("bad", ["1", "j"], bad)


def test_structure_validation_rejects_nonassociative():
    # v1 as unity, v2*v2 = v3, v2*v3 = v2, v3*v3 = v1 is not associative
    C = np.zeros((3, 3, 3))
    for i in range(3):
        C[0, i, i] = C[i, 0, i] = 1.0
    C[1, 1, 2] = 1.0
    C[1, 2, 1] = C[2, 1, 1] = 1.0
    C[2, 2, 0] = 1.0
    with pytest.raises(StructureError, match="associative"):
        Algebra("bad", ["1", "a", "b"], C)


def test_structure_rejects_wrong_shape_and_labels():
    with pytest.raises(StructureError):
        Algebra("x", ["1", "j"], np.zeros((2, 2, 3)))
    with pytest.raises(StructureError):
        Algebra("x", ["1", "1"], np.zeros((2, 2, 2)))


def test_mismatched_algebras_raise(H, C):
    with pytest.raises(AlgebraMismatchError):
        H["j"] + C["i"]
    with pytest.raises(AlgebraMismatchError):
        H["j"] * C["i"]


def test_rep_matrix_columns(H):
    x = H(2, 3)
    M = rep_matrix(x)
    assert np.allclose(M[:, 0], x.coords)
    assert np.allclose(M[:, 1], (x * H["j"]).coords)


def test_classify_hyperbolic_zero_divisor(H):
    c = classify(1 + H["j"])
    assert c.kind is Kind.ZERO_DIVISOR
    assert len(c.annihilator_basis) == 1
    assert c.annihilator_basis[0].coords.tolist() == [1.0, -1.0]


def test_classify_dual_and_unit(G, H):
    c = classify(G["eps"])
    assert c.kind is Kind.ZERO_DIVISOR
    assert c.annihilator_basis[0].coords.tolist() == [0.0, 1.0]
    u = classify(H(2, 1))
    assert u.is_unit
    assert (u.inverse * H(2, 1)).isclose(H.one(), 1e-14)
    assert classify(H.zero()).kind is Kind.ZERO
    with pytest.raises(ValueError):
        classify(H.one(), tol=0)


def test_inverse_raises_on_zero_divisor(H):
    with pytest.raises(NotInvertibleError):
        (1 + H["j"]).inverse()
    with pytest.raises(ZeroDivisionError):
        H.one() / (1 - H["j"])


def test_integer_powers(H):
    x = H(0.5, 2)
    assert integer_power(x, 0) == H.one()
    assert (x ** 3).isclose(x * x * x, 1e-12)
    assert (x ** -2 * x ** 2).isclose(H.one(), 1e-12)


def test_one_minus_j_powers(H):
    # direct computation gives 2^(n-1)(1-j)
    a = 1 - H["j"]
    for n in range(1, 7):
        assert (a ** n).isclose(2 ** (n - 1) * a, 1e-12)
    assert not (a ** 3).isclose(3 * a, 1e-6)


def test_norm_bound_values(H):
    assert norm_bound(H) == pytest.approx(3 * math.sqrt(2))
    C3 = named_algebra("Cn", 3)
    assert norm_bound(C3) == pytest.approx(7 * math.sqrt(3))


def test_null_space_is_reduced_echelon():
    M = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    N = null_space(M)
    assert N.shape == (2, 3)
    assert np.allclose(M @ N.T, 0)
    assert N[0].tolist() == [1.0, -1.0, 0.0]
    assert N[1].tolist() == [0.0, 0.0, 1.0]


@pytest.mark.parametrize("A", sample_algebras(), ids=lambda A: A.name)
def test_format_round_trip(A, rng):
    for _ in range(20):
        x = A.random(rng, 3.0)
        y = eval_element(format_element(x), A)
        assert np.array_equal(x.coords, y.coords)


def test_format_examples(H):
    assert format_element(H(2, 1)) == "2 + j"
    assert format_element(H(0.5, -0.5)) == "0.5 - 0.5*j"
    assert format_element(H.zero()) == "0"
    assert format_element(-H["j"]) == "-j"


def test_algebra_equality_uses_name(H):
    H2 = named_algebra("Hn", 2)
    assert H == H2
    other = Algebra("K", H.basis_labels, H.structure)
    assert other != H
    assert other.same_structure(H)
