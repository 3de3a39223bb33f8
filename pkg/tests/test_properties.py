import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from acalc import canonical_isomorphism, exp, log, named_algebra
from acalc.algebra import Kind, classify, format_element, norm, norm_bound, rep_matrix
from acalc.construct import apply_iso
from acalc.expr import eval_element

from conftest import sample_algebras

ALGEBRAS = sample_algebras()
SPLIT = [named_algebra("Hn", 2), named_algebra("Hn", 3), named_algebra("Cn", 2),
         named_algebra("Cn", 3)]

coord = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw, algebras=ALGEBRAS, count=1):
    A = draw(st.sampled_from(algebras))
    xs = [A.element(draw(st.lists(coord, min_size=A.dim, max_size=A.dim))) for _ in range(count)]
    return xs


@given(elements(count=3))
def test_ring_axioms(xs):
    x, y, z = xs
    s = 1 + max(norm(x), norm(y), norm(z)) ** 3
    assert norm(x * y - y * x) <= 1e-12 * s
    assert norm((x * y) * z - x * (y * z)) <= 1e-12 * s
    assert norm(x * (y + z) - (x * y + x * z)) <= 1e-12 * s
    assert (x * x.algebra.one()) == x


@given(elements(count=2))
def test_rep_homomorphism(xs):
    x, y = xs
    lhs = rep_matrix(x * y)
    assert np.allclose(lhs, rep_matrix(x) @ rep_matrix(y), atol=1e-11 * (1 + np.abs(lhs).max()))


@given(elements(count=2))
def test_submultiplicative(xs):
    x, y = xs
    assert norm(x * y) <= norm_bound(x.algebra) * norm(x) * norm(y) + 1e-12


@given(elements())
def test_classify_dichotomy(xs):
    (x,) = xs
    c = classify(x)
    if c.kind is Kind.UNIT:
        assert (x * c.inverse).isclose(x.algebra.one(), 1e-8 * (1 + norm(x) * norm(c.inverse)))
    elif c.kind is Kind.ZERO_DIVISOR:
        for a in c.annihilator_basis:
            assert norm(a) > 0 and norm(x * a) <= 1e-8 * (1 + norm(x)) * norm(a)


@given(elements())
def test_pretty_print_round_trip(xs):
    (x,) = xs
    assert eval_element(format_element(x), x.algebra).coords.tolist() == x.coords.tolist()


@given(elements(count=2))
def test_exp_addition(xs):
    x, y = (0.3 * v for v in xs)
    assert exp(x + y).isclose(exp(x) * exp(y), 1e-10)


@given(elements(SPLIT, count=2))
def test_splitting_is_homomorphism(xs):
    x, y = xs
    iso = canonical_isomorphism(x.algebra)
    assert apply_iso(iso, x * y).isclose(apply_iso(iso, x) * apply_iso(iso, y), 1e-10)


@settings(max_examples=50)
@given(elements(SPLIT))
def test_log_inverts_exp_near_zero(xs):
    (x,) = xs
    x = 0.2 * x
    assert log(exp(x)).isclose(x, 1e-10)
