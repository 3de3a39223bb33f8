import pytest

from acalc import ParseError, named_algebra
from acalc.expr import (FieldExpr, evaluate, eval_element, parse_expr, parse_linear_lhs, to_text,
                        tokenize)


def ev(text):
    return evaluate(parse_expr(text), {})


@pytest.mark.parametrize("text,value", [
    ("1+2*3", 7.0),
    ("(1+2)*3", 9.0),
    ("2^3^2", 512.0),
    ("-2^2", -4.0),
    ("2^-1", 0.5),
    ("8/4/2", 1.0),
    ("3(1+1)", 6.0),
    ("1e-3*1000", 1.0),
    ("--1", 1.0),
])
def test_precedence(text, value):
    assert ev(text) == pytest.approx(value)


def test_to_text_shows_grouping():
    assert to_text(parse_expr("-2^2")) == "-((2 ^ 2))"


def test_implicit_multiplication_with_labels(H):
    assert eval_element("4j", H) == 4 * H["j"]
    assert eval_element("5+4j", H) == H(5, 4)
    assert eval_element("2(1+j)", H) == H(2, 2)


def test_calls_and_power(H):
    assert eval_element("pow(5+4j, 0.5)", H).isclose(H(2, 1), 1e-12)
    assert eval_element("j^2", H) == H.one()
    assert eval_element("exp(0)", H) == H.one()


@pytest.mark.parametrize("text,col", [
    ("1 + * 2", 5),
    ("(1+2", 5),
    ("1 $ 2", 3),
    ("exp 2", 1),
    ("pow(1)", 1),
])
def test_error_columns(text, col):
    with pytest.raises(ParseError) as err:
        parse_expr(text)
    assert err.value.column == col


def test_unknown_label(H):
    with pytest.raises(ParseError, match="q"):
        eval_element("1+q", H)


def test_tokenizer_primes():
    toks = [t.text for t in tokenize("w''+w")]
    assert toks == ["w''", "+", "w", ""]


def test_linear_lhs(H):
    terms = parse_linear_lhs(parse_expr("w'' - (1+j)*w' + j*w"), H)
    assert terms[(2, 0)] == H.one()
    assert terms[(1, 0)] == H(-1, -1)
    assert terms[(0, 0)] == H["j"]
    ce = parse_linear_lhs(parse_expr("z^2*w''+3*z*w'+w"), H, allow_z=True)
    assert set(ce) == {(2, 2), (1, 1), (0, 0)}


def test_linear_lhs_rejects_nonlinear(H):
    with pytest.raises(ParseError):
        parse_linear_lhs(parse_expr("w*w'"), H)
    with pytest.raises(ParseError):
        parse_linear_lhs(parse_expr("exp(w)"), H)


def test_field_expr(H):
    f = FieldExpr.parse(H, "w^2*sin(z)")
    z, w = H(0.2, 0.1), H(0.5, 0)
    from acalc import sin
    assert f(z, [w])[0].isclose(w * w * sin(z), 1e-15)


def test_element_round_trip(rng):
    for A in (named_algebra("Hn", 3), named_algebra("Gamma"), named_algebra("Cn", 2)):
        for _ in range(20):
            x = A.random(rng)
            assert eval_element(str(x), A).coords.tolist() == x.coords.tolist()
