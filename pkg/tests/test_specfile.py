import numpy as np
import pytest

from acalc import NotMonicError, ParseError, named_algebra
from acalc.linear import CauchyEulerProblem, ConstCoeffOperator
from acalc.specfile import load_spec, operator_from_equation, parse_spec

HYPERBOLIC = """\
# split-complex numbers
algebra Hs dim 2 basis 1 j
mul j j = 1
ode L over Hs : w'' - (1+j)*w' + j*w = 0
"""


def test_explicit_algebra_and_ode():
    doc = parse_spec(HYPERBOLIC)
    Hs = doc.algebra("Hs")
    assert np.array_equal(Hs.structure, named_algebra("Hn", 2).structure)
    ode = doc.odes["L"]
    assert ode.kind == "constant" and ode.line == 4
    op = ode.operator
    assert [c.coords.tolist() for c in op.coeffs] == [[0, 1], [-1, -1], [1, 0]]


def test_presentation_product_extension():
    doc = parse_spec("algebra Cx = R[x]/(x^2+1)\n"
                     "algebra P = product(R, Cx)\n"
                     "algebra E = extend(H, x^2 - j)\n")
    assert doc.algebra("Cx").same_structure(named_algebra("Cn", 2))
    assert doc.algebra("P").dim == 3 and "P" in doc.products
    assert doc.algebra("E").dim == 4 and "E" in doc.extensions


def test_builtin_names(H):
    doc = parse_spec("")
    assert doc.algebra("H3").dim == 3 and doc.algebra("Gamma").dim == 2
    assert np.array_equal(doc.algebra("H").structure, H.structure)


def test_cauchy_euler_ode():
    doc = parse_spec("ode E over H : z^2*w'' + 3*z*w' + w = 0\n")
    assert doc.odes["E"].kind == "cauchy-euler"
    assert isinstance(doc.odes["E"].problem, CauchyEulerProblem)


def test_field():
    doc = parse_spec("field F over H : w' = w^2*sin(z)\nfield S over C : u' = v; v' = -u\n")
    assert doc.fields["F"].field.size == 1
    assert list(doc.fields["S"].field.variables) == ["u", "v"]


@pytest.mark.parametrize("text,line,msg", [
    ("algebra A dim 2 basis 1 j\n", 1, "missing mul row"),
    ("algebra A dim 2 basis 1 j\nmul j j = 1\nmul j j = 2\n", 3, "duplicate"),
    ("algebra A dim 2 basis 1 j\nmul j q = 1\n", 2, "unknown basis label"),
    ("algebra A dim 2 basis 1 j\nmul j j = 1 + q\n", 2, "q"),
    ("algebra A dim 3 basis 1 j\n", 1, "basis labels"),
    ("algebra A = R[x]/(x^2 +* 1)\n", 1, "unexpected"),
    ("ode L over Nope : w' = 0\n", 1, "Nope"),
    ("ode L over H : w'*w = 0\n", 1, "not linear"),
    ("ode L over H : w' + w = 1\n", 1, "right-hand side"),
    ("frobnicate\n", 1, "unknown statement"),
    ("\n\nmul j j = 1\n", 3, "outside"),
])
def test_errors_carry_line(text, line, msg):
    with pytest.raises(ParseError, match=msg) as err:
        parse_spec(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}")


def test_syntax_error_column():
    with pytest.raises(ParseError) as err:
        parse_spec("algebra A = R[x]/(x^2 +* 1)\n")
    assert err.value.column == 24


def test_non_monic_modulus():
    with pytest.raises((ParseError, NotMonicError), match="monic"):
        parse_spec("algebra A = R[x]/(2*x^2+1)\n")


def test_non_associative_table_rejected():
    with pytest.raises(ParseError):
        parse_spec("algebra A dim 3 basis 1 a b\nmul a a = b\nmul a b = 1\nmul b b = a + b\n")


def test_operator_from_equation(H):
    op = operator_from_equation(H, "w''+w=0")
    assert isinstance(op, ConstCoeffOperator) and op.order == 2
    with pytest.raises(ParseError, match="mixes"):
        operator_from_equation(H, "z*w'' + w = 0")


def test_load_spec(tmp_path):
    p = tmp_path / "h.spec"
    p.write_text(HYPERBOLIC, encoding="utf-8")
    assert "L" in load_spec(str(p)).odes
