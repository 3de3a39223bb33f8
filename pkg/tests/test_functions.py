import numpy as np
import pytest

from acalc import (LogDomainError, cos, cosh, exp, extend, log, named_algebra, power, sin, sinh,
                   special_functions, sqrt)
from acalc.functions import in_log_domain

from conftest import sample_algebras


def test_exp_of_j(H):
    e = exp(H["j"])
    assert e.coords[0] == pytest.approx(np.cosh(1.0), abs=1e-15)
    assert e.coords[1] == pytest.approx(np.sinh(1.0), abs=1e-15)


def test_complex_exp_matches_cmath(C, rng):
    for _ in range(20):
        a, b = rng.uniform(-2, 2, 2)
        w = np.exp(complex(a, b))
        assert exp(C(a, b)).isclose(C(w.real, w.imag), 1e-12)


def test_dual_exp_is_derivative(G):
    x = G(0.7, 1.0)
    assert exp(x).isclose(G(np.exp(0.7), np.exp(0.7)), 1e-14)
    assert sin(x).isclose(G(np.sin(0.7), np.cos(0.7)), 1e-14)


def test_log_hyperbolic_example(H):
    L = log(5 + 4 * H["j"])
    assert L.isclose(np.log(3) * (1 + H["j"]), 1e-14)


def test_sqrt_hyperbolic(H):
    r = sqrt(5 + 4 * H["j"])
    assert r.isclose(2 + H["j"], 1e-12)
    assert power(5 + 4 * H["j"], 0.5).isclose(2 + H["j"], 1e-12)


@pytest.mark.parametrize("A", sample_algebras(), ids=lambda A: A.name)
def test_exp_log_inverse(A, rng):
    for _ in range(10):
        x = A.random(rng, 0.8)
        assert log(exp(x)).isclose(x, 1e-10)


def test_log_domain_errors(H, G):
    with pytest.raises(LogDomainError, match="not a unit"):
        log(1 + H["j"])
    with pytest.raises(LogDomainError, match="eigenvalue -1"):
        log(H(1, 2))
    with pytest.raises(LogDomainError):
        log(G(-1, 0.5))
    assert in_log_domain(H(2, 1))
    assert not in_log_domain(H(-2, 1))


def test_trig_identities_random(rng):
    A = named_algebra("Hn", 3)
    for _ in range(10):
        x = A.random(rng)
        assert (cos(x) ** 2 + sin(x) ** 2).isclose(A.one(), 1e-12)
        assert (cosh(x) ** 2 - sinh(x) ** 2).isclose(A.one(), 1e-12)
        assert (exp(x) * exp(-x)).isclose(A.one(), 1e-12)


def test_exp_addition_law(H, rng):
    for _ in range(10):
        x, y = H.random(rng), H.random(rng)
        assert exp(x + y).isclose(exp(x) * exp(y), 1e-12)


def test_special_functions_over_reals():
    from acalc import REALS
    E = extend(REALS, [1, 0, 1])
    v = special_functions(E, 0.4)
    assert v.components[0].coords[0] == pytest.approx(np.cos(0.4), abs=1e-14)
    assert v.components[1].coords[0] == pytest.approx(np.sin(0.4), abs=1e-14)
    d = special_functions(E, 0.4, j=1)
    assert d.components[0].coords[0] == pytest.approx(-np.sin(0.4), abs=1e-14)
