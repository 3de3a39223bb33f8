import numpy as np
import pytest

from acalc import REALS, complex_numbers, direct_product, dual_numbers, hyperbolic, named_algebra


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def H():
    return hyperbolic()


@pytest.fixture
def C():
    return complex_numbers()


@pytest.fixture
def G():
    return dual_numbers()


@pytest.fixture
def RR():
    return direct_product([REALS, REALS])


def sample_algebras():
    return [
        REALS,
        hyperbolic(),
        complex_numbers(),
        dual_numbers(),
        named_algebra("Hn", 3),
        named_algebra("Cn", 3),
        named_algebra("Hn", 4),
        direct_product([REALS, complex_numbers()]).algebra,
    ]
