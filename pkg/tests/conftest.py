import math

import pytest

from ergolab.numutil import counter_rng
from ergolab.systems import Cyclic, Observable, ProductSystem, Rotation, Skew

ALPHA = math.sqrt(2) - 1        # the workhorse irrational angle
ALPHA3 = math.sqrt(3) % 1


@pytest.fixture
def rot():
    return Rotation(ALPHA)


@pytest.fixture
def rot2d():
    return Rotation(ALPHA, math.sqrt(5) % 1)


@pytest.fixture
def skew():
    return Skew(ALPHA)


@pytest.fixture
def cyc2():
    return Cyclic(2)


@pytest.fixture
def prod(rot, cyc2):
    return ProductSystem(rot, cyc2)


def random_trigpoly(rng, degree: int = 4, dim: int = 1, scale: float = 0.25) -> Observable:
    coeffs = {}
    for k in range(-degree, degree + 1):
        coeffs[(k,) + (0,) * (dim - 1)] = scale * complex(rng.normal(), rng.normal())
    return Observable(coeffs=coeffs)


def seeded(seed: int):
    return counter_rng(seed)
