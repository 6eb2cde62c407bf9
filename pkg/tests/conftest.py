import random
from fractions import Fraction

import pytest

from exactframes import FiniteCombo, SpaceDescriptor, VectorName


@pytest.fixture
def H():
    return SpaceDescriptor()


def combo(space, terms):
    return FiniteCombo(space, {k: Fraction(v) for k, v in terms.items()})


def vec(space, terms):
    return VectorName.from_combo(combo(space, terms))


def random_combo(rng: random.Random, space, max_terms=8, den=16, indices=24):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[rng.randrange(indices)] = Fraction(rng.randint(-den, den),
                                                 rng.randint(1, den))
    return combo(space, terms)
