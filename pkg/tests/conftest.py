import random

import pytest

from clustermut import ExchangeMatrix

A2 = [[0, 1], [-1, 0]]
B2 = [[0, 1], [-2, 0]]
G2 = [[0, 1], [-3, 0]]
A3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
MARKOV = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]
WILD2 = [[0, 3], [-3, 0]]


@pytest.fixture
def a2():
    return ExchangeMatrix.from_rows(A2)


@pytest.fixture
def b2():
    return ExchangeMatrix.from_rows(B2)


@pytest.fixture
def g2():
    return ExchangeMatrix.from_rows(G2)


@pytest.fixture
def a3():
    return ExchangeMatrix.from_rows(A3)


@pytest.fixture
def markov():
    return ExchangeMatrix.from_rows(MARKOV)


@pytest.fixture
def rng():
    return random.Random(20240811)
