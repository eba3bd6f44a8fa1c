import numpy as np
import pytest

from icrates import DiscreteIC


def orthogonal_channel() -> DiscreteIC:
    """Noiseless parallel links: Y1 = X1, Y2 = X2 (binary)."""
    law = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            law[x1, x2, x1, x2] = 1.0
    return DiscreteIC.from_array(law)


def strong_pair_channel() -> DiscreteIC:
    """Both receivers see the full input pair: Y1 = Y2 = (X1, X2)."""
    law = np.zeros((2, 2, 4, 4))
    for x1 in range(2):
        for x2 in range(2):
            pair = x1 * 2 + x2
            law[x1, x2, pair, pair] = 1.0
    return DiscreteIC.from_array(law)


def product_channel(seed: int) -> DiscreteIC:
    """Independent point-to-point pair: p(y1|x1) p(y2|x2)."""
    rng = np.random.default_rng(seed)
    p1 = rng.dirichlet(np.ones(2), size=2)
    p2 = rng.dirichlet(np.ones(2), size=2)
    return DiscreteIC.from_array(np.einsum("ik,jl->ijkl", p1, p2))


def xor_channel() -> DiscreteIC:
    """Y1 = Y2 = X1 xor X2, noiseless."""
    law = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            y = x1 ^ x2
            law[x1, x2, y, y] = 1.0
    return DiscreteIC.from_array(law)


@pytest.fixture
def orthogonal():
    return orthogonal_channel()


@pytest.fixture
def strong_pair():
    return strong_pair_channel()
