import numpy as np
import pytest

from macwt.probability import (
    InputDistribution,
    MacWiretapChannel,
    sample_channel,
    sample_input,
)


def identity_channel(size: int = 2) -> MacWiretapChannel:
    """K=1, Y = Z = X."""
    pmf = np.zeros((size, size, size))
    for x in range(size):
        pmf[x, x, x] = 1.0
    return MacWiretapChannel((size,), size, size, pmf)


def independent_eve_channel(rng: np.random.Generator, input_sizes, y_size, z_size):
    """Z independent of all inputs (and of Y)."""
    p_y = rng.random(tuple(input_sizes) + (y_size,)) + 0.05
    p_y /= p_y.sum(axis=-1, keepdims=True)
    p_z = rng.random(z_size) + 0.05
    p_z /= p_z.sum()
    pmf = p_y[..., :, None] * p_z
    return MacWiretapChannel(tuple(input_sizes), y_size, z_size, pmf)


def bsc_eavesdropper(crossover: float) -> MacWiretapChannel:
    """K=1 binary: Bob sees X perfectly, Eve sees X through a BSC."""
    pmf = np.zeros((2, 2, 2))
    for x in range(2):
        for z in range(2):
            pz = 1 - crossover if z == x else crossover
            pmf[x, x, z] = pz
    return MacWiretapChannel((2,), 2, 2, pmf)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


__all__ = [
    "identity_channel",
    "independent_eve_channel",
    "bsc_eavesdropper",
    "sample_channel",
    "sample_input",
    "InputDistribution",
]
