import numpy as np
import pytest

from qdense.channel import ChannelSpec, random_channel_spec
from qdense.qstate import MixedRadixSpace, Operator, StateVector


def running_spec() -> ChannelSpec:
    """Two 3x2 pairs with squared first coefficients 0.2 and 0.4."""
    return ChannelSpec.from_squared(3, 2, [[0.2, 0.8], [0.4, 0.6]])


RUNNING_BRANCH_PROBS = {
    (0, 0): 0.32,
    (0, 1): 0.08,
    (1, 0): 0.48,
    (1, 1): 0.12,
}


def random_state(dims, seed) -> StateVector:
    rng = np.random.default_rng(seed)
    size = int(np.prod(dims))
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    amps /= np.linalg.norm(amps)
    return StateVector(MixedRadixSpace(tuple(dims)), amps)


def random_unitary(dim, seed) -> Operator:
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(mat)
    return Operator(q, unitary=True)


def spec_corpus(count, base_seed=0):
    return [random_channel_spec(np.random.default_rng(base_seed + i)) for i in range(count)]


@pytest.fixture
def spec() -> ChannelSpec:
    return running_spec()
