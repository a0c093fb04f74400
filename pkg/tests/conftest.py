import numpy as np
import pytest

from walksparse.graph import Graph


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    return Graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    # center 0, leaves 1..3
    return Graph(4, [(0, 1), (0, 2), (0, 3)])


def random_graph(n, p, rng):
    """Erdos-Renyi graph used as oracle fodder throughout the tests."""
    iu, iv = np.triu_indices(n, k=1)
    mask = rng.random(len(iu)) < p
    return Graph(n, list(zip(iu[mask].tolist(), iv[mask].tolist())))
