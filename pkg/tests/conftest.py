import itertools
import random

import pytest

from multinet.graphstate import Graph


def random_graph(rng: random.Random, n: int, edge_prob: float = 0.5) -> Graph:
    edges = [
        (a, b)
        for a, b in itertools.combinations(range(n), 2)
        if rng.random() < edge_prob
    ]
    return Graph(range(n), edges)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)
