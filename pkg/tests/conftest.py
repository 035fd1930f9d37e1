from pathlib import Path

import numpy as np
import pytest

from discord_lab.graph import complete_graph, cycle_graph, path_graph, random_connected_graph, star_graph

DATA = Path(__file__).parent / "data"


def random_graphs(count: int, seed: int, n_min: int = 2, n_max: int = 30, weighted: bool = True):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.uniform(0.05, 0.6))
        out.append(random_connected_graph(n, rng, edge_prob=p, weights=(0.1, 3.0) if weighted else None))
    return out


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def p2():
    return path_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def s3():
    return star_graph(3)
