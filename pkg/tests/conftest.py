"""Shared fixtures: small named graphs with independently computed optima."""

import pytest

from faacut.graphs import Graph

# Optima below were frozen from a standalone brute-force pass over all
# assignments with vertex 0 pinned to side 0 (witness = lexicographically
# smallest optimal bitstring).

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
K4_MIN_ENERGY = -2
K4_MAX_CUT = 4
K4_WITNESS = "0011"

PETERSEN_EDGES = [
    (0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4),
    (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9),
]
PETERSEN_MIN_ENERGY = -9
PETERSEN_MAX_CUT = 12
PETERSEN_WITNESS = "0010111000"

# triangular prism (two triangles joined by a matching), 3-regular on 6
PRISM_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
PRISM_MIN_ENERGY = -5
PRISM_MAX_CUT = 7
PRISM_WITNESS = "001110"


@pytest.fixture
def k4():
    return Graph.from_edges(4, K4_EDGES)


@pytest.fixture
def petersen():
    return Graph.from_edges(10, PETERSEN_EDGES)


@pytest.fixture
def prism():
    return Graph.from_edges(6, PRISM_EDGES)
