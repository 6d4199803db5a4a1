"""Shared fixtures: small hand-verified complexes and random instance generators."""

from __future__ import annotations

import random

import pytest

from morseflow import (
    MorseFunction,
    SimplicialComplex,
    build_complex,
    random_morse,
    validate,
)


@pytest.fixture(scope="session")
def point() -> SimplicialComplex:
    return build_complex([(0,)])


@pytest.fixture(scope="session")
def edge() -> SimplicialComplex:
    return build_complex([(0, 1)])


@pytest.fixture(scope="session")
def p3() -> SimplicialComplex:
    """Path on vertices 1, 2, 3."""
    return build_complex([(1, 2), (2, 3)])


@pytest.fixture(scope="session")
def p3_function(p3) -> MorseFunction:
    """Critical cells: vertices 1 and 3 and the edge 23; pair (2, 12)."""
    return validate(p3, {(1,): 0, (2,): 3, (3,): 1, (1, 2): 2, (2, 3): 4})


@pytest.fixture(scope="session")
def triangle() -> SimplicialComplex:
    return build_complex([(0, 1, 2)])


@pytest.fixture(scope="session")
def triangle_function(triangle) -> MorseFunction:
    """Collapsible fixture: single critical vertex 0."""
    return validate(
        triangle,
        {(0,): 0, (1,): 2, (0, 1): 1, (2,): 3, (0, 2): 2.5, (1, 2): 4, (0, 1, 2): 3.5},
    )


@pytest.fixture(scope="session")
def circle() -> SimplicialComplex:
    return build_complex([(0, 1), (0, 2), (1, 2)])


@pytest.fixture(scope="session")
def circle_function(circle) -> MorseFunction:
    """Critical cells: vertex 0 and edge 12."""
    return validate(circle, {(0,): 0, (1,): 2, (0, 1): 1, (2,): 4, (0, 2): 3, (1, 2): 5})


@pytest.fixture(scope="session")
def two_triangles() -> SimplicialComplex:
    """Two triangles glued along the edge 12."""
    return build_complex([(0, 1, 2), (1, 2, 3)])


@pytest.fixture(scope="session")
def double_well(two_triangles) -> MorseFunction:
    """Minima at vertices 0 and 3, single ridge edge 13 (value 10)."""
    return validate(
        two_triangles,
        {
            (0,): 0,
            (3,): 1,
            (0, 1): 1.5,
            (1,): 2,
            (1, 2): 3,
            (2,): 4,
            (0, 1, 2): 5,
            (0, 2): 6,
            (1, 3): 10,
            (1, 2, 3): 11,
            (2, 3): 12,
        },
    )


def random_complex(rng: random.Random, max_vertices: int = 8, max_cell: int = 4) -> SimplicialComplex:
    """A random complex: face closure of a few random cells of dim <= max_cell - 1."""
    n = rng.randint(1, max_vertices)
    cells = []
    for _ in range(rng.randint(1, 5)):
        size = rng.randint(1, min(max_cell, n))
        cells.append(tuple(sorted(rng.sample(range(n), size))))
    return build_complex(cells)


def random_instance(seed: int, max_vertices: int = 8, max_cell: int = 4):
    """Deterministic (complex, Morse function) pair."""
    rng = random.Random(seed)
    complex = random_complex(rng, max_vertices, max_cell)
    return complex, random_morse(complex, rng.randrange(2**32))
