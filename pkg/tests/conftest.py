"""Shared test fixtures and configuration."""

import json
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
import pytest
from hypothesis import HealthCheck
from hypothesis import settings as hypothesis_settings

# Add the root directory to Python path so we can import lapbound
sys.path.insert(0, str(Path(__file__).parent.parent))

from lapbound.core.config import Settings, get_settings, reset_settings
from lapbound.models.complex import Graph, SimplicialComplex
from lapbound.services.complex_service import flag_complex, from_maximal_faces

# Spectra of random complexes routinely exceed the default deadline;
# the autouse settings reset is per test, not per example
hypothesis_settings.register_profile(
    "lapbound",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
hypothesis_settings.load_profile("lapbound")


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from settings read from the current environment."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def override_settings(monkeypatch) -> Callable[..., Settings]:
    """Apply LAPBOUND_* overrides and return the re-read settings."""

    def _apply(**values) -> Settings:
        for key, value in values.items():
            monkeypatch.setenv(f"LAPBOUND_{key}", str(value))
        reset_settings()
        return get_settings()

    return _apply


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for property-style tests."""
    return np.random.Generator(np.random.Philox(key=20240611))


def make_graph(vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(vertices=tuple(vertices), edges=frozenset(tuple(e) for e in edges))


@pytest.fixture
def graph() -> Callable[..., Graph]:
    """Graph factory: graph(vertices, edges)."""
    return make_graph


@pytest.fixture
def triangle_boundary() -> SimplicialComplex:
    """Hollow triangle on 1, 2, 3: f = (1, 3, 3), b_1 = 1."""
    return from_maximal_faces([1, 2, 3], [[1, 2], [1, 3], [2, 3]])


@pytest.fixture
def full_triangle() -> SimplicialComplex:
    return from_maximal_faces([1, 2, 3], [[1, 2, 3]])


@pytest.fixture
def full_simplex4() -> SimplicialComplex:
    """Full simplex on four vertices: L_1 = 4I."""
    return from_maximal_faces([1, 2, 3, 4], [[1, 2, 3, 4]])


@pytest.fixture
def triangle_graph() -> Graph:
    return make_graph([1, 2, 3], [(1, 2), (1, 3), (2, 3)])


@pytest.fixture
def path_graph() -> Graph:
    """Path 1 - 2 - 3."""
    return make_graph([1, 2, 3], [(1, 2), (2, 3)])


@pytest.fixture
def four_cycle() -> Graph:
    """Cycle 0 - 1 - 2 - 3 - 0 on the universe 0..3."""
    return make_graph(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def k4_minus_edge() -> Graph:
    """K4 on 1..4 without the edge {1, 2}."""
    return make_graph([1, 2, 3, 4], [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


@pytest.fixture
def five_cycle_flag() -> SimplicialComplex:
    """Flag complex of the 5-cycle; it has no triangles."""
    return flag_complex(make_graph(range(5), [(i, (i + 1) % 5) for i in range(5)]))


@pytest.fixture
def write_complex(tmp_path) -> Callable[..., Path]:
    """Write a complex file into tmp_path and return its path."""

    def _write(name: str, vertices: Sequence[int], maximal_faces: Sequence[Sequence[int]]) -> Path:
        path = tmp_path / name
        path.write_text(
            json.dumps({"vertices": list(vertices), "maximal_faces": [list(f) for f in maximal_faces]}),
            encoding="utf-8",
        )
        return path

    return _write
