"""Test configuration and fixtures for pytest."""

import numpy as np
import pytest

from app.config import settings
from app.core import validate_point_set
from app.generators import generate
from app.logging_config import configure_logging
from app.models import Family, GeneratorSpec, PointSet

GOLDEN_RATIO = (1.0 + 5.0 ** 0.5) / 2.0


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Route structured logs through stdlib logging at WARNING."""
    configure_logging("WARNING", "console")


def random_points(n: int, dim: int = 1, seed: int = 0) -> PointSet:
    """Seeded RANDOM point set."""
    return generate(GeneratorSpec(family=Family.RANDOM, dim=dim, count=n, seed=seed))


@pytest.fixture
def rng():
    """Seeded numpy generator for property tests."""
    return np.random.default_rng(20240611)


@pytest.fixture
def grid_1d_10() -> PointSet:
    """GRID d=1 N=10."""
    return generate(GeneratorSpec(family=Family.GRID, dim=1, count=10))


@pytest.fixture
def grid_2d_4() -> PointSet:
    """GRID d=2 N=4 (2x2)."""
    return generate(GeneratorSpec(family=Family.GRID, dim=2, count=4))


@pytest.fixture
def kronecker_golden() -> PointSet:
    """{n φ}, n = 1..5000."""
    return generate(GeneratorSpec(family=Family.KRONECKER, dim=1, count=5000, alpha=[GOLDEN_RATIO]))


@pytest.fixture
def origin_cluster() -> PointSet:
    """Sixteen copies of the origin in d=1."""
    return validate_point_set(np.zeros((16, 1)))


@pytest.fixture
def small_lattice_budget(monkeypatch):
    """Keep truncated Parseval sums small in unit tests."""
    monkeypatch.setattr(settings, "PARSEVAL_MAX_LATTICE", 20_000)
    return settings.PARSEVAL_MAX_LATTICE


@pytest.fixture
def tiny_blocks(monkeypatch):
    """Force many small work blocks to exercise chunking."""
    monkeypatch.setattr(settings, "PAIR_BLOCK_ELEMENTS", 257)
    monkeypatch.setattr(settings, "SPECTRUM_BLOCK_ELEMENTS", 311)


@pytest.fixture
def make_random():
    """Factory for seeded RANDOM point sets: make_random(n, dim, seed)."""
    return random_points
