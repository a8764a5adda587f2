import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from systemic import WeightedGraph, generate

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def k3() -> WeightedGraph:
    return generate("complete", 3)


@pytest.fixture
def p3() -> WeightedGraph:
    return generate("path", 3)


@pytest.fixture
def c4() -> WeightedGraph:
    return generate("cycle", 4)


@pytest.fixture
def star4() -> WeightedGraph:
    return generate("star", 4)
