from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from grcp.graded import Window
from grcp.instances.graph import estar_graph, two_sink_graph
from grcp.instances.lpa import build_lpa
from grcp.instances.rings import CrossedProductSpec, build_crossed_product, diagonal_ring, permutation_map

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

WINDOW = Window(-4, 4, 8)


@pytest.fixture(scope="session")
def estar():
    return estar_graph()


@pytest.fixture(scope="session")
def lpa_estar(estar):
    return build_lpa(estar, WINDOW)


@pytest.fixture(scope="session")
def toeplitz_estar(estar):
    return build_lpa(estar, WINDOW, cuntz_krieger=False)


@pytest.fixture(scope="session")
def lpa_two_sink():
    return build_lpa(two_sink_graph(), WINDOW)


@pytest.fixture(scope="session")
def crossed_k2():
    K2 = diagonal_ring(2)
    spec = CrossedProductSpec(K2, permutation_map(K2, {"e1": "e2", "e2": "e1"}), WINDOW)
    return build_crossed_product(spec)
