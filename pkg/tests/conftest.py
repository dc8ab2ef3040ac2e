import pytest

from cluster_lab.packings import (
    _apollonian_bfs,
    generate_apollonian,
)


@pytest.fixture(scope="session")
def apollonian_1e3():
    """Nodes and tangent quadruples of the canonical gasket at 1e-3."""
    return _apollonian_bfs(1e-3)


@pytest.fixture(scope="session")
def apollonian_disks_1e4():
    return generate_apollonian(1e-4)
