import pytest
from faker import Faker

from latticetdma.constants import LatticeKind
from latticetdma.lattice import NetworkExtent


@pytest.fixture
def faker() -> Faker:
    return Faker()


@pytest.fixture(params=[LatticeKind.HEXAGONAL, LatticeKind.SQUARE], ids=["hex", "square"])
def kind(request: pytest.FixtureRequest) -> LatticeKind:
    """Run a test once per lattice topology."""
    return request.param


@pytest.fixture
def small_extent() -> NetworkExtent:
    return NetworkExtent.box(8, 8)
