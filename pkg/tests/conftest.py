import pytest

from helpers import planted_structure


@pytest.fixture(scope="session")
def tiny_structure():
    """m=1, d=1 identity template; 7 absorbers, no leftover wiring."""
    return planted_structure(1, (0,), plant_leftover=False)


@pytest.fixture(scope="session")
def big_structure():
    """m=12, d=2 structure with planted leftover connectors and a closing
    edge, so absorb_leftover plus the closing edge is a Hamilton cycle."""
    return planted_structure(12, (0, 12), close_cycle=True)


@pytest.fixture(scope="session")
def big_structure_spare():
    """Like big_structure but with one spare vertex and colour for tests
    that need leftover sets the planted wiring cannot serve."""
    return planted_structure(12, (0, 12), spare_vertices=1, spare_colours=1)


@pytest.fixture(scope="session")
def bad_structure():
    """m=12, d=1 shift-by-one template: consuming aligned label windows
    breaks the perfect matching, so robust_match fails."""
    return planted_structure(12, (1,))
