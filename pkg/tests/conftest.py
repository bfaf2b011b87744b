import pytest
from hypothesis import HealthCheck, settings

from simplexpred.complex import ComplexSnapshot

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# Maximal simplices of the worked neighbourhood example at time t.
WORKED_EXAMPLE = [
    [6, 9, 10], [9, 10, 13], [5, 9], [8, 9], [10, 14], [10, 15], [10, 11], [10, 7],
    [1, 2, 5], [2, 8], [3, 4, 11], [4, 7], [12, 14], [12, 15],
]


@pytest.fixture
def worked():
    return ComplexSnapshot(WORKED_EXAMPLE)


@pytest.fixture
def worked_before():
    """The same graph one slice earlier, before edge [10, 7] arrived."""
    return ComplexSnapshot([m for m in WORKED_EXAMPLE if m != [10, 7]])
