import pytest

from conjugate_channels.numerics import SeededSampler


@pytest.fixture
def rng():
    return SeededSampler(20240607).generator()

