import pytest

from cusp_collision.geometry import CuspRegion, SolidProfile


@pytest.fixture
def profile():
    return SolidProfile(alpha=1.0, h=0.1, r0=0.5, d0=0.25)


@pytest.fixture
def region(profile):
    return CuspRegion(profile)
