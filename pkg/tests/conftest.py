import numpy as np
import pytest

from qfield import BeamGeometry


@pytest.fixture
def geom() -> BeamGeometry:
    """Reference geometry used by most tests: w0 = 1, k = 30 (z0 = 15)."""
    return BeamGeometry(w0=1.0, k=30.0)


@pytest.fixture
def geom_alt() -> BeamGeometry:
    """A second, non-unit geometry to catch accidental w0 = 1 assumptions."""
    return BeamGeometry(w0=0.8, k=12.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)
