"""Shared fixtures: period points and tolerances."""
import numpy as np
import pytest

from thetanorm.core.period import PeriodPoint
from thetanorm.core.tolerances import Tolerances

# Σ_n exp(-π n²), summed directly far beyond double precision
THETA3_AT_I = 1.086434811213308


@pytest.fixture
def tolerances() -> Tolerances:
    return Tolerances()


@pytest.fixture
def tau_i() -> PeriodPoint:
    """The elliptic period point Z = (i)."""
    return PeriodPoint(Z=np.array([[1j]]), label="tau-i")


@pytest.fixture(scope="session")
def paper_g3() -> PeriodPoint:
    return PeriodPoint.from_preset("paper-g3")


@pytest.fixture(scope="session")
def paper_g4() -> PeriodPoint:
    return PeriodPoint.from_preset("paper-g4")


@pytest.fixture
def random_point():
    """Factory for seeded random period points."""
    def make(g: int, seed: int = 11) -> PeriodPoint:
        return PeriodPoint.random(g, seed)
    return make
