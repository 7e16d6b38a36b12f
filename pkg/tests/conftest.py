import numpy as np
import pytest

from ms_monotonicity.geometry import CrackTip, DiskProbe, Point2, catalog
from ms_monotonicity.quadrature import QuadratureSpec


@pytest.fixture
def models():
    return catalog()


@pytest.fixture
def crack_tip():
    return CrackTip(Point2(0.0, 0.0), 0.0)


@pytest.fixture
def unit_disk():
    return DiskProbe(Point2(0.0, 0.0), 1.0)


@pytest.fixture
def spec():
    return QuadratureSpec()


@pytest.fixture
def scan_spec():
    return QuadratureSpec.for_scans()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
