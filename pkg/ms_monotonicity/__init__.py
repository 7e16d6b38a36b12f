"""
Numerical checks of the monotonicity formula for 2D Mumford-Shah minimizers
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CertificationInconclusive,
    ConfigError,
    GeometryError,
    MonotonicityError,
    NoConvergence,
)
from .geometry import CrackTip, DiskProbe, PlanarInterface, Point2, Propeller, SmoothHarmonic, UnitVector, catalog  # noqa: E402
from .quadrature import QuadratureSpec  # noqa: E402

__all__ = [
    "__version__",
    "CertificationInconclusive",
    "ConfigError",
    "GeometryError",
    "MonotonicityError",
    "NoConvergence",
    "CrackTip",
    "DiskProbe",
    "PlanarInterface",
    "Point2",
    "Propeller",
    "SmoothHarmonic",
    "UnitVector",
    "catalog",
    "QuadratureSpec",
]
