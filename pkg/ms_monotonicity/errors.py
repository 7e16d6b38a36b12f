"""
Exceptions raised by the monotonicity toolkit
"""


class MonotonicityError(Exception):
    """Base class for every error raised by ms_monotonicity"""


# =========================
# Geometry
# =========================
class GeometryError(MonotonicityError):
    pass


class OnJumpSet(GeometryError):
    pass


class AtSingularPoint(GeometryError):
    pass


class TangentialContact(GeometryError):
    pass


class JumpOnCircle(GeometryError):
    pass


class JumpInsideArc(GeometryError):
    pass


class WrongCrossingCount(GeometryError):
    def __init__(self, expected, found):
        super().__init__(f"expected {expected} transversal crossing(s), found {found}")
        self.expected = expected
        self.found = found


class ArcTooLong(GeometryError):
    pass


# =========================
# Numerics
# =========================
class NoConvergence(MonotonicityError):
    def __init__(self, message, value=float("nan"), error_estimate=float("inf"), levels=0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.levels = levels


class CertificationInconclusive(MonotonicityError):
    def __init__(self, report):
        super().__init__(
            f"claim {report.claim_id}: certified bound {report.certified_lower_bound:.6f} "
            f"does not reach {report.claimed_constant:.6f} at n={report.grid_resolution}"
        )
        self.report = report


# =========================
# Configuration
# =========================
class ConfigError(MonotonicityError):
    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
