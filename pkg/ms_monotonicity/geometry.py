"""
Exact minimizers of the Mumford-Shah functional in the plane
and the geometry of their jump sets relative to probe disks.

Catalog:
- crack tip           u = sqrt(2/pi) rho^(1/2) cos(phi/2), jump set a half-line
- planar interface    piecewise constant across a line
- propeller           three constants separated by half-lines at 120 degrees
- smooth harmonic     u = sum rho^k (a_k cos k phi + b_k sin k phi), no jump set
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from .errors import AtSingularPoint, OnJumpSet
from .quadrature import NoConvergence, QuadratureSpec, integrate_interval

logger = logging.getLogger(__name__)


# =========================
# Tolerances
# =========================
UNIT_TOL = 1e-12
ON_JUMP_TOL = 1e-12
TANGENCY_TOL = 1e-9

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
TWO_PI = 2.0 * math.pi


# =========================
# Value objects
# =========================
@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point2 needs finite coordinates, got ({self.x}, {self.y})")

    @property
    def arr(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @classmethod
    def of(cls, xy) -> "Point2":
        return cls(float(xy[0]), float(xy[1]))

    def distance(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def shifted(self, dx: float, dy: float) -> "Point2":
        return Point2(self.x + dx, self.y + dy)


@dataclass(frozen=True)
class UnitVector:
    ux: float
    uy: float

    def __post_init__(self):
        if abs(self.ux * self.ux + self.uy * self.uy - 1.0) > UNIT_TOL:
            raise ValueError(f"UnitVector needs ux^2 + uy^2 = 1, got ({self.ux}, {self.uy})")

    @classmethod
    def from_angle(cls, theta: float) -> "UnitVector":
        return cls(math.cos(theta), math.sin(theta))

    @classmethod
    def normalized(cls, x: float, y: float) -> "UnitVector":
        n = math.hypot(x, y)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / n, y / n)

    @property
    def arr(self) -> np.ndarray:
        return np.array([self.ux, self.uy], dtype=float)

    @property
    def perp(self) -> "UnitVector":
        # e1^perp = e2
        return UnitVector(-self.uy, self.ux)

    @property
    def angle(self) -> float:
        return math.atan2(self.uy, self.ux)

    def dot(self, other) -> float:
        return self.ux * other.ux + self.uy * other.uy


@dataclass(frozen=True)
class DiskProbe:
    center: Point2
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"DiskProbe radius must be > 0, got {self.radius}")

    def with_radius(self, r: float) -> "DiskProbe":
        return DiskProbe(self.center, r)

    def angle_of(self, p: Point2) -> float:
        """Polar angle of p about the center, in [0, 2pi)"""
        return math.atan2(p.y - self.center.y, p.x - self.center.x) % TWO_PI

    def boundary_point(self, angle: float) -> Point2:
        return Point2(self.center.x + self.radius * math.cos(angle),
                      self.center.y + self.radius * math.sin(angle))


@dataclass(frozen=True)
class CircleCrossing:
    point: Point2
    tangent: UnitVector
    nu_dot_t: float
    transversal: bool
    angle: float = 0.0


# =========================
# Jump curves
# =========================
class JumpCurve(ABC):
    """Straight jump curve x(t) = base + t * direction, t in [t_min, t_max]"""

    @property
    @abstractmethod
    def base(self) -> np.ndarray: ...

    @property
    @abstractmethod
    def unit(self) -> UnitVector: ...

    @property
    @abstractmethod
    def t_range(self) -> Tuple[float, float]: ...

    def endpoints(self):
        lo, hi = self.t_range
        b, e = self.base, self.unit.arr
        return [Point2.of(b + t * e) for t in (lo, hi) if math.isfinite(t)]

    def distance_to(self, p: Point2) -> float:
        lo, hi = self.t_range
        w = p.arr - self.base
        t = min(max(float(w @ self.unit.arr), lo), hi)
        return float(np.hypot(*(w - t * self.unit.arr)))

    def circle_parameters(self, center: Point2, r: float):
        """Parameters t where |x(t) - center| = r, and the discriminant"""
        w = self.base - center.arr
        we = float(w @ self.unit.arr)
        disc = we * we - (float(w @ w) - r * r)
        if disc < 0.0:
            return (), disc
        s = math.sqrt(disc)
        return (-we - s, -we + s), disc

    def foot_distance(self, center: Point2) -> float:
        """Distance from center to the supporting line"""
        w = self.base - center.arr
        e = self.unit.arr
        return abs(float(w[0] * e[1] - w[1] * e[0]))

    @abstractmethod
    def rotated(self, theta: float, about: Point2) -> "JumpCurve": ...


def _rotate_point(p: Point2, theta: float, about: Point2) -> Point2:
    c, s = math.cos(theta), math.sin(theta)
    dx, dy = p.x - about.x, p.y - about.y
    return Point2(about.x + c * dx - s * dy, about.y + s * dx + c * dy)


def _rotate_unit(u: UnitVector, theta: float) -> UnitVector:
    return UnitVector.from_angle(u.angle + theta)


@dataclass(frozen=True)
class Segment(JumpCurve):
    p: Point2
    q: Point2

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("Segment needs p != q")

    @property
    def base(self):
        return self.p.arr

    @property
    def unit(self):
        return UnitVector.normalized(self.q.x - self.p.x, self.q.y - self.p.y)

    @property
    def t_range(self):
        return 0.0, self.p.distance(self.q)

    def rotated(self, theta, about):
        return Segment(_rotate_point(self.p, theta, about), _rotate_point(self.q, theta, about))


@dataclass(frozen=True)
class Ray(JumpCurve):
    origin: Point2
    direction: UnitVector

    @property
    def base(self):
        return self.origin.arr

    @property
    def unit(self):
        return self.direction

    @property
    def t_range(self):
        return 0.0, math.inf

    def rotated(self, theta, about):
        return Ray(_rotate_point(self.origin, theta, about), _rotate_unit(self.direction, theta))


@dataclass(frozen=True)
class Line(JumpCurve):
    point: Point2
    direction: UnitVector

    @property
    def base(self):
        return self.point.arr

    @property
    def unit(self):
        return self.direction

    @property
    def t_range(self):
        return -math.inf, math.inf

    def rotated(self, theta, about):
        return Line(_rotate_point(self.point, theta, about), _rotate_unit(self.direction, theta))


def _pair_intersection(a: JumpCurve, b: JumpCurve):
    """Intersection point of two curves (None if disjoint); raises on overlap"""
    ea, eb = a.unit.arr, b.unit.arr
    cross = ea[0] * eb[1] - ea[1] * eb[0]
    w = b.base - a.base
    if abs(cross) < 1e-14:
        if abs(w[0] * ea[1] - w[1] * ea[0]) > 1e-12:
            return None
        # collinear: overlapping parameter ranges would share a segment
        lo_a, hi_a = a.t_range
        tb = [float(w @ ea) + t * float(eb @ ea) for t in b.t_range]
        lo_b, hi_b = min(tb), max(tb)
        if min(hi_a, hi_b) - max(lo_a, lo_b) > 1e-12:
            raise ValueError("jump curves overlap along a segment")
        return None
    ta = (w[0] * eb[1] - w[1] * eb[0]) / cross
    tb = (w[0] * ea[1] - w[1] * ea[0]) / cross
    (la, ha), (lb, hb) = a.t_range, b.t_range
    if la - 1e-12 <= ta <= ha + 1e-12 and lb - 1e-12 <= tb <= hb + 1e-12:
        return Point2.of(a.base + ta * ea)
    return None


@dataclass(frozen=True)
class JumpSet:
    curves: Tuple[JumpCurve, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        junction = None
        for i, a in enumerate(self.curves):
            for b in self.curves[i + 1:]:
                x = _pair_intersection(a, b)
                if x is None:
                    continue
                if junction is None:
                    junction = x
                elif junction.distance(x) > 1e-9:
                    raise ValueError("jump curves may only meet at one common junction point")

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def distance_to(self, p: Point2) -> float:
        return min((c.distance_to(p) for c in self.curves), default=math.inf)

    def rotated(self, theta: float, about: Point2) -> "JumpSet":
        return JumpSet(tuple(c.rotated(theta, about) for c in self.curves))


# =========================
# Field models
# =========================
def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


class FieldModel(ABC):
    """An exact minimizer with evaluable value, gradient and jump set"""

    kind = "abstract"

    @abstractmethod
    def jump_set(self) -> JumpSet: ...

    def singular_points(self) -> Tuple[Point2, ...]:
        return ()

    def reference_point(self) -> Point2:
        """A point x0 at which the model is singular (or its expansion point)"""
        pts = self.singular_points()
        return pts[0] if pts else Point2(0.0, 0.0)

    def jump_directions_from(self, p: Point2) -> Tuple[float, ...]:
        """Angles of jump curves emanating from p (rays whose origin is p)"""
        out = []
        for c in self.jump_set():
            if isinstance(c, Ray) and c.origin.distance(p) < ON_JUMP_TOL:
                out.append(c.direction.angle % TWO_PI)
        return tuple(sorted(out))

    @abstractmethod
    def value_array(self, xy: np.ndarray, side: int = 1) -> np.ndarray: ...

    @abstractmethod
    def gradient_array(self, xy: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def dirichlet_energy(self, disk: DiskProbe) -> float:
        """Closed form of the Dirichlet energy over the disk (off the jump set)"""

    @abstractmethod
    def rotated(self, theta: float, about: Point2) -> "FieldModel": ...


@dataclass(frozen=True)
class CrackTip(FieldModel):
    """
    Crack-tip minimizer u = sqrt(2/pi) rho^(1/2) cos(phi/2)

    Parameters:
    -----------
    tip : Point2
        End point of the crack
    axis_angle : float
        Direction of the crack half-line, in radians
    """
    tip: Point2 = Point2(0.0, 0.0)
    axis_angle: float = 0.0

    kind = "crack_tip"

    def jump_set(self):
        return JumpSet((Ray(self.tip, UnitVector.from_angle(self.axis_angle)),))

    def singular_points(self):
        return (self.tip,)

    def _local_polar(self, xy):
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        d = xy - self.tip.arr
        c, s = math.cos(self.axis_angle), math.sin(self.axis_angle)
        X = c * d[:, 0] + s * d[:, 1]
        Y = -s * d[:, 0] + c * d[:, 1]
        return np.hypot(X, Y), np.mod(np.arctan2(Y, X), TWO_PI)

    def value_array(self, xy, side=1):
        rho, phi = self._local_polar(xy)
        # on the crack phi == 0: side -1 takes the limit phi -> 2pi
        if side < 0:
            phi = np.where(phi == 0.0, TWO_PI, phi)
        return SQRT_2_OVER_PI * np.sqrt(rho) * np.cos(phi / 2.0)

    def gradient_array(self, xy):
        rho, phi = self._local_polar(xy)
        amp = 0.5 * SQRT_2_OVER_PI / np.sqrt(rho)
        local = np.stack([amp * np.cos(phi / 2.0), amp * np.sin(phi / 2.0)], axis=-1)
        return local @ _rot(self.axis_angle).T

    def dirichlet_energy(self, disk):
        # (1/2pi) * integral of 1/|x - tip| over the disk
        r = disk.radius
        d = disk.center.distance(self.tip)
        if d <= r:
            return 2.0 / math.pi * r * float(special.ellipe((d / r) ** 2))
        m = (r / d) ** 2
        return 2.0 / math.pi * d * float(special.ellipe(m) - (1.0 - m) * special.ellipk(m))

    def circle_dirichlet(self, disk):
        """Closed form of the circle Dirichlet energy (diverges when the circle hits the tip)"""
        r = disk.radius
        d = disk.center.distance(self.tip)
        if abs(d - r) < ON_JUMP_TOL:
            return math.inf
        m = 4.0 * r * d / (r + d) ** 2
        return 2.0 * r * float(special.ellipk(m)) / (math.pi * (r + d))

    def rotated(self, theta, about):
        return CrackTip(_rotate_point(self.tip, theta, about), self.axis_angle + theta)


@dataclass(frozen=True)
class PlanarInterface(FieldModel):
    """
    Piecewise constant minimizer with a straight jump line

    Parameters:
    -----------
    point : Point2
        Any point on the interface
    normal : UnitVector
        Unit normal; u = alpha on the side it points to
    alpha, beta : float
        The two constant values, must differ
    """
    point: Point2 = Point2(0.0, 0.0)
    normal: UnitVector = UnitVector(0.0, 1.0)
    alpha: float = 1.0
    beta: float = 0.0

    kind = "planar_interface"

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("PlanarInterface needs alpha != beta")

    def jump_set(self):
        return JumpSet((Line(self.point, self.normal.perp),))

    def reference_point(self):
        return self.point

    def value_array(self, xy, side=1):
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        s = (xy - self.point.arr) @ self.normal.arr
        s = np.where(s == 0.0, float(side), s)
        return np.where(s > 0.0, self.alpha, self.beta)

    def gradient_array(self, xy):
        return np.zeros((np.atleast_2d(xy).shape[0], 2))

    def dirichlet_energy(self, disk):
        return 0.0

    def rotated(self, theta, about):
        return PlanarInterface(_rotate_point(self.point, theta, about),
                               _rotate_unit(self.normal, theta), self.alpha, self.beta)


@dataclass(frozen=True)
class Propeller(FieldModel):
    """
    Three half-lines at 120 degrees with a constant value in each sector

    Parameters:
    -----------
    center : Point2
        Common end point of the three half-lines
    axis_angle : float
        Direction of the first half-line
    values : tuple of float
        Pairwise distinct sector values, counterclockwise from the first half-line
    """
    center: Point2 = Point2(0.0, 0.0)
    axis_angle: float = 0.0
    values: Tuple[float, float, float] = (0.0, 1.0, 2.0)

    kind = "propeller"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != 3 or len(set(self.values)) != 3:
            raise ValueError("Propeller needs three pairwise-distinct values")

    def ray_angles(self):
        return tuple(self.axis_angle + k * TWO_PI / 3.0 for k in range(3))

    def jump_set(self):
        return JumpSet(tuple(Ray(self.center, UnitVector.from_angle(a)) for a in self.ray_angles()))

    def singular_points(self):
        return (self.center,)

    def value_array(self, xy, side=1):
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        d = xy - self.center.arr
        if np.any(np.hypot(d[:, 0], d[:, 1]) < ON_JUMP_TOL):
            raise AtSingularPoint("propeller value is undefined at its center")
        psi = np.mod(np.arctan2(d[:, 1], d[:, 0]) - self.axis_angle, TWO_PI)
        sector = np.floor(psi / (TWO_PI / 3.0)).astype(int) % 3
        on_ray = np.isclose(np.mod(psi, TWO_PI / 3.0), 0.0, atol=1e-15)
        if side < 0:
            sector = np.where(on_ray, (sector - 1) % 3, sector)
        return np.asarray(self.values)[sector]

    def gradient_array(self, xy):
        return np.zeros((np.atleast_2d(xy).shape[0], 2))

    def dirichlet_energy(self, disk):
        return 0.0

    def rotated(self, theta, about):
        return Propeller(_rotate_point(self.center, theta, about), self.axis_angle + theta, self.values)


@dataclass(frozen=True)
class SmoothHarmonic(FieldModel):
    """
    Harmonic polynomial sum_k rho^k (a_k cos k phi + b_k sin k phi)

    Parameters:
    -----------
    center : Point2
        Origin of the polar coordinates
    coefficients : tuple of (a_k, b_k)
        One pair per degree k, starting at k = 0
    """
    center: Point2 = Point2(0.0, 0.0)
    coefficients: Tuple[Tuple[float, float], ...] = ((0.0, 0.0), (1.0, 0.0))

    kind = "smooth_harmonic"

    def __post_init__(self):
        coeffs = tuple((float(a), float(b)) for a, b in self.coefficients)
        if not coeffs:
            raise ValueError("SmoothHarmonic needs at least one coefficient pair")
        object.__setattr__(self, "coefficients", coeffs)

    def jump_set(self):
        return JumpSet(())

    def reference_point(self):
        return self.center

    @property
    def complex_coefficients(self) -> np.ndarray:
        # u = Re sum c_k (z - p)^k with c_k = a_k - i b_k
        return np.array([a - 1j * b for a, b in self.coefficients])

    def _w(self, xy):
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        return (xy[:, 0] - self.center.x) + 1j * (xy[:, 1] - self.center.y)

    def value_array(self, xy, side=1):
        return np.real(Polynomial(self.complex_coefficients)(self._w(xy)))

    def derivative_polynomial(self) -> Polynomial:
        return Polynomial(self.complex_coefficients).deriv()

    def gradient_array(self, xy):
        # u_x - i u_y = f'(z)
        g = self.derivative_polynomial()(self._w(xy))
        return np.stack([np.real(g), -np.imag(g)], axis=-1)

    def dirichlet_energy(self, disk):
        shift = (disk.center.x - self.center.x) + 1j * (disk.center.y - self.center.y)
        g = self.derivative_polynomial()(Polynomial([shift, 1.0]))
        m = np.arange(len(g.coef))
        r = disk.radius
        return float(np.sum(math.pi * r ** (2 * m + 2) * np.abs(g.coef) ** 2 / (m + 1)))

    def rotated(self, theta, about):
        k = np.arange(len(self.coefficients))
        c = self.complex_coefficients * np.exp(-1j * k * theta)
        return SmoothHarmonic(_rotate_point(self.center, theta, about),
                              tuple((float(np.real(z)), float(-np.imag(z))) for z in c))


def catalog() -> dict:
    """The named catalog of exact minimizers"""
    return {
        "crack_tip": CrackTip(Point2(0.0, 0.0), 0.0),
        "planar_interface": PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 0.0),
        "propeller": Propeller(Point2(0.0, 0.0), 0.0, (0.0, 1.0, 2.0)),
        "smooth_linear": SmoothHarmonic(Point2(0.0, 0.0), ((0.0, 0.0), (1.0, 0.0))),
        "smooth_quadratic": SmoothHarmonic(Point2(0.0, 0.0), ((0.0, 0.0), (0.0, 0.0), (0.0, 1.0))),
    }


def rotated(model: FieldModel, theta: float, about: Optional[Point2] = None) -> FieldModel:
    return model.rotated(theta, about if about is not None else Point2(0.0, 0.0))


# =========================
# Point queries
# =========================
def _check_off_singular(model: FieldModel, p: Point2):
    for s in model.singular_points():
        if s.distance(p) < ON_JUMP_TOL:
            raise AtSingularPoint(f"{model.kind}: point ({p.x}, {p.y}) is a singular point")


def eval_gradient(model: FieldModel, p: Point2) -> Tuple[float, float]:
    _check_off_singular(model, p)
    if model.jump_set().distance_to(p) < ON_JUMP_TOL:
        raise OnJumpSet(f"{model.kind}: gradient is undefined on the jump set at ({p.x}, {p.y})")
    g = model.gradient_array(p.arr)[0]
    return float(g[0]), float(g[1])


def eval_value(model: FieldModel, p: Point2, side: int = 1) -> float:
    """Field value; on the jump set the side flag selects the one-sided limit"""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    return float(model.value_array(p.arr, side=side)[0])


# =========================
# Jump set vs. circles
# =========================
def circle_crossings(jumps: JumpSet, disk: DiskProbe):
    """Intersections of the jump set with the circle, sorted by polar angle"""
    r = disk.radius
    out = []
    for curve in jumps:
        lo, hi = curve.t_range
        ts, disc = curve.circle_parameters(disk.center, r)
        e = curve.unit
        # a double root is reported once
        if ts and disc <= (1e-15 * r) ** 2:
            ts = (0.5 * (ts[0] + ts[1]),)
        for t in ts:
            if not (lo - 1e-14 <= t <= hi + 1e-14):
                continue
            x = curve.base + t * e.arr
            nu = (x - disk.center.arr) / r
            ndt = float(nu @ e.arr)
            tangent = e if ndt >= 0.0 else UnitVector(-e.ux, -e.uy)
            ndt = min(abs(ndt), 1.0)
            point = Point2.of(x)
            out.append(CircleCrossing(point, tangent, ndt, ndt >= TANGENCY_TOL, disk.angle_of(point)))
    out.sort(key=lambda c: c.angle)
    return out


def jump_length_in_disk(jumps: JumpSet, disk: DiskProbe) -> float:
    total = 0.0
    for curve in jumps:
        ts, disc = curve.circle_parameters(disk.center, disk.radius)
        if not ts or disc <= 0.0:
            continue
        lo, hi = curve.t_range
        total += max(0.0, min(hi, ts[1]) - max(lo, ts[0]))
    return total


def _critical_radii(jumps: JumpSet, x0: Point2, R: float):
    radii = set()
    for curve in jumps:
        radii.add(curve.foot_distance(x0))
        for p in curve.endpoints():
            radii.add(p.distance(x0))
    return sorted(r for r in radii if 0.0 < r < R)


def crossing_weight(jumps: JumpSet, x0: Point2, r: np.ndarray) -> np.ndarray:
    """Sum over J cap dB_r(x0) of 1/|nu . t| for an array of radii"""
    r = np.asarray(r, dtype=float)
    total = np.zeros_like(r)
    for curve in jumps:
        w = curve.base - x0.arr
        we = float(w @ curve.unit.arr)
        h2 = float(w @ w) - we * we
        lo, hi = curve.t_range
        disc = r * r - h2
        ok = disc > 0.0
        s = np.sqrt(np.where(ok, disc, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(ok, r / s, 0.0)
        for sign in (-1.0, 1.0):
            t = -we + sign * s
            hit = ok & (t >= lo) & (t <= hi)
            # tangential radii are skipped
            hit &= np.where(ok, s / np.maximum(r, 1e-300), 0.0) >= TANGENCY_TOL
            total += np.where(hit, inv, 0.0)
    return total


def coarea_two_sides(jumps: JumpSet, x0: Point2, R: float, n_r: int = 16):
    """H^1(J cap B_R(x0)) and the radial integral of sum 1/|nu . t|"""
    if n_r < 16:
        raise ValueError("coarea_two_sides needs n_r >= 16")
    length = jump_length_in_disk(jumps, DiskProbe(x0, R))
    if len(jumps) == 0:
        return 0.0, 0.0
    spec = QuadratureSpec(nodes_per_panel=n_r, panels_per_arc=1, refinement_levels=6, rel_tolerance=1e-11)
    edges = [0.0] + _critical_radii(jumps, x0, R) + [R]
    integral = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # r = a + s^2 removes the inverse square root at a tangency radius
        def weight(s, a=a):
            return crossing_weight(jumps, x0, a + s * s) * 2.0 * s

        try:
            value, _ = integrate_interval(weight, 0.0, math.sqrt(b - a), spec)
        except NoConvergence as exc:
            logger.warning("coarea radial integral on [%g, %g] did not converge: %s", a, b, exc)
            value = exc.value
        integral += value
    return length, integral


def crack_tip_circle_dirichlet(model: CrackTip, disk: DiskProbe) -> float:
    return model.circle_dirichlet(disk)
