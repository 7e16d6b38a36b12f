"""
Entropy, energy density and the dissipation functional on probe disks

For a field model u and a disk B_r(x0):

    F(r, x0) = (1/r) [ int_{B_r} |grad u|^2 + 1/2 H^1(J cap B_r) ]
    E(r, x0) = (1/r) [ int_{B_r} |grad u|^2 +     H^1(J cap B_r) ]

Both representations of the dissipation D, the boundary relation between
tangential/normal energies and crossing angles, the crossing bound for
any direction q and the radial-slice bound are evaluated from the circle
energies on dB_r and the crossings of J with dB_r.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import AtSingularPoint, MonotonicityError, NoConvergence, TangentialContact
from .geometry import (
    ON_JUMP_TOL,
    CrackTip,
    DiskProbe,
    FieldModel,
    Point2,
    UnitVector,
    circle_crossings,
    jump_length_in_disk,
)
from .quadrature import ArcPartition, QuadratureSpec, integrate_circle, integrate_disk, integrate_interval

logger = logging.getLogger(__name__)


# =========================
# Thresholds
# =========================
F_CAP = 1.5
F_TIE_TOL = 1e-12
MONOTONE_TOL = 1e-8
DIFFERENTIAL_TOL = 1e-3
PROP31_DIRECTIONS = 720
MIN_SCAN_POINTS = 32
MAX_SHARPNESS_DELTA = 0.2


# =========================
# Volume terms
# =========================
def _singular_point(model: FieldModel, near: Point2) -> Optional[Point2]:
    pts = model.singular_points()
    if not pts:
        return None
    return min(pts, key=lambda p: p.distance(near))


def _dirichlet_density(model: FieldModel):
    def f(xy):
        g = model.gradient_array(xy)
        return np.einsum("ij,ij->i", g, g)
    return f


def dirichlet_energy(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None,
                     method: str = "auto") -> float:
    """int_{B_r \\ J} |grad u|^2; "auto" prefers the closed form"""
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "closed"):
        try:
            return model.dirichlet_energy(disk)
        except NotImplementedError:
            if method == "closed":
                raise
    s = _singular_point(model, disk.center)
    jump_angles = model.jump_directions_from(s) if s is not None else ()
    value, err = integrate_disk(_dirichlet_density(model), disk, s, spec, jump_angles)
    logger.debug("dirichlet %s r=%g: %.16g (err %.2g)", model.kind, disk.radius, value, err)
    return value


def entropy(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None,
            method: str = "auto") -> float:
    e_dir = dirichlet_energy(model, disk, spec, method)
    return (e_dir + 0.5 * jump_length_in_disk(model.jump_set(), disk)) / disk.radius


def energy_density(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None,
                   method: str = "auto") -> float:
    e_dir = dirichlet_energy(model, disk, spec, method)
    return (e_dir + jump_length_in_disk(model.jump_set(), disk)) / disk.radius


# =========================
# Circle terms
# =========================
@dataclass(frozen=True)
class CircleTerms:
    tau: float
    nu: float
    crossings: tuple

    @property
    def dirichlet(self) -> float:
        return self.tau + self.nu

    @property
    def inv_sum(self) -> float:
        return sum(1.0 / c.nu_dot_t for c in self.crossings)

    @property
    def dot_sum(self) -> float:
        return sum(c.nu_dot_t for c in self.crossings)

    @property
    def tangent_sum(self) -> np.ndarray:
        return sum((c.tangent.arr for c in self.crossings), np.zeros(2))


def circle_partition(model: FieldModel, disk: DiskProbe, crossings=None) -> ArcPartition:
    """Arcs split at the crossings and at the directions of the model's singular points"""
    if crossings is None:
        crossings = circle_crossings(model.jump_set(), disk)
    angles = [c.angle for c in crossings]
    for s in model.singular_points():
        if s.distance(disk.center) > ON_JUMP_TOL:
            angles.append(disk.angle_of(s))
    return ArcPartition.from_angles(disk, angles)


def circle_terms(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> CircleTerms:
    crossings = circle_crossings(model.jump_set(), disk)
    bad = [c for c in crossings if not c.transversal]
    if bad:
        raise TangentialContact(
            f"{model.kind}: circle r={disk.radius:.6g} touches the jump set tangentially at "
            f"({bad[0].point.x:.6g}, {bad[0].point.y:.6g})"
        )
    for s in model.singular_points():
        if abs(s.distance(disk.center) - disk.radius) <= ON_JUMP_TOL * max(1.0, disk.radius):
            raise AtSingularPoint(f"{model.kind}: circle r={disk.radius:.6g} passes through a singular point")

    partition = circle_partition(model, disk, crossings)
    cx, cy, r = disk.center.x, disk.center.y, disk.radius

    def components(phi):
        c, s = np.cos(phi), np.sin(phi)
        g = model.gradient_array(np.stack([cx + r * c, cy + r * s], axis=-1))
        return g[:, 0] * c + g[:, 1] * s, -g[:, 0] * s + g[:, 1] * c

    nu, _ = integrate_circle(lambda phi: components(phi)[0] ** 2, partition, spec)
    tau, _ = integrate_circle(lambda phi: components(phi)[1] ** 2, partition, spec)
    return CircleTerms(tau=tau, nu=nu, crossings=tuple(crossings))


def circle_energies(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None):
    """(tau, nu, crossings): tangential and normal energies on dB_r minus J"""
    terms = circle_terms(model, disk, spec)
    return terms.tau, terms.nu, list(terms.crossings)


def _indicator(F: float) -> float:
    return 1.0 if F < F_CAP - F_TIE_TOL else 0.0


def _d1(terms: CircleTerms, F: float) -> float:
    return _indicator(F) * (terms.dirichlet + 0.5 * terms.inv_sum - F)


def _d2(terms: CircleTerms, F: float, E: float) -> float:
    return _indicator(F) * (1.5 * terms.tau + 0.5 * terms.nu + 0.5 * (terms.inv_sum + terms.dot_sum) - E)


def _dlms(terms: CircleTerms, jump_length: float, r: float) -> float:
    return (terms.tau + terms.dot_sum) - (terms.nu + jump_length / r)


def d_rep1(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> float:
    terms = circle_terms(model, disk, spec)
    return _d1(terms, entropy(model, disk, spec))


def d_rep2(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> float:
    terms = circle_terms(model, disk, spec)
    return _d2(terms, entropy(model, disk, spec), energy_density(model, disk, spec))


def dlms_residual(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> float:
    terms = circle_terms(model, disk, spec)
    return _dlms(terms, jump_length_in_disk(model.jump_set(), disk), disk.radius)


def prop31_gap(model: FieldModel, disk: DiskProbe, q: UnitVector, spec: Optional[QuadratureSpec] = None) -> float:
    """circle Dirichlet energy minus sum of q . t over the crossings"""
    terms = circle_terms(model, disk, spec)
    return terms.dirichlet - float(q.arr @ terms.tangent_sum)


def prop31_best_direction(crossings) -> Tuple[UnitVector, float]:
    """Direction q maximizing sum q . t, and the maximum |sum t|"""
    total = sum((c.tangent.arr for c in crossings), np.zeros(2))
    norm = float(np.hypot(*total))
    if norm < 1e-15:
        return UnitVector(1.0, 0.0), 0.0
    return UnitVector.normalized(*total), norm


def prop31_grid_gap(model: FieldModel, disk: DiskProbe, n_directions: int = PROP31_DIRECTIONS,
                    spec: Optional[QuadratureSpec] = None):
    """(min gap over the direction grid, exact minimal gap, q attaining the grid minimum)"""
    terms = circle_terms(model, disk, spec)
    theta = 2.0 * np.pi * np.arange(n_directions) / n_directions
    q = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    gaps = terms.dirichlet - q @ terms.tangent_sum
    k = int(np.argmin(gaps))
    _, best = prop31_best_direction(terms.crossings)
    return float(gaps[k]), terms.dirichlet - best, UnitVector.from_angle(float(theta[k]))


def radial_slice_bound(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> float:
    terms = circle_terms(model, disk, spec)
    return terms.dirichlet + len(terms.crossings) - 2.0


# =========================
# Rows and scans
# =========================
@dataclass
class ScanRow:
    r: float
    F: float
    E: float
    E_dir: float
    jump_count: int
    D1: float
    D2: float
    dlms_residual: float
    circle_dirichlet: float
    circle_tau: float
    circle_nu: float
    skipped_tangential: bool = False
    jump_length: float = 0.0
    inv_sum: float = 0.0
    note: str = ""

    def to_dict(self):
        return asdict(self)


def probe(model: FieldModel, disk: DiskProbe, spec: Optional[QuadratureSpec] = None) -> ScanRow:
    """Every row diagnostic at one radius; unevaluable circles give a skipped row"""
    r = disk.radius
    e_dir = dirichlet_energy(model, disk, spec)
    length = jump_length_in_disk(model.jump_set(), disk)
    F = (e_dir + 0.5 * length) / r
    E = (e_dir + length) / r
    nan = float("nan")
    try:
        terms = circle_terms(model, disk, spec)
    except (TangentialContact, AtSingularPoint, NoConvergence) as exc:
        logger.warning("skipping r=%.6g: %s", r, exc)
        crossings = circle_crossings(model.jump_set(), disk)
        return ScanRow(r, F, E, e_dir / r, len(crossings), nan, nan, nan, nan, nan, nan,
                       skipped_tangential=True, jump_length=length, inv_sum=nan, note=str(exc))
    return ScanRow(
        r=r, F=F, E=E, E_dir=e_dir / r, jump_count=len(terms.crossings),
        D1=_d1(terms, F), D2=_d2(terms, F, E), dlms_residual=_dlms(terms, length, r),
        circle_dirichlet=terms.dirichlet, circle_tau=terms.tau, circle_nu=terms.nu,
        jump_length=length, inv_sum=terms.inv_sum,
    )


def radius_grid(r_min: float, r_max: float, steps: int, kind: str = "geometric") -> np.ndarray:
    if not 0.0 < r_min < r_max:
        raise ValueError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if steps < 2:
        raise ValueError("need at least two radii")
    if kind == "geometric":
        return np.geomspace(r_min, r_max, steps)
    if kind == "linear":
        return np.linspace(r_min, r_max, steps)
    raise ValueError(f"unknown grid kind {kind!r}")


def singular_radii(model: FieldModel, x0: Point2) -> List[float]:
    """Radii at which dB_r(x0) passes through a point singularity of the model"""
    return sorted(s.distance(x0) for s in model.singular_points() if s.distance(x0) > 0.0)


@dataclass
class MonotonicityReport:
    rows: List[ScanRow]
    min_forward_difference: float
    verdict: bool
    worst_radius: float
    differential_verdict: bool = True
    worst_differential_margin: float = math.inf
    worst_differential_radius: float = float("nan")
    excluded_intervals: List[Tuple[float, float]] = field(default_factory=list)
    tolerance: float = MONOTONE_TOL
    differential_tolerance: float = DIFFERENTIAL_TOL

    @property
    def passed(self) -> bool:
        return self.verdict and self.differential_verdict

    def summary(self) -> dict:
        return {
            "rows": len(self.rows),
            "skipped": sum(r.skipped_tangential for r in self.rows),
            "min_forward_difference": self.min_forward_difference,
            "worst_radius": self.worst_radius,
            "monotone": self.verdict,
            "differential": self.differential_verdict,
            "worst_differential_margin": self.worst_differential_margin,
            "worst_differential_radius": self.worst_differential_radius,
            "excluded_intervals": len(self.excluded_intervals),
        }


def scan(model: FieldModel, x0: Point2, r_grid: Sequence[float], spec: Optional[QuadratureSpec] = None,
         tol_fd: float = DIFFERENTIAL_TOL, workers: int = 1) -> MonotonicityReport:
    """
    Entropy, energy density and both dissipation forms on a grid of radii

    Parameters:
    -----------
    model : FieldModel
        Exact minimizer to evaluate
    x0 : Point2
        Center of the concentric disks
    r_grid : sequence of float
        Positive, strictly increasing radii, at least MIN_SCAN_POINTS of them
    spec : QuadratureSpec, optional
        Defaults to QuadratureSpec.for_scans()
    tol_fd : float
        Tolerance for comparing finite differences of F with the dissipation
    workers : int
        Threads used to evaluate radii
    """
    radii = np.asarray(r_grid, dtype=float)
    if len(radii) < MIN_SCAN_POINTS:
        raise ValueError(f"scan needs at least {MIN_SCAN_POINTS} radii, got {len(radii)}")
    if np.any(np.diff(radii) <= 0.0) or radii[0] <= 0.0:
        raise ValueError("scan radii must be positive and strictly increasing")
    spec = spec or QuadratureSpec.for_scans()

    def row_at(r):
        try:
            return probe(model, DiskProbe(x0, float(r)), spec)
        except MonotonicityError as exc:
            logger.warning("row r=%.6g failed: %s", r, exc)
            nan = float("nan")
            return ScanRow(float(r), nan, nan, nan, 0, nan, nan, nan, nan, nan, nan,
                           skipped_tangential=True, note=str(exc))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row_at, radii))
    else:
        rows = [row_at(r) for r in radii]

    # monotonicity of min{F, 3/2}
    live = [row for row in rows if math.isfinite(row.F)]
    capped = np.array([min(row.F, F_CAP) for row in live])
    diffs = np.diff(capped)
    if len(diffs):
        k = int(np.argmin(diffs))
        min_diff, worst_r = float(diffs[k]), live[k].r
    else:
        min_diff, worst_r = 0.0, float("nan")
    verdict = min_diff >= -MONOTONE_TOL

    # r F' = D1 where F < 3/2
    singular = singular_radii(model, x0)
    excluded = []
    worst_margin, worst_margin_r = math.inf, float("nan")
    for a, b in zip(rows[:-1], rows[1:]):
        if not (a.F < F_CAP - F_TIE_TOL):
            continue
        if a.skipped_tangential or b.skipped_tangential or any(a.r <= s <= b.r for s in singular):
            excluded.append((a.r, b.r))
            continue
        slope = (b.F - a.F) / (b.r - a.r)
        margin = slope - min(a.D1 / a.r, b.D1 / b.r)
        if margin < worst_margin:
            worst_margin, worst_margin_r = margin, a.r
    differential = worst_margin >= -tol_fd

    logger.info("scan %s at (%g, %g): %d rows, min difference %.3g, differential margin %.3g",
                model.kind, x0.x, x0.y, len(rows), min_diff, worst_margin)
    return MonotonicityReport(rows, min_diff, verdict, worst_r, differential, worst_margin,
                              worst_margin_r, excluded, MONOTONE_TOL, tol_fd)


# =========================
# Dissipation case estimates
# =========================
@dataclass(frozen=True)
class CaseCheck:
    case: str
    lhs: float
    rhs: float
    passed: bool


def crossing_case(row: ScanRow) -> str:
    """Which lower bound for D applies at this row"""
    n = row.jump_count
    if n == 0:
        return "no_crossing"
    if n == 1:
        return "one_crossing"
    if n == 2:
        return "two_crossings"
    return "three_or_more"


def case_estimates(row: ScanRow, tol: float = 1e-6) -> CaseCheck:
    """The case estimate for the dissipation lower bound at a transversal row"""
    case = crossing_case(row)
    D = row.D1
    if case == "no_crossing":
        rhs = _indicator(row.F) * 0.5 * row.circle_dirichlet
        return CaseCheck(case, D, rhs, D >= rhs - tol * max(1.0, abs(rhs)))
    if case == "two_crossings":
        return CaseCheck(case, D, 0.0, D >= -1e-8)
    rhs = max(F_CAP - row.F, 0.0)
    return CaseCheck(case, D, rhs, D >= rhs - tol)


# =========================
# Point classification and scale covariance
# =========================
CLASSIFY_RADII = (1e-6, 1e-5, 1e-4)


@dataclass(frozen=True)
class PointClass:
    label: str
    small_radius_entropy: Tuple[float, ...]


def classify_point(model: FieldModel, x0: Point2, radii: Sequence[float] = CLASSIFY_RADII) -> PointClass:
    """regular (F -> 0), interface (F -> 1) or singular (F >= 3/2) from F at small radii"""
    values = tuple(entropy(model, DiskProbe(x0, r)) for r in radii)
    limit = values[0]
    if limit < 0.5:
        label = "regular"
    elif limit >= F_CAP - 1e-6:
        label = "singular"
    elif abs(limit - 1.0) < 0.25:
        label = "interface"
    else:
        label = "undetermined"
    return PointClass(label, values)


def scale_check(model: CrackTip, x0: Point2, r: float, lambdas: Sequence[float] = (0.5, 2.0, 10.0),
                spec: Optional[QuadratureSpec] = None, method: str = "auto") -> float:
    """Largest |F(lambda r, tip + lambda v) - F(r, tip + v)| with v = x0 - tip"""
    tip = model.tip
    base = entropy(model, DiskProbe(x0, r), spec, method)
    worst = 0.0
    for lam in lambdas:
        y = Point2(tip.x + lam * (x0.x - tip.x), tip.y + lam * (x0.y - tip.y))
        worst = max(worst, abs(entropy(model, DiskProbe(y, lam * r), spec, method) - base))
    return worst


# =========================
# Sharpness of the cap 3/2
# =========================
@dataclass(frozen=True)
class SharpnessRow:
    delta: float
    F: float
    F_closed: float
    slope: float


def sharpness_scan(delta_grid: Sequence[float], model: Optional[CrackTip] = None,
                   spec: Optional[QuadratureSpec] = None) -> List[SharpnessRow]:
    """F(1, delta e) along the crack axis, by singular quadrature and by closed form"""
    model = model or CrackTip()
    axis = UnitVector.from_angle(model.axis_angle)
    rows = []
    for delta in delta_grid:
        if not 0.0 <= delta <= MAX_SHARPNESS_DELTA:
            raise ValueError(f"sharpness offsets must lie in [0, {MAX_SHARPNESS_DELTA}], got {delta}")
        disk = DiskProbe(model.tip.shifted(delta * axis.ux, delta * axis.uy), 1.0)
        F = entropy(model, disk, spec, method="quadrature")
        F_closed = entropy(model, disk, method="closed")
        slope = (F - F_CAP) / delta if delta > 0.0 else float("nan")
        rows.append(SharpnessRow(float(delta), F, F_closed, slope))
    return rows


# =========================
# Equilibrium equation
# =========================
@dataclass(frozen=True)
class BumpField:
    """eta(x) = amplitude * psi(|x - center| / radius) * direction, psi(s) = (1 - s^2)^2"""

    center: Point2
    radius: float
    direction: UnitVector
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"bump radius must be > 0, got {self.radius}")

    @property
    def support(self) -> DiskProbe:
        return DiskProbe(self.center, self.radius)

    def profile(self, xy: np.ndarray) -> np.ndarray:
        d = np.atleast_2d(xy) - self.center.arr
        s2 = np.einsum("ij,ij->i", d, d) / self.radius ** 2
        return self.amplitude * np.where(s2 < 1.0, (1.0 - s2) ** 2, 0.0)

    def profile_gradient(self, xy: np.ndarray) -> np.ndarray:
        d = np.atleast_2d(xy) - self.center.arr
        s2 = np.einsum("ij,ij->i", d, d) / self.radius ** 2
        k = np.where(s2 < 1.0, -4.0 * (1.0 - s2) / self.radius ** 2, 0.0)
        return self.amplitude * k[:, None] * d


def equilibrium_terms(model: FieldModel, test: BumpField, spec: Optional[QuadratureSpec] = None):
    """(bulk, jump): int T : grad eta over the support and int_J t(x)t : grad eta"""
    spec = spec or QuadratureSpec()
    # bulk and jump terms may both vanish
    spec = replace(spec, abs_tolerance=max(spec.abs_tolerance, 1e-12))
    d = test.direction.arr
    if test.amplitude == 0.0:
        return 0.0, 0.0

    def stress(xy):
        g = model.gradient_array(xy)
        gp = test.profile_gradient(xy)
        # d . T grad psi, T = 2 grad u (x) grad u - |grad u|^2 I
        return 2.0 * (g @ d) * np.einsum("ij,ij->i", g, gp) - np.einsum("ij,ij->i", g, g) * (gp @ d)

    s = _singular_point(model, test.center)
    jump_angles = model.jump_directions_from(s) if s is not None else ()
    bulk, _ = integrate_disk(stress, test.support, s, spec, jump_angles)

    jump = 0.0
    for curve in model.jump_set():
        ts, disc = curve.circle_parameters(test.center, test.radius)
        if not ts or disc <= 0.0:
            continue
        lo, hi = curve.t_range
        a, b = max(lo, ts[0]), min(hi, ts[1])
        if b <= a:
            continue
        e = curve.unit.arr
        base = curve.base

        def along(t, base=base, e=e):
            xy = base[None, :] + t[:, None] * e[None, :]
            return (e @ d) * (test.profile_gradient(xy) @ e)

        value, _ = integrate_interval(along, a, b, spec)
        jump += value
    return bulk, jump


def equilibrium_residual(model: FieldModel, test: BumpField, spec: Optional[QuadratureSpec] = None) -> float:
    bulk, jump = equilibrium_terms(model, test, spec)
    return bulk - jump


def random_bumps(model: FieldModel, n: int, rng: np.random.Generator, window: float = 2.0) -> List[BumpField]:
    """Bumps with centers near the model's reference point, radii in [0.2, 1.5]"""
    ref = model.reference_point()
    out = []
    for _ in range(n):
        c = ref.shifted(*rng.uniform(-window, window, 2))
        out.append(BumpField(c, float(rng.uniform(0.2, 1.5)), UnitVector.from_angle(float(rng.uniform(0, 2 * np.pi))),
                             float(rng.uniform(0.5, 2.0))))
    return out
