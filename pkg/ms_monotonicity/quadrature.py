"""
Composite Gauss-Legendre quadrature on circles cut by jump crossings
and on disks containing an integrable point singularity.

All rules are tensor products of 1D composite rules whose panels are
geometrically graded toward breakpoints. The error estimate of every
routine is the difference between one rule and its panel-doubled
refinement; refinement continues until the two agree to rel_tolerance.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_legendre

from .errors import NoConvergence

if TYPE_CHECKING:
    from .geometry import DiskProbe, Point2

logger = logging.getLogger(__name__)


# =========================
# Defaults
# =========================
DEFAULT_NODES_PER_PANEL = 16
DEFAULT_PANELS_PER_ARC = 2
DEFAULT_REFINEMENT_LEVELS = 4
DEFAULT_REL_TOLERANCE = 1e-9
SCAN_REL_TOLERANCE = 1e-7
DEFAULT_ABS_TOLERANCE = 1e-14
DEFAULT_GRADING_RATIO = 0.15
DEFAULT_GRADING_LAYERS = 12

TWO_PI = 2.0 * math.pi

# points evaluated per integrand call in 2D rules
CHUNK_POINTS = 1 << 18


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_panel: int = DEFAULT_NODES_PER_PANEL
    panels_per_arc: int = DEFAULT_PANELS_PER_ARC
    refinement_levels: int = DEFAULT_REFINEMENT_LEVELS
    rel_tolerance: float = DEFAULT_REL_TOLERANCE
    abs_tolerance: float = DEFAULT_ABS_TOLERANCE
    grading_ratio: float = DEFAULT_GRADING_RATIO
    grading_layers: int = DEFAULT_GRADING_LAYERS

    def __post_init__(self):
        if self.nodes_per_panel < 4:
            raise ValueError(f"nodes_per_panel must be >= 4, got {self.nodes_per_panel}")
        if self.panels_per_arc < 1:
            raise ValueError(f"panels_per_arc must be >= 1, got {self.panels_per_arc}")
        if self.refinement_levels < 1:
            raise ValueError(f"refinement_levels must be >= 1, got {self.refinement_levels}")
        if not self.rel_tolerance > 0.0:
            raise ValueError(f"rel_tolerance must be > 0, got {self.rel_tolerance}")
        if not 0.0 < self.grading_ratio < 1.0:
            raise ValueError(f"grading_ratio must lie in (0, 1), got {self.grading_ratio}")
        if self.grading_layers < 0:
            raise ValueError(f"grading_layers must be >= 0, got {self.grading_layers}")

    @classmethod
    def for_scans(cls, **overrides) -> "QuadratureSpec":
        """Looser tolerance used for every row of a radius scan"""
        return cls(rel_tolerance=SCAN_REL_TOLERANCE, **overrides)

    def doubled(self) -> "QuadratureSpec":
        return replace(self, panels_per_arc=2 * self.panels_per_arc)


@dataclass(frozen=True)
class ArcPartition:
    disk: "DiskProbe"
    breakpoints: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        if any(not 0.0 <= b < TWO_PI for b in bp):
            raise ValueError("ArcPartition breakpoints must lie in [0, 2pi)")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("ArcPartition breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def from_angles(cls, disk: "DiskProbe", angles: Sequence[float], merge_tol: float = 1e-13) -> "ArcPartition":
        """Sorted, de-duplicated partition from arbitrary angles"""
        out = []
        for a in sorted(float(a) % TWO_PI for a in angles):
            if not out or a - out[-1] > merge_tol:
                out.append(a)
        if len(out) > 1 and out[0] + TWO_PI - out[-1] <= merge_tol:
            out.pop()
        return cls(disk, tuple(out))

    def arcs(self):
        """(start, end) angle pairs covering the circle, end > start"""
        bp = self.breakpoints
        if not bp:
            return [(0.0, TWO_PI)]
        ends = list(bp[1:]) + [bp[0] + TWO_PI]
        return list(zip(bp, ends))


# =========================
# 1D composite rules
# =========================
@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def graded_breaks(a: float, b: float, spec: QuadratureSpec, graded_ends=(False, False), level: int = 0) -> np.ndarray:
    """Panel boundaries on [a, b], graded toward the flagged ends, each panel split 2**level times"""
    n = spec.panels_per_arc
    if graded_ends[0] and graded_ends[1]:
        n = max(n, 2)
    edges = np.linspace(a, b, n + 1)
    h = (b - a) / n
    k = np.arange(1, spec.grading_layers + 1)
    parts = [edges]
    if graded_ends[0]:
        parts.append(a + h * spec.grading_ratio ** k)
    if graded_ends[1]:
        parts.append(b - h * spec.grading_ratio ** k)
    breaks = np.unique(np.concatenate(parts))
    if level > 0:
        t = np.linspace(0.0, 1.0, 2 ** level + 1)[:-1]
        fine = breaks[:-1, None] + np.diff(breaks)[:, None] * t[None, :]
        breaks = np.append(fine.ravel(), b)
    return breaks


def composite_rule(breaks: np.ndarray, nodes_per_panel: int):
    """Nodes and weights of the composite Gauss-Legendre rule on the given panels"""
    x, w = gauss_legendre(nodes_per_panel)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * np.diff(breaks)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _converged(prev: float, cur: float, spec: QuadratureSpec) -> bool:
    return abs(cur - prev) <= max(spec.rel_tolerance * abs(cur), spec.abs_tolerance)


def _refine(evaluate: Callable[[int], float], spec: QuadratureSpec, what: str):
    prev = evaluate(0)
    cur, err = prev, math.inf
    for level in range(1, spec.refinement_levels + 1):
        cur = evaluate(level)
        err = abs(cur - prev)
        logger.debug("%s: level %d value %.16g error %.3g", what, level, cur, err)
        if _converged(prev, cur, spec):
            return cur, err
        prev = cur
    raise NoConvergence(
        f"{what}: refinements disagree by {err:.3g} after {spec.refinement_levels} levels",
        value=cur, error_estimate=err, levels=spec.refinement_levels,
    )


def integrate_interval(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       spec: Optional[QuadratureSpec] = None, graded_ends=(False, False)):
    """Integral of a vectorized f over [a, b] and its doubling error estimate"""
    spec = spec or QuadratureSpec()
    if b < a:
        raise ValueError(f"integrate_interval needs a <= b, got [{a}, {b}]")
    if b == a:
        return 0.0, 0.0

    def evaluate(level):
        x, w = composite_rule(graded_breaks(a, b, spec, graded_ends, level), spec.nodes_per_panel)
        return float(np.dot(np.asarray(f(x), dtype=float), w))

    return _refine(evaluate, spec, f"interval [{a:.6g}, {b:.6g}]")


def integrate_circle(f: Callable[[np.ndarray], np.ndarray], partition: ArcPartition,
                     spec: Optional[QuadratureSpec] = None):
    """Integral over the circle of f(angle) with line element r dphi, arcs split at the breakpoints"""
    spec = spec or QuadratureSpec()
    r = partition.disk.radius
    arcs = partition.arcs()
    graded = (True, True) if partition.breakpoints else (False, False)

    def evaluate(level):
        total = 0.0
        for a, b in arcs:
            x, w = composite_rule(graded_breaks(a, b, spec, graded, level), spec.nodes_per_panel)
            total += float(np.dot(np.asarray(f(np.mod(x, TWO_PI)), dtype=float), w))
        return r * total

    return _refine(evaluate, spec, f"circle r={r:.6g}")


# =========================
# 2D rules
# =========================
def _tensor_sum(f, mapping, theta_nodes, theta_weights, t_nodes, t_weights) -> float:
    """Sum of f(x) * jacobian over the tensor grid, evaluated in row chunks"""
    rows = max(1, CHUNK_POINTS // len(t_nodes))
    total = 0.0
    for i in range(0, len(theta_nodes), rows):
        th = theta_nodes[i:i + rows]
        TH, T = np.meshgrid(th, t_nodes, indexing="ij")
        xy, jac = mapping(TH.ravel(), T.ravel())
        vals = np.asarray(f(xy), dtype=float) * jac
        total += float(np.einsum("ij,i,j->", vals.reshape(TH.shape), theta_weights[i:i + rows], t_weights))
    return total


def _angular_rule(arcs, spec, level, graded=True):
    nodes, weights = [], []
    for a, b in arcs:
        x, w = composite_rule(graded_breaks(a, b, spec, (graded, graded), level), spec.nodes_per_panel)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def _arcs_from(start: float, angles: Sequence[float]):
    """Arcs of [start, start + 2pi) split at the given angles"""
    rel = sorted({(a - start) % TWO_PI for a in angles} | {0.0})
    rel = [x for i, x in enumerate(rel) if i == 0 or x - rel[i - 1] > 1e-13]
    if TWO_PI - rel[-1] <= 1e-13:
        rel.pop()
    ends = rel[1:] + [TWO_PI]
    return [(start + a, start + b) for a, b in zip(rel, ends)]


def integrate_disk(f: Callable[[np.ndarray], np.ndarray], disk: "DiskProbe",
                   singular_point: Optional["Point2"] = None, spec: Optional[QuadratureSpec] = None,
                   jump_angles: Sequence[float] = ()):
    """
    Integral of f over the open disk; f maps an (n, 2) array of points to values.

    Without a singular point the rule is polar about the disk center. With one,
    the rule is polar about the singular point so that a 1/distance singularity
    is cancelled by the area element. jump_angles are directions (about the
    singular point) of jump curves emanating from it; the angular range is split
    there.
    """
    spec = spec or QuadratureSpec()
    cx, cy, r = disk.center.x, disk.center.y, disk.radius

    if singular_point is None:
        arcs = _arcs_from(0.0, jump_angles)

        def mapping(th, t):
            rho = r * t
            xy = np.stack([cx + rho * np.cos(th), cy + rho * np.sin(th)], axis=-1)
            return xy, r * rho

        return _integrate_tensor(f, mapping, arcs, (0.0, 1.0), spec, False, f"disk r={r:.6g}")

    sx, sy = singular_point.x, singular_point.y
    vx, vy = cx - sx, cy - sy
    d = math.hypot(vx, vy)
    phi_c = math.atan2(vy, vx)

    if d <= r:
        # x = s + t (b(theta) - s), b(theta) on the circle
        cuts = [phi_c + math.pi]
        for psi in jump_angles:
            ux, uy = math.cos(psi), math.sin(psi)
            wu = -(vx * ux + vy * uy)
            lam = -wu + math.sqrt(max(wu * wu - d * d + r * r, 0.0))
            cuts.append(math.atan2(sy + lam * uy - cy, sx + lam * ux - cx))
        arcs = _arcs_from(phi_c + math.pi, cuts)

        def mapping(th, t):
            bx, by = cx + r * np.cos(th), cy + r * np.sin(th)
            xy = np.stack([sx + t * (bx - sx), sy + t * (by - sy)], axis=-1)
            return xy, t * r * (r + d * np.cos(th - phi_c))

        return _integrate_tensor(f, mapping, arcs, (0.0, 1.0), spec, False, f"disk r={r:.6g} star")

    # singular point outside: cone about s subtending the disk
    beta = math.asin(r / d)
    cuts = [a for a in jump_angles if abs(math.remainder(a - phi_c, TWO_PI)) < beta]
    rel = sorted(math.remainder(a - phi_c, TWO_PI) for a in cuts)
    edges = [-beta] + rel + [beta]
    arcs = [(phi_c + a, phi_c + b) for a, b in zip(edges[:-1], edges[1:]) if b > a]

    def mapping(th, t):
        c = np.cos(th - phi_c)
        s = np.sin(th - phi_c)
        root = np.sqrt(np.maximum(r * r - d * d * s * s, 0.0))
        rho1, rho2 = d * c - root, d * c + root
        rho = rho1 + t * (rho2 - rho1)
        xy = np.stack([sx + rho * np.cos(th), sy + rho * np.sin(th)], axis=-1)
        return xy, rho * (rho2 - rho1)

    return _integrate_tensor(f, mapping, arcs, (0.0, 1.0), spec, False, f"disk r={r:.6g} cone")


def _integrate_tensor(f, mapping, arcs, t_range, spec, grade_apex, what):
    def evaluate(level):
        th, wth = _angular_rule(arcs, spec, level)
        t, wt = composite_rule(graded_breaks(t_range[0], t_range[1], spec, (grade_apex, False), level),
                               spec.nodes_per_panel)
        return _tensor_sum(f, mapping, th, wth, t, wt)

    return _refine(evaluate, spec, what)


def integrate_sector(f: Callable[[np.ndarray], np.ndarray], center: "Point2", r: float,
                     phi0: float, theta: float, spec: Optional[QuadratureSpec] = None):
    """Integral over the sector {center + rho e(phi): rho < r, phi0 < phi < phi0 + theta}, graded toward the apex"""
    spec = spec or QuadratureSpec()
    if not 0.0 < theta <= TWO_PI:
        raise ValueError(f"sector opening must lie in (0, 2pi], got {theta}")
    cx, cy = center.x, center.y

    def mapping(th, t):
        rho = r * t
        xy = np.stack([cx + rho * np.cos(th), cy + rho * np.sin(th)], axis=-1)
        return xy, r * rho

    def evaluate(level):
        x, w = composite_rule(graded_breaks(phi0, phi0 + theta, spec, (False, False), level), spec.nodes_per_panel)
        t, wt = composite_rule(graded_breaks(0.0, 1.0, spec, (True, False), level), spec.nodes_per_panel)
        return _tensor_sum(f, mapping, x, w, t, wt)

    return _refine(evaluate, spec, f"sector r={r:.6g} theta={theta:.6g}")


# =========================
# Monte-Carlo oracle
# =========================
def monte_carlo_disk(f: Callable[[np.ndarray], np.ndarray], disk: "DiskProbe",
                     singular_point: Optional["Point2"] = None, n: int = 10_000_000,
                     seed: int = 0, chunk: int = 1_000_000):
    """
    Independent estimate of the disk integral by polar importance sampling about
    the singular point: rho uniform on [0, d + r], phi uniform. Returns (mean, standard error).
    """
    s = singular_point if singular_point is not None else disk.center
    d = math.hypot(disk.center.x - s.x, disk.center.y - s.y)
    rho_max = d + disk.radius
    scale = TWO_PI * rho_max
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        rho = rng.uniform(0.0, rho_max, m)
        phi = rng.uniform(0.0, TWO_PI, m)
        xy = np.stack([s.x + rho * np.cos(phi), s.y + rho * np.sin(phi)], axis=-1)
        inside = np.hypot(xy[:, 0] - disk.center.x, xy[:, 1] - disk.center.y) < disk.radius
        inside &= rho > 0.0
        sample = np.zeros(m)
        if np.any(inside):
            sample[inside] = np.asarray(f(xy[inside]), dtype=float) * rho[inside] * scale
        total += float(sample.sum())
        total_sq += float(np.dot(sample, sample))
        done += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)
