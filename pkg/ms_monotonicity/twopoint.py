"""
The two-crossing angle inequality.

With two crossings x1 (counterclockwise) and x2 on dB_r, tangents
t_i = cos(a_i) nu(x_i) + sin(a_i) nu_perp(x_i) and shorter-arc angle phi,

    f(a1, a2) = 1/(2 cos a1) + 1/(2 cos a2) + sqrt(2 + 2 cos(phi~ + a1 - a2)),
    phi~ = min(phi, pi/2).

Lower bounds for f are certified on a grid: every cell is within one cell
radius of a node, so min f >= min over nodes - L * cell_radius for a
Lipschitz constant L of f on the search region.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from .diagnostics import circle_terms
from .errors import CertificationInconclusive, WrongCrossingCount

logger = logging.getLogger(__name__)


# =========================
# Constants
# =========================
HALF_PI = 0.5 * math.pi
DEFAULT_CERT_N = 4096
MIN_CERT_N = 1024
MIN_FMIN_N = 256

# outside |a| <= arccos(1/3): 1/(2 cos a) > 3/2, so f > 2 exceeds claims (1), (2)
CERT_REGION = math.acos(1.0 / 3.0)
# outside |a| <= arccos(1/6): 1/(2 cos a) > 3 >= f(0, 0)
FMIN_REGION = math.acos(1.0 / 6.0)

REDUCED_PHI = 82.0 / 90.0 * HALF_PI
CRITICAL_ALPHA = HALF_PI / 2.0
REDUCED_CRITICAL_ALPHA = 98.0 / 90.0 * HALF_PI / 2.0

ARC_BRANCH = HALF_PI + 0.00001
PROBE_BOUND = math.sqrt(2.0) - 0.005


@dataclass(frozen=True)
class TwoPointConfig:
    phi_tilde: float
    alpha1: float
    alpha2: float

    def __post_init__(self):
        if not 0.0 < self.phi_tilde <= HALF_PI:
            raise ValueError(f"phi_tilde must lie in (0, pi/2], got {self.phi_tilde}")
        for a in (self.alpha1, self.alpha2):
            if not -HALF_PI < a < HALF_PI or math.cos(a) <= 0.0:
                raise ValueError(f"alpha must lie in (-pi/2, pi/2), got {a}")


def f_values(phi_tilde, alpha1, alpha2):
    """Vectorized f; sqrt(2 + 2 cos x) is written as 2 |cos(x / 2)|"""
    return (0.5 / np.cos(alpha1) + 0.5 / np.cos(alpha2)
            + 2.0 * np.abs(np.cos(0.5 * (phi_tilde + alpha1 - alpha2))))


def f_eval(config: TwoPointConfig) -> float:
    return float(f_values(config.phi_tilde, config.alpha1, config.alpha2))


def f_reduced(alpha1, alpha2, phi_max: float):
    """min of f over phi~ in [0, phi_max]; |cos| is concave between zeros, so endpoints or a zero"""
    gamma = alpha1 - alpha2
    base = 0.5 / np.cos(alpha1) + 0.5 / np.cos(alpha2)
    ends = np.minimum(np.abs(np.cos(0.5 * gamma)), np.abs(np.cos(0.5 * (phi_max + gamma))))
    hits_zero = (gamma <= math.pi) & (math.pi <= gamma + phi_max)
    return base + 2.0 * np.where(hits_zero, 0.0, ends)


# =========================
# Minimization
# =========================
def _grid(region: float, n: int) -> np.ndarray:
    return np.linspace(-region, region, n)


def _grid_argmin(fun, axis: np.ndarray, chunk_rows: int = 256):
    best, best_ij = math.inf, (0, 0)
    for i in range(0, len(axis), chunk_rows):
        a1 = axis[i:i + chunk_rows, None]
        vals = fun(a1, axis[None, :])
        k = int(np.argmin(vals))
        r, c = divmod(k, vals.shape[1])
        if vals[r, c] < best:
            best, best_ij = float(vals[r, c]), (i + r, c)
    return best, best_ij


def f_min(phi_tilde: float, n: int = 1024) -> Tuple[float, Tuple[float, float]]:
    """Grid minimum of f over the search region, polished by bounded line searches"""
    if n < MIN_FMIN_N:
        raise ValueError(f"f_min needs n >= {MIN_FMIN_N}, got {n}")
    if not 0.0 < phi_tilde <= HALF_PI:
        raise ValueError(f"phi_tilde must lie in (0, pi/2], got {phi_tilde}")
    axis = _grid(FMIN_REGION, n)
    h = axis[1] - axis[0]
    best, (i, j) = _grid_argmin(lambda a1, a2: f_values(phi_tilde, a1, a2), axis)
    x = np.array([axis[i], axis[j]])

    # the kink a1 - a2 = pi - phi~ runs along (1, 1)
    directions = [np.array(d) / np.linalg.norm(d) for d in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0))]
    step = 2.0 * h
    for _ in range(60):
        improved = False
        for d in directions:
            res = minimize_scalar(lambda s: float(f_values(phi_tilde, *(x + s * d))),
                                  bounds=(-step, step), method="bounded", options={"xatol": 1e-13})
            y = x + res.x * d
            if np.all(np.abs(y) < FMIN_REGION) and res.fun < best - 1e-16:
                x, best, improved = y, float(res.fun), True
        if not improved:
            break
    logger.debug("f_min(%.6g) = %.15g at (%.9g, %.9g)", phi_tilde, best, x[0], x[1])
    return best, (float(x[0]), float(x[1]))


def f_landscape(phi_tilde: float, n: int = 129, region: float = CERT_REGION) -> pd.DataFrame:
    axis = _grid(region, n)
    a1, a2 = np.meshgrid(axis, axis, indexing="ij")
    return pd.DataFrame({
        "phi_tilde": np.full(a1.size, phi_tilde),
        "alpha1": a1.ravel(),
        "alpha2": a2.ravel(),
        "f": f_values(phi_tilde, a1, a2).ravel(),
    })


# =========================
# Certification
# =========================
@dataclass
class CertificationReport:
    claim_id: str
    grid_resolution: int
    grid_minimum: float
    lipschitz_bound: float
    cell_radius: float
    certified_lower_bound: float
    claimed_constant: float
    verdict: bool
    description: str = ""
    residual_cells: int = 0

    @property
    def slack(self) -> float:
        return self.certified_lower_bound - self.claimed_constant


def _secant_lipschitz(region: float) -> float:
    """max |d/da 1/(2 cos a)| for |a| <= region"""
    return math.sin(region) / (2.0 * math.cos(region) ** 2)


def _report(claim_id, n, grid_min, lip_per_coord, h, claimed, description, residual=0):
    # |f(x) - f(node)| <= L (|dx1| + |dx2|) <= 2 L (h / 2)
    lip = 2.0 * lip_per_coord
    radius = 0.5 * h
    certified = grid_min - lip * radius
    return CertificationReport(claim_id, n, grid_min, lip, radius, certified, claimed,
                               certified >= claimed, description, residual)


def certify_lemma54(n: int = DEFAULT_CERT_N, claims: Sequence[int] = (1, 2, 3, 4), strict: bool = True,
                    chunk_rows: int = 128) -> List[CertificationReport]:
    """
    Certified bounds for the four claims of the two-crossing inequality:

    1. f >= sqrt(2) - 0.005 for every phi~ in (0, pi/2]
    2. f >= 1.52 for phi~ <= (82/90)(pi/2)
    3. where f < 1.51: 1/(2 cos a1) + 1/(2 cos a2) >= 1.26
    4. where f < 1.51: sum 1/(2 cos a_i) + cos(a_i)/2 >= 2.055

    phi~ is eliminated exactly with f_reduced. Claims 3 and 4 are certified on
    the cells that could not be certified to have f >= 1.51.
    """
    if n < MIN_CERT_N:
        raise ValueError(f"certification needs n >= {MIN_CERT_N}, got {n}")
    axis = _grid(CERT_REGION, n)
    h = float(axis[1] - axis[0])
    lip_f = _secant_lipschitz(CERT_REGION) + 1.0
    threshold = 1.51 + lip_f * h

    min_full = math.inf
    min_reduced = math.inf
    min_g3 = math.inf
    min_g4 = math.inf
    residual = 0
    reach = 0.0
    want_full = any(c in claims for c in (1, 3, 4))
    for i in range(0, n, chunk_rows):
        a1 = axis[i:i + chunk_rows, None]
        a2 = axis[None, :]
        if want_full:
            full = f_reduced(a1, a2, HALF_PI)
            min_full = min(min_full, float(full.min()))
            mask = full < threshold
            if mask.any():
                A1, A2 = np.broadcast_arrays(a1, a2)
                b1, b2 = A1[mask], A2[mask]
                sec = 0.5 / np.cos(b1) + 0.5 / np.cos(b2)
                min_g3 = min(min_g3, float(sec.min()))
                min_g4 = min(min_g4, float((sec + 0.5 * np.cos(b1) + 0.5 * np.cos(b2)).min()))
                reach = max(reach, float(np.abs(b1).max()), float(np.abs(b2).max()))
                residual += int(mask.sum())
        if 2 in claims:
            min_reduced = min(min_reduced, float(f_reduced(a1, a2, REDUCED_PHI).min()))

    reports = []
    if 1 in claims:
        reports.append(_report("1", n, min_full, lip_f, h, PROBE_BOUND, "f >= sqrt(2) - 0.005 for phi~ in (0, pi/2]"))
    if 2 in claims:
        reports.append(_report("2", n, min_reduced, lip_f, h, 1.52, "f >= 1.52 for phi~ <= (82/90)(pi/2)"))
    if residual:
        box = min(reach + 0.5 * h, CERT_REGION)
        lip3 = _secant_lipschitz(box)
        lip4 = 0.5 * math.sin(box) * (1.0 / math.cos(box) ** 2 - 1.0)
    else:
        lip3 = lip4 = 0.0
    if 3 in claims:
        reports.append(_report("3", n, min_g3, lip3, h, 1.26,
                               "where f < 1.51: 1/(2 cos a1) + 1/(2 cos a2) >= 1.26", residual))
    if 4 in claims:
        reports.append(_report("4", n, min_g4, lip4, h, 2.055,
                               "where f < 1.51: sum 1/(2 cos a_i) + cos(a_i)/2 >= 2.055", residual))

    for rep in reports:
        logger.info("claim %s: grid min %.6f, certified %.6f vs %.6f (%s)", rep.claim_id, rep.grid_minimum,
                    rep.certified_lower_bound, rep.claimed_constant, "pass" if rep.verdict else "FAIL")
        if strict and not rep.verdict:
            raise CertificationInconclusive(rep)
    return reports


# =========================
# Symmetrization and derivative signs
# =========================
def symmetrization_check(n: int = 128) -> float:
    """min over a (phi~, a, s) grid of f(a + s, -a + s) - f(a, -a); a1 - a2 is independent of s"""
    if n < 128:
        raise ValueError(f"symmetrization_check needs n >= 128, got {n}")
    phis = np.linspace(HALF_PI / n, HALF_PI, n)
    alpha = np.linspace(0.0, HALF_PI, n + 2)[1:-1]
    frac = np.linspace(-1.0, 1.0, n) * (1.0 - 1e-9)
    s = np.minimum(alpha, HALF_PI - alpha)[:, None] * frac[None, :]
    a = alpha[:, None]
    worst = math.inf
    for phi in phis:
        diff = f_values(phi, a + s, -a + s) - f_values(phi, a, -a)
        worst = min(worst, float(diff.min()))
    return worst


def one_sided_derivative(alpha: float, c: float, side: int) -> float:
    """Derivative of 1/cos(a) + 2 (cos(c + a))_+ from the left (side=-1) or right (side=+1)"""
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    base = math.sin(alpha) / math.cos(alpha) ** 2
    cosine = math.cos(c + alpha)
    active = cosine > 1e-12 or (abs(cosine) <= 1e-12 and side < 0)
    return base - 2.0 * math.sin(c + alpha) if active else base


@dataclass
class DerivativeSignReport:
    verdict: bool
    max_left: float
    min_right: float
    kinks: List[Tuple[float, float, float]] = field(default_factory=list)


def derivative_sign_check(n: int = 1024) -> DerivativeSignReport:
    """
    d/da [1/cos a + 2 (cos(c + a))_+] < 0 below the critical point a* = pi/2 - c and > 0 above,
    for c = pi/4 (a* = pi/4) and c = (82/90)(pi/4) (a* = (98/90)(pi/4))
    """
    if n < MIN_CERT_N:
        raise ValueError(f"derivative_sign_check needs n >= {MIN_CERT_N}, got {n}")
    max_left, min_right = -math.inf, math.inf
    kinks = []
    for c, crit in ((HALF_PI / 2.0, CRITICAL_ALPHA), (REDUCED_PHI / 2.0, REDUCED_CRITICAL_ALPHA)):
        left = np.linspace(0.0, crit, n + 1)[1:-1]
        right = np.linspace(crit, HALF_PI, n + 1)[1:-1]
        d_left = np.sin(left) / np.cos(left) ** 2 - 2.0 * np.sin(c + left)
        d_right = np.sin(right) / np.cos(right) ** 2
        max_left = max(max_left, float(d_left.max()))
        min_right = min(min_right, float(d_right.min()))
        kinks.append((crit, one_sided_derivative(crit, c, -1), one_sided_derivative(crit, c, 1)))
    verdict = max_left < 0.0 < min_right and all(lo < 0.0 < hi for _, lo, hi in kinks)
    return DerivativeSignReport(verdict, max_left, min_right, kinks)


# =========================
# Configurations from probes
# =========================
def crossings_to_config(crossings, disk) -> Tuple[TwoPointConfig, float]:
    """(config, phi): x1 is counterclockwise from x2 along the shorter arc of angle phi"""
    transversal = [c for c in crossings if c.transversal]
    if len(transversal) != 2 or len(crossings) != 2:
        raise WrongCrossingCount(2, len(transversal))
    a, b = crossings
    delta = (b.angle - a.angle) % (2.0 * math.pi)
    if delta <= math.pi:
        x2, x1, phi = a, b, delta
    else:
        x2, x1, phi = b, a, 2.0 * math.pi - delta

    def tangent_angle(c):
        nx, ny = c.point.x - disk.center.x, c.point.y - disk.center.y
        norm = math.hypot(nx, ny)
        nx, ny = nx / norm, ny / norm
        t = c.tangent
        return math.atan2(t.ux * -ny + t.uy * nx, t.ux * nx + t.uy * ny)

    return TwoPointConfig(min(phi, HALF_PI), tangent_angle(x1), tangent_angle(x2)), phi


@dataclass(frozen=True)
class TwoPointProbe:
    config: TwoPointConfig
    phi: float
    f: float
    lhs: float
    applies: bool
    passed: bool


def two_crossing_probe(model, disk, spec=None) -> TwoPointProbe:
    """sum 1/(2 |nu . t|) + circle Dirichlet energy against sqrt(2) - 0.005 on the short-arc branch"""
    terms = circle_terms(model, disk, spec)
    config, phi = crossings_to_config(terms.crossings, disk)
    lhs = 0.5 * terms.inv_sum + terms.dirichlet
    applies = phi <= ARC_BRANCH
    passed = (lhs >= PROBE_BOUND - 1e-6) if applies else True
    return TwoPointProbe(config, phi, f_eval(config), lhs, applies, passed)
