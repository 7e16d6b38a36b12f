"""
Harmonic extensions of boundary traces and the competitors built from them.

Disk traces are expanded as a_0 + sum_k a_k cos(k phi) + b_k sin(k phi) and
extended by rho^k; sector traces on an arc of opening theta are expanded in
cos(k pi phi / theta) and extended by rho^(k pi / theta). Energies follow from
the coefficients, and the 2D gradients are available for quadrature checks.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import fft

from .diagnostics import energy_density
from .errors import ArcTooLong, JumpInsideArc, JumpOnCircle, WrongCrossingCount
from .geometry import DiskProbe, FieldModel, Point2, SmoothHarmonic, circle_crossings

logger = logging.getLogger(__name__)

DEFAULT_FOURIER_MODES = 64
SAMPLES_PER_MODE = 8
TWO_SECTOR_MAX_ARC = 1.5 * math.pi - 0.00001
TWO_PI = 2.0 * math.pi


# =========================
# Traces
# =========================
@dataclass(frozen=True)
class FourierTrace:
    """a = (a_0, ..., a_K), b = (b_1, ..., b_K)"""

    r: float
    a: Tuple[float, ...]
    b: Tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if not self.r > 0.0:
            raise ValueError(f"trace radius must be > 0, got {self.r}")
        if len(a) < 1 or len(b) != len(a) - 1:
            raise ValueError("FourierTrace needs K + 1 cosine and K sine coefficients")
        if not all(map(math.isfinite, a + b)):
            raise ValueError("FourierTrace coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def K(self) -> int:
        return len(self.a) - 1

    def as_harmonic(self, center: Point2) -> SmoothHarmonic:
        """The harmonic extension, as a smooth harmonic field about the disk center"""
        scale = [self.r ** -k for k in range(self.K + 1)]
        pairs = [(self.a[0], 0.0)] + [(self.a[k] * scale[k], self.b[k - 1] * scale[k]) for k in range(1, self.K + 1)]
        return SmoothHarmonic(center, tuple(pairs))


@dataclass(frozen=True)
class SectorTrace:
    """Cosine coefficients a_0..a_K of modes cos(k pi phi / theta), phi measured from the arc start"""

    r: float
    theta: float
    a: Tuple[float, ...]
    allow_slit: bool = False

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if not self.r > 0.0:
            raise ValueError(f"trace radius must be > 0, got {self.r}")
        upper_ok = self.theta <= TWO_PI if self.allow_slit else self.theta < TWO_PI
        if not (self.theta > 0.0 and upper_ok):
            raise ValueError(f"sector opening must lie in (0, 2pi), got {self.theta}")
        if not a or not all(map(math.isfinite, a)):
            raise ValueError("SectorTrace needs finite coefficients")
        object.__setattr__(self, "a", a)

    @property
    def K(self) -> int:
        return len(self.a) - 1


# =========================
# Trace extraction
# =========================
def disk_trace(model: FieldModel, disk: DiskProbe, K: int = DEFAULT_FOURIER_MODES,
               n_samples: Optional[int] = None) -> FourierTrace:
    n = n_samples or SAMPLES_PER_MODE * K
    if n < 4 * K:
        raise ValueError(f"n_samples must be >= 4K = {4 * K}, got {n}")
    crossings = circle_crossings(model.jump_set(), disk)
    if crossings:
        raise JumpOnCircle(f"{model.kind}: jump set meets the circle r={disk.radius:.6g} at {len(crossings)} point(s)")
    phi = TWO_PI * np.arange(n) / n
    xy = np.stack([disk.center.x + disk.radius * np.cos(phi), disk.center.y + disk.radius * np.sin(phi)], axis=-1)
    c = fft.rfft(model.value_array(xy)) / n
    a = np.concatenate([[c[0].real], 2.0 * c[1:K + 1].real])
    b = -2.0 * c[1:K + 1].imag
    return FourierTrace(disk.radius, tuple(a), tuple(b))


def sector_trace_from_arc(model: FieldModel, disk: DiskProbe, arc: Tuple[float, float],
                          K: int = DEFAULT_FOURIER_MODES, n_samples: Optional[int] = None,
                          allow_slit: bool = False) -> SectorTrace:
    """Cosine analysis of the trace on the arc (start angle, opening), sampled at panel midpoints"""
    start, width = arc
    n = n_samples or SAMPLES_PER_MODE * K
    if n < 4 * K:
        raise ValueError(f"n_samples must be >= 4K = {4 * K}, got {n}")
    for c in circle_crossings(model.jump_set(), disk):
        rel = (c.angle - start) % TWO_PI
        if 1e-12 < rel < width - 1e-12:
            raise JumpInsideArc(f"{model.kind}: crossing at angle {c.angle:.6g} lies inside the arc")
    phi = start + width * (np.arange(n) + 0.5) / n
    xy = np.stack([disk.center.x + disk.radius * np.cos(phi), disk.center.y + disk.radius * np.sin(phi)], axis=-1)
    y = fft.dct(model.value_array(xy), type=2) / n
    a = np.concatenate([[0.5 * y[0]], y[1:K + 1]])
    return SectorTrace(disk.radius, width, tuple(a), allow_slit=allow_slit)


# =========================
# Energies
# =========================
def disk_extension_energies(trace: FourierTrace) -> Tuple[float, float]:
    """((1/r) int_B |grad v|^2, int_dB |d_tau u|^2)"""
    k = np.arange(1, trace.K + 1)
    m2 = np.asarray(trace.a[1:]) ** 2 + np.asarray(trace.b) ** 2
    return float(np.sum(math.pi * k * m2)) / trace.r, float(np.sum(math.pi * k * k * m2)) / trace.r


def sector_extension_energies(trace: SectorTrace) -> Tuple[float, float, float]:
    """((1/r) int_S |grad v|^2, boundary tangential energy, (theta/pi) * boundary)"""
    k = np.arange(1, trace.K + 1)
    a2 = np.asarray(trace.a[1:]) ** 2
    extension = 0.5 * math.pi * float(np.sum(k * a2)) / trace.r
    boundary = math.pi ** 2 / (2.0 * trace.theta) * float(np.sum(k * k * a2)) / trace.r
    return extension, boundary, trace.theta / math.pi * boundary


def disk_extension_gradient(trace: FourierTrace, center: Point2, xy: np.ndarray) -> np.ndarray:
    return trace.as_harmonic(center).gradient_array(xy)


def sector_extension_gradient(trace: SectorTrace, center: Point2, phi0: float, xy: np.ndarray) -> np.ndarray:
    xy = np.atleast_2d(np.asarray(xy, dtype=float))
    dx, dy = xy[:, 0] - center.x, xy[:, 1] - center.y
    rho = np.hypot(dx, dy)
    phi = np.arctan2(dy, dx)
    psi = np.mod(phi - phi0, TWO_PI)
    d_rho = np.zeros_like(rho)
    d_ang = np.zeros_like(rho)
    for k in range(1, trace.K + 1):
        lam = k * math.pi / trace.theta
        amp = trace.a[k] * lam * rho ** (lam - 1.0) / trace.r ** lam
        d_rho += amp * np.cos(lam * psi)
        d_ang -= amp * np.sin(lam * psi)
    c, s = np.cos(phi), np.sin(phi)
    return np.stack([c * d_rho - s * d_ang, s * d_rho + c * d_ang], axis=-1)


def tail_energy(trace, fit_last: int = 8) -> float:
    """Estimate of sum_{k > K} k^2 c_k^2 from a log-linear fit of the last coefficient magnitudes"""
    a = np.asarray(trace.a[1:])
    b = np.asarray(getattr(trace, "b", np.zeros_like(a)))
    mag = np.hypot(a, b)
    K = len(mag)
    if K < 2:
        return 0.0
    tail = mag[-min(fit_last, K):]
    ks = np.arange(K - len(tail) + 1, K + 1)
    keep = tail > 1e-15
    if keep.sum() < 2:
        return 0.0
    slope, intercept = np.polyfit(ks[keep], np.log(tail[keep]), 1)
    if slope >= 0.0:
        logger.warning("trace coefficients do not decay; tail estimate unavailable")
        return math.inf
    k = np.arange(K + 1, K + 401)
    return float(np.sum(k * k * np.exp(2.0 * (intercept + slope * k))))


# =========================
# Competitors
# =========================
@dataclass(frozen=True)
class DiskCompetitor:
    competitor_E: float
    model_E: float
    gap: float
    tail: float
    boundary: float

    @property
    def bound_rhs(self) -> float:
        return self.boundary


def disk_competitor(model: FieldModel, disk: DiskProbe, K: int = DEFAULT_FOURIER_MODES) -> DiskCompetitor:
    """
    Harmonic extension of the trace replacing u (and any jump) inside the disk

    Parameters:
    -----------
    model : FieldModel
        Minimizer whose trace is extended
    disk : DiskProbe
        Disk on which the competitor replaces u
    K : int
        Number of Fourier modes kept from the trace
    """
    trace = disk_trace(model, disk, K)
    extension, boundary = disk_extension_energies(trace)
    model_E = energy_density(model, disk)
    return DiskCompetitor(extension, model_E, extension - model_E, tail_energy(trace), boundary)


@dataclass(frozen=True)
class TwoSectorCompetitor:
    competitor_E: float
    bound: float
    model_E: float
    gap: float
    arcs: Tuple[Tuple[float, float], Tuple[float, float]]
    tail: float
    extension: float
    boundary: float
    bound_rhs: float


def two_sector_competitor(model: FieldModel, disk: DiskProbe, K: int = DEFAULT_FOURIER_MODES) -> TwoSectorCompetitor:
    """Sector extensions on both arcs between the two crossings, with jumps along the two radii"""
    crossings = circle_crossings(model.jump_set(), disk)
    transversal = [c for c in crossings if c.transversal]
    if len(transversal) != 2 or len(crossings) != 2:
        raise WrongCrossingCount(2, len(transversal))
    t1, t2 = sorted(c.angle for c in crossings)
    arcs = ((t1, t2 - t1), (t2, TWO_PI - (t2 - t1)))
    longest = max(w for _, w in arcs)
    if longest > TWO_SECTOR_MAX_ARC:
        raise ArcTooLong(f"longer arc {longest:.6g} exceeds {TWO_SECTOR_MAX_ARC:.6g}")

    extension = 0.0
    boundary = 0.0
    bound_rhs = 0.0
    tail = 0.0
    for arc in arcs:
        trace = sector_trace_from_arc(model, disk, arc, K)
        ext, bnd, rhs = sector_extension_energies(trace)
        extension += ext
        boundary += bnd
        bound_rhs += rhs
        tail += tail_energy(trace)
    competitor_E = extension + 2.0
    bound = TWO_SECTOR_MAX_ARC / math.pi * boundary + 2.0
    model_E = energy_density(model, disk)
    return TwoSectorCompetitor(competitor_E, bound, model_E, competitor_E - model_E, arcs, tail,
                               extension, boundary, bound_rhs)
