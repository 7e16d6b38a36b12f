import math

import numpy as np
import pytest

from ms_monotonicity.competitors import (
    FourierTrace,
    SectorTrace,
    disk_competitor,
    disk_extension_energies,
    disk_extension_gradient,
    disk_trace,
    sector_extension_energies,
    sector_extension_gradient,
    sector_trace_from_arc,
    tail_energy,
    two_sector_competitor,
)
from ms_monotonicity.errors import ArcTooLong, JumpInsideArc, JumpOnCircle, WrongCrossingCount
from ms_monotonicity.geometry import SQRT_2_OVER_PI, DiskProbe, PlanarInterface, Point2, SmoothHarmonic, UnitVector
from ms_monotonicity.quadrature import ArcPartition, integrate_circle, integrate_disk, integrate_interval, integrate_sector


def _squared(grad):
    def f(xy):
        g = grad(xy)
        return np.einsum("ij,ij->i", g, g)
    return f


def test_trace_validation():
    with pytest.raises(ValueError):
        FourierTrace(1.0, (0.0, 1.0), ())
    with pytest.raises(ValueError):
        FourierTrace(0.0, (0.0,), ())
    with pytest.raises(ValueError):
        SectorTrace(1.0, 2.0 * math.pi, (0.0, 1.0))
    assert SectorTrace(1.0, 2.0 * math.pi, (0.0, 1.0), allow_slit=True).K == 1


def test_disk_trace_of_linear_field(models):
    trace = disk_trace(models["smooth_linear"], DiskProbe(Point2(0.0, 0.0), 2.0), K=8)
    assert trace.a[1] == pytest.approx(2.0)
    assert np.allclose(trace.a[2:], 0.0, atol=1e-13)
    assert np.allclose(trace.b, 0.0, atol=1e-13)
    extension, boundary = disk_extension_energies(trace)
    assert extension == pytest.approx(2.0 * math.pi)
    assert boundary == pytest.approx(2.0 * math.pi)


def test_disk_trace_rejects_jumps_on_circle(crack_tip):
    with pytest.raises(JumpOnCircle):
        disk_trace(crack_tip, DiskProbe(Point2(0.0, 0.0), 1.0))
    with pytest.raises(ValueError):
        disk_trace(crack_tip, DiskProbe(Point2(0.0, 3.0), 1.0), K=16, n_samples=32)


def test_harmonic_extension_reproduces_polynomials():
    model = SmoothHarmonic(Point2(0.1, 0.0), ((0.5, 0.0), (1.0, -0.5), (0.3, 0.7)))
    disk = DiskProbe(Point2(0.3, 0.1), 0.5)
    trace = disk_trace(model, disk, K=8)
    inside = np.array([[0.4, 0.2], [0.1, -0.1]])
    assert trace.as_harmonic(disk.center).value_array(inside) == pytest.approx(model.value_array(inside), rel=1e-12)
    gap = disk_competitor(model, disk, K=8).gap
    assert gap == pytest.approx(0.0, abs=1e-12)


def test_disk_extension_gradient_integrates_to_energy(spec):
    trace = FourierTrace(1.5, (0.2, 0.5, -0.3, 0.1), (0.4, 0.0, 0.25))
    center = Point2(0.0, 1.0)
    value, _ = integrate_disk(_squared(lambda xy: disk_extension_gradient(trace, center, xy)),
                              DiskProbe(center, trace.r), None, spec)
    assert value / trace.r == pytest.approx(disk_extension_energies(trace)[0], rel=1e-10)


def test_disk_competitor_for_crack_tip_off_the_crack(crack_tip):
    res = disk_competitor(crack_tip, DiskProbe(Point2(1.0, 1.0), 0.5), K=64)
    assert res.gap >= -1e-8
    assert res.tail < 1e-10


def test_slit_disk_extension_of_crack_tip(crack_tip):
    disk = DiskProbe(Point2(0.0, 0.0), 1.0)
    trace = sector_trace_from_arc(crack_tip, disk, (0.0, 2.0 * math.pi), K=16, allow_slit=True)
    assert trace.a[1] == pytest.approx(SQRT_2_OVER_PI, rel=1e-12)
    assert np.allclose(trace.a[2:], 0.0, atol=1e-13)
    extension, _, _ = sector_extension_energies(trace)
    assert extension == pytest.approx(1.0, rel=1e-12)


def test_sector_trace_rejects_jump_inside_arc(crack_tip):
    with pytest.raises(JumpInsideArc):
        sector_trace_from_arc(crack_tip, DiskProbe(Point2(0.0, 0.0), 1.0), (-1.0, 2.0))


def test_sector_extension_gradient_integrates_to_energy(spec):
    trace = SectorTrace(1.0, math.pi, (0.0, 1.0, 0.5))
    assert sector_extension_energies(trace)[0] == pytest.approx(0.75 * math.pi)
    value, _ = integrate_sector(_squared(lambda xy: sector_extension_gradient(trace, Point2(0.0, 0.0), 0.0, xy)),
                                Point2(0.0, 0.0), 1.0, 0.0, math.pi, spec)
    assert value == pytest.approx(0.75 * math.pi, rel=1e-10)


def test_two_sector_competitor_for_interface():
    model = PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 0.0)
    disk = DiskProbe(Point2(0.0, 0.2), 1.0)
    res = two_sector_competitor(model, disk, K=16)
    assert res.competitor_E == pytest.approx(2.0, abs=1e-12)
    assert res.model_E == pytest.approx(2.0 * math.sqrt(0.96))
    assert res.gap >= 0.0
    assert res.competitor_E <= res.bound + 1e-12
    assert sum(width for _, width in res.arcs) == pytest.approx(2.0 * math.pi)


def test_two_sector_competitor_for_crack_tip(crack_tip):
    res = two_sector_competitor(crack_tip, DiskProbe(Point2(1.0, 0.3), 0.5), K=64)
    assert res.gap >= -1e-6
    assert res.competitor_E <= res.bound + 1e-12


def test_two_sector_preconditions(crack_tip):
    with pytest.raises(WrongCrossingCount) as info:
        two_sector_competitor(crack_tip, DiskProbe(Point2(0.2, 0.1), 1.0))
    assert info.value.found == 1
    interface = PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 0.0)
    with pytest.raises(ArcTooLong):
        two_sector_competitor(interface, DiskProbe(Point2(0.0, 0.9), 1.0))


def test_tail_energy():
    assert tail_energy(FourierTrace(1.0, (0.0, 0.0, 0.0), (0.0, 0.0))) == 0.0
    k = np.arange(1, 33)
    decaying = FourierTrace(1.0, (0.0, *np.exp(-k)), tuple(np.zeros(32)))
    expected = float(np.sum(np.arange(33, 433) ** 2 * np.exp(-2.0 * np.arange(33, 433))))
    assert tail_energy(decaying) == pytest.approx(expected, rel=1e-6)


# =========================
# Extension inequalities
# =========================
def test_disk_competitor_reports_boundary_bound(models):
    res = disk_competitor(models["smooth_quadratic"], DiskProbe(Point2(0.2, -0.1), 0.7), K=16)
    assert res.bound_rhs == res.boundary
    assert res.competitor_E < res.bound_rhs


def test_two_sector_extension_below_boundary_bound(crack_tip):
    res = two_sector_competitor(crack_tip, DiskProbe(Point2(1.0, 0.3), 0.5), K=64)
    assert res.extension <= res.bound_rhs * (1.0 + 1e-12)
    assert res.bound_rhs <= res.boundary * 1.5 + 1e-12


def test_extension_inequalities_on_random_traces(rng):
    for _ in range(10_000):
        K = int(rng.integers(1, 9))
        r = float(rng.uniform(0.1, 10.0))
        theta = float(rng.uniform(0.05, 2.0 * math.pi - 1e-9))
        a, b = rng.normal(size=K + 1), rng.normal(size=K)
        extension, boundary = disk_extension_energies(FourierTrace(r, tuple(a), tuple(b)))
        assert extension <= boundary * (1.0 + 1e-12)
        sector_ext, _, rhs = sector_extension_energies(SectorTrace(r, theta, tuple(a)))
        assert sector_ext <= rhs * (1.0 + 1e-12)


def test_extension_inequalities_are_equalities_for_linear_modes(rng):
    for _ in range(10_000):
        r = float(rng.uniform(0.1, 10.0))
        theta = float(rng.uniform(0.05, 2.0 * math.pi - 1e-9))
        a, b = rng.normal(size=2), rng.normal(size=1)
        extension, boundary = disk_extension_energies(FourierTrace(r, tuple(a), tuple(b)))
        assert abs(extension - boundary) < 1e-12 * max(1.0, boundary)
        sector_ext, _, rhs = sector_extension_energies(SectorTrace(r, theta, tuple(a)))
        assert abs(sector_ext - rhs) < 1e-12 * max(1.0, rhs)


def test_higher_modes_make_the_inequalities_strict():
    a = (0.0, 1.0, 0.0, 0.2)
    extension, boundary = disk_extension_energies(FourierTrace(1.0, a, (0.0, 0.0, 0.0)))
    assert boundary - extension == pytest.approx(math.pi * (9.0 - 3.0) * 0.04)
    sector_ext, _, rhs = sector_extension_energies(SectorTrace(1.0, 2.0, a))
    assert rhs - sector_ext == pytest.approx(0.5 * math.pi * (9.0 - 3.0) * 0.04)


# =========================
# Coefficients against quadrature
# =========================
def test_boundary_energy_matches_circle_integral(rng, spec):
    for _ in range(5):
        K = int(rng.integers(1, 9))
        trace = FourierTrace(float(rng.uniform(0.5, 3.0)), tuple(rng.normal(size=K + 1)), tuple(rng.normal(size=K)))
        k = np.arange(1, K + 1)

        def d_tau_squared(phi):
            kp = np.outer(phi, k)
            d = (-np.sin(kp) @ (k * np.asarray(trace.a[1:])) + np.cos(kp) @ (k * np.asarray(trace.b))) / trace.r
            return d * d

        value, _ = integrate_circle(d_tau_squared, ArcPartition(DiskProbe(Point2(0.0, 0.0), trace.r)), spec)
        assert value == pytest.approx(disk_extension_energies(trace)[1], rel=1e-10)


def test_sector_boundary_energy_matches_arc_integral(rng, spec):
    for _ in range(5):
        K = int(rng.integers(1, 9))
        trace = SectorTrace(float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.3, 6.0)), tuple(rng.normal(size=K + 1)))
        lam = np.arange(1, K + 1) * math.pi / trace.theta

        def d_tau_squared(phi):
            d = -np.sin(np.outer(phi, lam)) @ (lam * np.asarray(trace.a[1:])) / trace.r
            return d * d

        value, _ = integrate_interval(d_tau_squared, 0.0, trace.theta, spec)
        assert trace.r * value == pytest.approx(sector_extension_energies(trace)[1], rel=1e-10)


def test_extension_energies_match_quadrature_on_random_traces(rng, spec):
    for _ in range(4):
        K = int(rng.integers(1, 9))
        trace = FourierTrace(float(rng.uniform(0.5, 2.0)), tuple(rng.normal(size=K + 1)), tuple(rng.normal(size=K)))
        center = Point2(float(rng.normal()), float(rng.normal()))
        value, _ = integrate_disk(_squared(lambda xy: disk_extension_gradient(trace, center, xy)),
                                  DiskProbe(center, trace.r), None, spec)
        assert value / trace.r == pytest.approx(disk_extension_energies(trace)[0], rel=1e-6)

        sector = SectorTrace(trace.r, float(rng.uniform(0.5, 3.0)), trace.a)
        phi0 = float(rng.uniform(0.0, 2.0 * math.pi))
        value, _ = integrate_sector(_squared(lambda xy: sector_extension_gradient(sector, center, phi0, xy)),
                                    center, sector.r, phi0, sector.theta, spec)
        assert value / sector.r == pytest.approx(sector_extension_energies(sector)[0], rel=1e-6)
