import math

import numpy as np
import pytest

from ms_monotonicity.diagnostics import (
    F_CAP,
    BumpField,
    circle_terms,
    classify_point,
    d_rep1,
    d_rep2,
    dirichlet_energy,
    dlms_residual,
    energy_density,
    entropy,
    equilibrium_residual,
    equilibrium_terms,
    case_estimates,
    probe,
    prop31_gap,
    prop31_grid_gap,
    radial_slice_bound,
    radius_grid,
    random_bumps,
    scale_check,
    scan,
    sharpness_scan,
    singular_radii,
    crossing_case,
)
from ms_monotonicity.errors import AtSingularPoint, TangentialContact
from ms_monotonicity.geometry import DiskProbe, PlanarInterface, Point2, UnitVector

ORIGIN = Point2(0.0, 0.0)


# =========================
# Entropy and energy density
# =========================
@pytest.mark.parametrize("r", [0.3, 1.0, 7.5])
def test_crack_tip_entropy_at_tip(crack_tip, r):
    disk = DiskProbe(ORIGIN, r)
    assert entropy(crack_tip, disk) == pytest.approx(1.5, rel=1e-14)
    assert energy_density(crack_tip, disk) == pytest.approx(2.0, rel=1e-14)


def test_crack_tip_entropy_off_axis(crack_tip):
    assert entropy(crack_tip, DiskProbe(Point2(0.1, 0.0), 1.0)) == pytest.approx(1.547495, abs=1e-6)


def test_catalog_entropies(models):
    disk = DiskProbe(ORIGIN, 2.0)
    assert entropy(models["planar_interface"], disk) == pytest.approx(1.0)
    assert energy_density(models["planar_interface"], disk) == pytest.approx(2.0)
    assert entropy(models["propeller"], disk) == pytest.approx(1.5)
    assert energy_density(models["propeller"], disk) == pytest.approx(3.0)
    assert entropy(models["smooth_linear"], disk) == pytest.approx(2.0 * math.pi)


def test_dirichlet_energy_methods(models, spec):
    disk = DiskProbe(Point2(0.3, -0.2), 0.7)
    with pytest.raises(ValueError):
        dirichlet_energy(models["crack_tip"], disk, method="exact")
    assert dirichlet_energy(models["propeller"], disk, spec, method="quadrature") == pytest.approx(0.0, abs=1e-14)


# =========================
# Circle terms and the dissipation
# =========================
def test_circle_terms_at_tip(crack_tip, spec):
    terms = circle_terms(crack_tip, DiskProbe(ORIGIN, 2.0), spec)
    assert terms.tau == pytest.approx(0.5, rel=1e-9)
    assert terms.nu == pytest.approx(0.5, rel=1e-9)
    assert len(terms.crossings) == 1
    assert terms.inv_sum == pytest.approx(1.0)


def test_circle_terms_reject_tangency_and_singular_points(crack_tip, spec):
    interface = PlanarInterface(ORIGIN, UnitVector(0.0, 1.0), 1.0, 0.0)
    with pytest.raises(TangentialContact):
        circle_terms(interface, DiskProbe(Point2(0.0, 1.0), 1.0), spec)
    with pytest.raises(AtSingularPoint):
        circle_terms(crack_tip, DiskProbe(Point2(1.0, 0.0), 1.0), spec)


@pytest.mark.parametrize("center, r", [((1.0, 0.0), 0.5), ((0.5, 0.5), 1.0), ((0.2, -0.4), 3.0), ((2.0, 1.0), 0.7)])
def test_representations_and_boundary_relation(crack_tip, spec, center, r):
    disk = DiskProbe(Point2(*center), r)
    res = dlms_residual(crack_tip, disk, spec)
    assert abs(res) < 1e-8
    d1, d2 = d_rep1(crack_tip, disk, spec), d_rep2(crack_tip, disk, spec)
    chi = 1.0 if entropy(crack_tip, disk) < F_CAP - 1e-12 else 0.0
    assert d2 - d1 == pytest.approx(0.5 * chi * res, abs=1e-12)
    assert d1 == pytest.approx(d2, abs=1e-8)


def test_dissipation_vanishes_above_cap(crack_tip, spec):
    # the tip lies inside, so F > 3/2
    disk = DiskProbe(Point2(0.1, 0.0), 1.0)
    assert d_rep1(crack_tip, disk, spec) == 0.0
    assert d_rep2(crack_tip, disk, spec) == 0.0


def test_interface_boundary_relation(spec):
    interface = PlanarInterface(ORIGIN, UnitVector(0.0, 1.0), 1.0, 0.0)
    assert dlms_residual(interface, DiskProbe(Point2(0.1, 0.3), 1.0), spec) == pytest.approx(0.0, abs=1e-12)


def test_boundary_relation_on_random_disks(models, spec, rng):
    kinds = ["crack_tip", "planar_interface", "propeller"]
    checked = 0
    while checked < 100:
        model = models[kinds[checked % len(kinds)]]
        center = Point2(*rng.uniform(-2.0, 2.0, 2))
        r = float(rng.uniform(0.05, 3.0))
        near = [model.jump_set().distance_to(center)] + [s.distance(center) for s in model.singular_points()]
        if min(abs(r - d) for d in near) < 1e-3:
            continue
        assert abs(dlms_residual(model, DiskProbe(center, r), spec)) < 1e-6, (model.kind, center, r)
        checked += 1


def test_crossing_bound(crack_tip, spec):
    disk = DiskProbe(Point2(0.4, -0.3), 0.9)
    for angle in np.linspace(0.0, 2.0 * math.pi, 13):
        assert prop31_gap(crack_tip, disk, UnitVector.from_angle(angle), spec) >= -1e-8
    grid_gap, exact_gap, q = prop31_grid_gap(crack_tip, disk, 720, spec)
    assert exact_gap >= -1e-8
    assert grid_gap >= exact_gap - 1e-12
    assert prop31_gap(crack_tip, disk, q, spec) == pytest.approx(grid_gap, abs=1e-9)


def test_radial_slice_bound(models, spec):
    assert radial_slice_bound(models["crack_tip"], DiskProbe(ORIGIN, 0.8), spec) == pytest.approx(0.0, abs=1e-8)
    assert radial_slice_bound(models["propeller"], DiskProbe(ORIGIN, 0.8), spec) == pytest.approx(1.0)
    assert radial_slice_bound(models["planar_interface"], DiskProbe(ORIGIN, 0.8), spec) == pytest.approx(0.0)


# =========================
# Rows and scans
# =========================
def test_probe_skips_singular_circles(crack_tip, scan_spec):
    row = probe(crack_tip, DiskProbe(Point2(1.0, 0.0), 1.0), scan_spec)
    assert row.skipped_tangential
    assert math.isnan(row.D1)
    assert row.note


def test_radius_grid():
    grid = radius_grid(0.05, 50.0, 400)
    assert len(grid) == 400 and grid[0] == pytest.approx(0.05) and grid[-1] == pytest.approx(50.0)
    assert np.allclose(np.diff(np.log(grid)), np.log(1000.0) / 399)
    with pytest.raises(ValueError):
        radius_grid(1.0, 0.5, 10)
    with pytest.raises(ValueError):
        radius_grid(0.1, 1.0, 10, kind="cubic")


def test_singular_radii(models):
    assert singular_radii(models["crack_tip"], Point2(3.0, 4.0)) == [5.0]
    assert singular_radii(models["crack_tip"], ORIGIN) == []


def test_scan_needs_enough_radii(crack_tip):
    with pytest.raises(ValueError):
        scan(crack_tip, Point2(1.0, 0.0), radius_grid(0.1, 1.0, 10))


def test_short_scan_off_the_crack(crack_tip, scan_spec):
    report = scan(crack_tip, Point2(1.0, 0.0), radius_grid(0.1, 5.0, 40), scan_spec)
    assert report.verdict
    assert report.differential_verdict
    assert report.passed
    live = [row for row in report.rows if not row.skipped_tangential]
    assert all(case_estimates(row).passed for row in live)
    assert all(abs(row.dlms_residual) < 1e-6 for row in live)
    assert report.summary()["rows"] == 40


def test_scan_is_independent_of_worker_count(crack_tip, scan_spec):
    grid = radius_grid(0.2, 3.0, 32)
    serial = scan(crack_tip, Point2(0.5, 0.5), grid, scan_spec)
    threaded = scan(crack_tip, Point2(0.5, 0.5), grid, scan_spec, workers=4)
    assert [r.to_dict() for r in serial.rows] == [r.to_dict() for r in threaded.rows]


@pytest.mark.slow
def test_full_crack_tip_scan(crack_tip, scan_spec):
    report = scan(crack_tip, Point2(1.0, 0.0), radius_grid(0.05, 50.0, 400), scan_spec)
    assert report.verdict
    assert report.differential_verdict
    final = report.rows[-1]
    # F(50, e1) = F(1, 0.02 e1) = 3/2 + 0.00995...
    assert final.F == pytest.approx(entropy(crack_tip, DiskProbe(Point2(0.02, 0.0), 1.0)), rel=1e-12)
    assert abs(final.F - 1.5) < 0.011


@pytest.mark.slow
@pytest.mark.parametrize("name, x0", [
    ("crack_tip", (0.0, 0.0)),
    ("crack_tip", (0.0, 0.5)),
    ("planar_interface", (0.0, 0.0)),
    ("planar_interface", (0.0, 0.3)),
    ("propeller", (0.0, 0.0)),
])
def test_full_scans_at_more_centers(models, scan_spec, name, x0):
    report = scan(models[name], Point2(*x0), radius_grid(0.05, 50.0, 400), scan_spec)
    assert report.verdict, (name, x0)
    assert report.differential_verdict, (name, x0)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["crack_tip", "planar_interface", "propeller"])
def test_density_lower_bound_at_singular_points(models, scan_spec, name):
    model = models[name]
    x0 = model.reference_point()
    for r in radius_grid(0.05, 20.0, 200):
        disk = DiskProbe(x0, float(r))
        assert energy_density(model, disk) >= 2.0 - 1e-8
        assert radial_slice_bound(model, disk, scan_spec) >= -1e-8


def test_case_selection(crack_tip, scan_spec):
    one = probe(crack_tip, DiskProbe(Point2(0.2, 0.1), 1.0), scan_spec)
    two = probe(crack_tip, DiskProbe(Point2(1.0, 0.3), 0.5), scan_spec)
    none = probe(crack_tip, DiskProbe(Point2(1.0, 1.0), 0.5), scan_spec)
    assert [crossing_case(r) for r in (one, two, none)] == ["one_crossing", "two_crossings", "no_crossing"]
    assert all(case_estimates(r).passed for r in (one, two, none))


# =========================
# Classification, scaling, sharpness
# =========================
@pytest.mark.parametrize("name, x0, label", [
    ("crack_tip", (0.0, 0.0), "singular"),
    ("crack_tip", (1.0, 1.0), "regular"),
    ("planar_interface", (0.3, 0.0), "interface"),
    ("propeller", (0.0, 0.0), "singular"),
    ("smooth_quadratic", (0.2, 0.1), "regular"),
])
def test_classify_point(models, name, x0, label):
    assert classify_point(models[name], Point2(*x0)).label == label


def test_crack_tip_scale_covariance(crack_tip):
    assert scale_check(crack_tip, Point2(1.0, 0.5), 0.7) < 1e-7


def test_sharpness(spec):
    rows = sharpness_scan([0.0, 0.01, 0.1], spec=spec)
    assert rows[0].F == pytest.approx(1.5, rel=1e-9)
    assert math.isnan(rows[0].slope)
    for row in rows[1:]:
        assert row.F > 1.5
        assert row.F == pytest.approx(row.F_closed, rel=1e-8)
    assert rows[1].slope == pytest.approx(0.4975, abs=5e-3)
    assert rows[2].F_closed == pytest.approx(1.547495, abs=1e-6)
    with pytest.raises(ValueError):
        sharpness_scan([0.5])


# =========================
# Equilibrium equation
# =========================
def test_bump_profile():
    bump = BumpField(Point2(1.0, 1.0), 0.5, UnitVector(1.0, 0.0), 2.0)
    assert bump.profile(np.array([[1.0, 1.0], [2.0, 2.0]])) == pytest.approx([2.0, 0.0])
    with pytest.raises(ValueError):
        BumpField(Point2(0.0, 0.0), 0.0, UnitVector(1.0, 0.0))


def test_equilibrium_for_interface_and_propeller(models, spec):
    bump = BumpField(Point2(0.1, -0.2), 1.0, UnitVector.from_angle(0.4))
    for name in ("planar_interface", "propeller", "smooth_quadratic"):
        assert equilibrium_residual(models[name], bump, spec) == pytest.approx(0.0, abs=1e-10), name


def test_equilibrium_for_crack_tip_bumps_over_the_tip(crack_tip, spec):
    bump = BumpField(Point2(0.2, 0.3), 1.0, UnitVector(1.0, 0.0))
    bulk, jump = equilibrium_terms(crack_tip, bump, spec)
    assert abs(jump) > 0.1
    assert bulk == pytest.approx(jump, abs=1e-8)


def test_equilibrium_random_bumps(models, spec, rng):
    for name in ("crack_tip", "propeller"):
        for bump in random_bumps(models[name], 5, rng):
            assert abs(equilibrium_residual(models[name], bump, spec)) < 1e-7, (name, bump)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["crack_tip", "planar_interface"])
def test_equilibrium_twenty_random_bumps(models, spec, rng, name):
    bumps = random_bumps(models[name], 20, rng)
    assert len(bumps) == 20
    for bump in bumps:
        assert abs(equilibrium_residual(models[name], bump, spec)) < 1e-6, bump
