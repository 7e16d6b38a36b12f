import math

import numpy as np
import pytest

from ms_monotonicity.diagnostics import circle_terms, dirichlet_energy, entropy
from ms_monotonicity.errors import AtSingularPoint, OnJumpSet
from ms_monotonicity.geometry import (
    SQRT_2_OVER_PI,
    DiskProbe,
    JumpSet,
    Line,
    PlanarInterface,
    Point2,
    Propeller,
    SmoothHarmonic,
    Segment,
    UnitVector,
    circle_crossings,
    coarea_two_sides,
    crack_tip_circle_dirichlet,
    eval_gradient,
    eval_value,
    jump_length_in_disk,
    rotated,
)

EXACT_OFFSET_DIRICHLET = 0.997495


def test_value_objects_reject_bad_input():
    with pytest.raises(ValueError):
        Point2(math.nan, 0.0)
    with pytest.raises(ValueError):
        UnitVector(1.0, 1.0)
    with pytest.raises(ValueError):
        DiskProbe(Point2(0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 1.0)
    with pytest.raises(ValueError):
        Propeller(Point2(0.0, 0.0), 0.0, (0.0, 1.0, 1.0))


def test_perp_rotates_counterclockwise():
    e = UnitVector(1.0, 0.0)
    assert e.perp == UnitVector(-0.0, 1.0)


def test_jump_curves_may_meet_only_at_one_junction():
    with pytest.raises(ValueError):
        JumpSet((Line(Point2(0.0, 0.0), UnitVector(1.0, 0.0)),
                 Line(Point2(0.0, 1.0), UnitVector(0.0, 1.0)),
                 Line(Point2(1.0, 0.0), UnitVector(0.0, 1.0))))


def test_crack_tip_one_sided_values(crack_tip):
    p = Point2(1.0, 0.0)
    assert eval_value(crack_tip, p, side=1) == pytest.approx(SQRT_2_OVER_PI)
    assert eval_value(crack_tip, p, side=-1) == pytest.approx(-SQRT_2_OVER_PI)
    assert eval_value(crack_tip, Point2(-4.0, 0.0)) == pytest.approx(0.0, abs=1e-15)


def test_planar_interface_sides():
    model = PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 3.0, -1.0)
    assert eval_value(model, Point2(0.5, 0.0), side=1) == 3.0
    assert eval_value(model, Point2(0.5, 0.0), side=-1) == -1.0
    assert eval_value(model, Point2(0.5, -2.0)) == -1.0


def test_propeller_sides():
    model = Propeller(Point2(0.0, 0.0), 0.0, (0.0, 1.0, 2.0))
    assert eval_value(model, Point2(1.0, 0.0), side=1) == 0.0
    assert eval_value(model, Point2(1.0, 0.0), side=-1) == 2.0
    assert eval_value(model, Point2(-1.0, 0.1)) == 1.0


def test_crack_tip_gradient_magnitude(crack_tip):
    gx, gy = eval_gradient(crack_tip, Point2(0.0, 2.0))
    assert gx * gx + gy * gy == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-14)


def test_crack_tip_gradient_magnitude_at_random_points(crack_tip, rng):
    rho = rng.uniform(1e-3, 10.0, 1000)
    phi = rng.uniform(-math.pi + 1e-3, math.pi - 1e-3, 1000) + math.pi
    xy = np.stack([rho * np.cos(phi), rho * np.sin(phi)], axis=-1)
    g = crack_tip.gradient_array(xy)
    assert np.allclose(np.einsum("ij,ij->i", g, g) * 2.0 * math.pi * rho, 1.0, rtol=1e-12, atol=0.0)


def test_gradient_undefined_on_jump_and_at_tip(crack_tip):
    with pytest.raises(OnJumpSet):
        eval_gradient(crack_tip, Point2(1.0, 0.0))
    with pytest.raises(AtSingularPoint):
        eval_gradient(crack_tip, Point2(0.0, 0.0))


def test_smooth_harmonic_gradient_matches_finite_difference():
    model = SmoothHarmonic(Point2(0.2, -0.1), ((0.5, 0.0), (1.0, -0.5), (0.3, 0.7), (0.0, 0.2)))
    p = np.array([0.4, 0.3])
    h = 1e-6
    fd = [(model.value_array(p + h * e)[0] - model.value_array(p - h * e)[0]) / (2 * h)
          for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0]))]
    assert model.gradient_array(p)[0] == pytest.approx(fd, rel=1e-7)


def test_crossing_of_offset_circle(crack_tip):
    crossings = circle_crossings(crack_tip.jump_set(), DiskProbe(Point2(0.0, 0.5), 1.0))
    assert len(crossings) == 1
    c = crossings[0]
    assert c.point.x == pytest.approx(math.sqrt(0.75))
    assert c.nu_dot_t == pytest.approx(math.sqrt(0.75))
    assert c.transversal


def test_interface_crossings_sorted_by_angle(unit_disk):
    model = PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 0.0)
    crossings = circle_crossings(model.jump_set(), unit_disk)
    assert [c.angle for c in crossings] == pytest.approx([0.0, math.pi])
    assert all(c.nu_dot_t == pytest.approx(1.0) for c in crossings)


def test_tangential_contact_is_flagged():
    model = PlanarInterface(Point2(0.0, 0.0), UnitVector(0.0, 1.0), 1.0, 0.0)
    crossings = circle_crossings(model.jump_set(), DiskProbe(Point2(0.0, 1.0), 1.0))
    assert len(crossings) == 1
    assert not crossings[0].transversal


def test_jump_length_in_disk(crack_tip):
    assert jump_length_in_disk(crack_tip.jump_set(), DiskProbe(Point2(0.0, 0.0), 2.0)) == pytest.approx(2.0)
    assert jump_length_in_disk(crack_tip.jump_set(), DiskProbe(Point2(1.0, 0.0), 2.0)) == pytest.approx(3.0)
    propeller = Propeller()
    assert jump_length_in_disk(propeller.jump_set(), DiskProbe(Point2(0.0, 0.0), 1.0)) == pytest.approx(3.0)


def test_crack_tip_dirichlet_closed_forms(crack_tip):
    assert crack_tip.dirichlet_energy(DiskProbe(Point2(0.0, 0.0), 1.0)) == pytest.approx(1.0, rel=1e-15)
    offset = DiskProbe(Point2(0.1, 0.0), 1.0)
    assert crack_tip.dirichlet_energy(offset) == pytest.approx(EXACT_OFFSET_DIRICHLET, abs=1e-6)


@pytest.mark.parametrize("center, r", [((0.1, 0.0), 1.0), ((0.5, 0.5), 1.0), ((2.0, 1.0), 0.5), ((0.0, -3.0), 2.9)])
def test_crack_tip_quadrature_matches_closed_form(crack_tip, spec, center, r):
    disk = DiskProbe(Point2(*center), r)
    closed = dirichlet_energy(crack_tip, disk, method="closed")
    quad = dirichlet_energy(crack_tip, disk, spec, method="quadrature")
    assert quad == pytest.approx(closed, rel=1e-8)


def test_smooth_dirichlet_closed_forms(models):
    disk = DiskProbe(Point2(0.0, 0.0), 2.0)
    assert models["smooth_linear"].dirichlet_energy(disk) == pytest.approx(4.0 * math.pi)
    # u = 2xy
    assert models["smooth_quadratic"].dirichlet_energy(disk) == pytest.approx(2.0 * math.pi * 16.0)
    shifted = DiskProbe(Point2(1.0, 0.0), 1.0)
    assert models["smooth_quadratic"].dirichlet_energy(shifted) == pytest.approx(6.0 * math.pi)


def test_smooth_dirichlet_matches_quadrature(spec):
    model = SmoothHarmonic(Point2(0.2, -0.1), ((0.5, 0.0), (1.0, -0.5), (0.3, 0.7), (0.0, 0.2)))
    disk = DiskProbe(Point2(-0.3, 0.4), 0.8)
    assert dirichlet_energy(model, disk, spec, method="quadrature") == pytest.approx(
        model.dirichlet_energy(disk), rel=1e-10)


def test_circle_dirichlet_closed_form(crack_tip, spec):
    assert crack_tip_circle_dirichlet(crack_tip, DiskProbe(Point2(0.0, 0.0), 3.0)) == pytest.approx(1.0)
    disk = DiskProbe(Point2(0.5, 0.3), 1.0)
    assert circle_terms(crack_tip, disk, spec).dirichlet == pytest.approx(
        crack_tip_circle_dirichlet(crack_tip, disk), rel=1e-8)


def test_rotation_covariance(models):
    disk = DiskProbe(Point2(0.4, 0.3), 0.9)
    theta = 0.7
    c, s = math.cos(theta), math.sin(theta)
    turned = DiskProbe(Point2(c * 0.4 - s * 0.3, s * 0.4 + c * 0.3), 0.9)
    for name, model in models.items():
        assert entropy(rotated(model, theta), turned) == pytest.approx(entropy(model, disk), rel=1e-12), name


def test_gradient_rotation_covariance(models, rng):
    theta = 1.1
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    rho = rng.uniform(0.2, 2.0, 400)
    phi = rng.uniform(0.0, 2.0 * math.pi, 400)
    xy = np.stack([rho * np.cos(phi), rho * np.sin(phi)], axis=-1)
    for name, model in models.items():
        jumps = model.jump_set()
        keep = np.array([jumps.distance_to(Point2(*p)) > 1e-3 for p in xy])
        pts = xy[keep]
        turned = rotated(model, theta).gradient_array(pts @ rot.T)
        assert np.allclose(turned, model.gradient_array(pts) @ rot.T, rtol=1e-12, atol=1e-12), name


def test_catalog_singular_points(models):
    assert models["crack_tip"].singular_points() == (Point2(0.0, 0.0),)
    assert models["propeller"].singular_points() == (Point2(0.0, 0.0),)
    assert models["planar_interface"].singular_points() == ()
    assert len(models["smooth_linear"].jump_set()) == 0


def test_propeller_jump_directions(models):
    angles = models["propeller"].jump_directions_from(Point2(0.0, 0.0))
    assert angles == pytest.approx([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])


def test_coarea_two_sides_interface():
    jumps = JumpSet((Line(Point2(0.0, 0.0), UnitVector(1.0, 0.0)),))
    length, integral = coarea_two_sides(jumps, Point2(0.0, 0.0), 1.0)
    assert length == pytest.approx(2.0)
    assert integral == pytest.approx(2.0, rel=1e-10)


def test_coarea_two_sides_across_tangency(crack_tip):
    # the ray's foot point from (0.5, 0.5) is at distance 0.5
    length, integral = coarea_two_sides(crack_tip.jump_set(), Point2(0.5, 0.5), 2.0)
    assert integral == pytest.approx(length, rel=1e-7)


def test_segment_clipping():
    with pytest.raises(ValueError):
        Segment(Point2(1.0, 1.0), Point2(1.0, 1.0))
    jumps = JumpSet((Segment(Point2(-0.5, 0.0), Point2(3.0, 0.0)),))
    assert jump_length_in_disk(jumps, DiskProbe(Point2(0.0, 0.0), 1.0)) == pytest.approx(1.5)
    assert len(circle_crossings(jumps, DiskProbe(Point2(0.0, 0.0), 1.0))) == 1
