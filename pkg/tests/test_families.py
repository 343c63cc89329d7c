"""Closed-form family constructors: parameter validation, frequency
laws, residual gates, and the centre-of-mass certifications."""

import math

import numpy as np
import pytest

from curvednbody import (
    HYPERBOLIC,
    ManifoldPoint,
    SPHERE,
    ValidationError,
    com_example_eulerian,
    com_examples_lagrangian,
    complementary_polygon_pair,
    complementary_six_body,
    distance,
    eulerian_hyperbolic,
    inner,
    lagrangian_circle_survey,
    lagrangian_elliptic,
    residual_profile,
    PolygonPairParams,
)
from curvednbody.families import _eulerian_raw, eulerian_beta_squared


def test_lagrangian_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        lagrangian_elliptic(1.0, 1.0, 0.0, 0.0)  # r must be interior
    with pytest.raises(ValidationError):
        lagrangian_elliptic(1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValidationError):
        lagrangian_elliptic(1.0, 0.5, 0.5, 0.0)  # r^2+y^2+z^2 != 1
    with pytest.raises(ValidationError):
        lagrangian_elliptic(-1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0)


def test_lagrangian_frequency_law():
    fam = lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0)
    # independent evaluation of the closed form at m=1, r=1/2
    expected_sq = 8.0 / (math.sqrt(3.0) * 0.125 * 3.25**1.5)
    assert abs(fam.params.omega**2 - expected_sq) <= 1e-12
    assert abs(expected_sq - 6.306585749861894) <= 1e-12
    assert np.max(residual_profile(fam)) <= 1e-10
    # both spin directions solve the equations
    fam_neg = lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0, sign=-1)
    assert np.max(residual_profile(fam_neg)) <= 1e-10


def test_lagrangian_mutual_distances_constant():
    fam = lagrangian_elliptic(1.0, 0.7, 0.0, np.sqrt(1.0 - 0.49))
    base = None
    for t in np.linspace(0.0, 3.0, 7):
        q = fam.positions_at(float(t))
        dots = sorted(
            inner(q[i], q[j], SPHERE) for i in range(3) for j in range(i + 1, 3)
        )
        if base is None:
            base = dots
        assert np.max(np.abs(np.array(dots) - base)) <= 1e-12
        assert abs(dots[0] - dots[2]) <= 1e-12  # equilateral


def test_eulerian_frequency_law_and_distances():
    eta = np.sqrt(2.0)
    fam = eulerian_hyperbolic(1.0, eta)
    assert abs(fam.params.x - 1.0) <= 1e-12
    assert abs(fam.params.beta**2 - 9.0 / (8.0 * np.sqrt(2.0))) <= 1e-12
    d12 = []
    for t in np.linspace(0.0, 4.0, 9):
        q = fam.positions_at(float(t))
        a = ManifoldPoint(q[0], HYPERBOLIC)
        b = ManifoldPoint(q[1], HYPERBOLIC)
        d12.append(distance(a, b))
    assert np.max(np.abs(np.array(d12) - d12[0])) <= 1e-10


def test_eulerian_rejects_eta_near_pole():
    with pytest.raises(ValidationError):
        eulerian_hyperbolic(1.0, 1.0 + 1e-7)


def test_eulerian_mass_scaling_selected_by_residual():
    fam = eulerian_hyperbolic(2.0, np.sqrt(2.0))
    assert fam.params.beta_variant == "m-scaled"
    assert fam.params.variant_residuals["m-scaled"] <= 1e-10
    assert fam.params.variant_residuals["literal"] > 1e-3
    assert abs(fam.params.beta**2 - 2.0 * eulerian_beta_squared(np.sqrt(2.0))) <= 1e-12


def test_eulerian_mirror_symmetry():
    fam = eulerian_hyperbolic(1.0, 1.8)
    for t in np.linspace(0.0, 2.0, 5):
        q = fam.positions_at(float(t))
        mirrored = q[2].copy()
        mirrored[1] = -mirrored[1]
        assert np.max(np.abs(q[1] - mirrored)) <= 1e-14


def test_six_body_fixed_point_configuration():
    fam = complementary_six_body(1.0, 1.0, np.sqrt(2.0))
    s3 = np.sqrt(3.0) / 2.0
    expected = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [-0.5, s3, 0.0, 0.0],
            [-0.5, -s3, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, -0.5, s3],
            [0.0, 0.0, -0.5, -s3],
        ]
    )
    assert np.max(np.abs(fam.positions_at(0.0) - expected)) <= 1e-15


def test_six_body_rejects_zero_frequency():
    with pytest.raises(ValidationError) as exc:
        complementary_six_body(1.0, 0.0, 1.0)
    assert exc.value.field == "alpha"
    with pytest.raises(ValidationError) as exc:
        complementary_six_body(1.0, 1.0, 0.0)
    assert exc.value.field == "beta"


def test_six_body_periodic_for_rational_ratio():
    # alpha/beta = 2/3 with beta = 1: common period 2*pi*3
    fam = complementary_six_body(1.0, 2.0 / 3.0, 1.0)
    period = 6.0 * np.pi
    for t in (0.0, 0.8, 2.5):
        dq = fam.positions_at(t + period) - fam.positions_at(t)
        dv = fam.velocities_at(t + period) - fam.velocities_at(t)
        assert np.max(np.abs(dq)) <= 1e-9
        assert np.max(np.abs(dv)) <= 1e-9


def test_polygon_pair_reduces_to_six_body():
    six = complementary_six_body(1.0, 1.0, np.sqrt(2.0))
    poly = complementary_polygon_pair(
        PolygonPairParams(n=3, m=3, mass=1.0, alpha=1.0, beta=np.sqrt(2.0))
    )
    for t in (0.0, 0.71, 2.2):
        assert np.max(np.abs(six.positions_at(t) - poly.positions_at(t))) <= 1e-15
        assert np.max(np.abs(six.velocities_at(t) - poly.velocities_at(t))) <= 1e-15


def test_polygon_pair_residuals():
    poly = complementary_polygon_pair(
        PolygonPairParams(n=5, m=3, mass=1.0, alpha=1.0, beta=1.0)
    )
    times = np.linspace(0.0, 1.0, 100)
    assert np.max(residual_profile(poly, times)) <= 1e-10


def test_polygon_pair_rejects_even_and_small():
    with pytest.raises(ValidationError) as exc:
        complementary_polygon_pair(PolygonPairParams(n=4, m=3, mass=1.0, alpha=1.0, beta=1.0))
    assert "antipod" in str(exc.value)
    with pytest.raises(ValidationError):
        complementary_polygon_pair(PolygonPairParams(n=3, m=6, mass=1.0, alpha=1.0, beta=1.0))
    with pytest.raises(ValidationError):
        complementary_polygon_pair(PolygonPairParams(n=1, m=3, mass=1.0, alpha=1.0, beta=1.0))
    with pytest.raises(ValidationError):
        complementary_polygon_pair(PolygonPairParams(n=3, m=3, mass=1.0, alpha=0.0, beta=1.0))


def test_polygon_phases_shift_configuration():
    shifted = complementary_polygon_pair(
        PolygonPairParams(n=3, m=3, mass=1.0, alpha=1.0, beta=1.0, phase_a=0.4, phase_b=-0.2)
    )
    q = shifted.positions_at(0.0)
    assert abs(q[0, 0] - np.cos(0.4)) <= 1e-15
    assert abs(q[3, 2] - np.cos(-0.2)) <= 1e-15
    assert np.max(residual_profile(shifted)) <= 1e-10


def test_com_examples_lagrangian_axis_points():
    # family with the triangle offset along y: axis points are (0,0,+-1,0)
    fam = lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0)
    points = com_examples_lagrangian(fam, n_samples=100)
    assert len(points) == 2
    coords = np.array(sorted([tuple(np.round(p.coords, 9)) for p in points]))
    assert np.allclose(np.abs(coords), [[0, 0, 1, 0], [0, 0, 1, 0]], atol=1e-9)

    # family offset along z instead: axis points move to (0,0,0,+-1)
    fam_z = lagrangian_elliptic(1.0, 0.5, 0.0, np.sqrt(3.0) / 2.0)
    points_z = com_examples_lagrangian(fam_z, n_samples=100)
    coords_z = np.array([np.abs(np.round(p.coords, 9)) for p in points_z])
    assert np.allclose(coords_z, [[0, 0, 0, 1], [0, 0, 0, 1]], atol=1e-9)


def test_lagrangian_circle_survey_equidistance_everywhere():
    fam = lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0)
    certs = lagrangian_circle_survey(fam, n_samples=64)
    assert len(certs) >= 64
    assert all(c.equidistant_ok for c in certs)
    p = fam.params
    for c in certs:
        y0, z0 = c.point.coords[2], c.point.coords[3]
        assert abs(c.equidistance_value - np.arccos(np.clip(y0 * p.y + z0 * p.z, -1, 1))) <= 1e-12
    # the field-vanishing half only holds on the axis pair
    assert sum(c.field_ok for c in certs) == 2
    assert all(c.field_ok == c.certified for c in certs)

    # axis off the sample grid (45 degrees, 60-point grid): appended
    tilted = lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0 / 8.0), np.sqrt(3.0 / 8.0))
    certs_t = lagrangian_circle_survey(tilted, n_samples=60)
    assert len(certs_t) == 62
    winners = [c for c in certs_t if c.certified]
    assert len(winners) == 2
    for c in winners:
        assert abs(abs(c.point.coords[2]) - np.sqrt(0.5)) <= 1e-12
        assert abs(abs(c.point.coords[3]) - np.sqrt(0.5)) <= 1e-12


def test_com_example_eulerian_certified_distances():
    eta = np.sqrt(2.0)
    fam = eulerian_hyperbolic(1.0, eta)
    traj = com_example_eulerian(fam, w_star=1.0, window=5.0, tol=1e-10)
    assert abs(traj.rho_star - np.sqrt(2.0)) <= 1e-15
    assert abs(traj.distance_to_body1 - math.acosh(np.sqrt(2.0))) <= 1e-14
    assert abs(traj.distance_to_outer - math.acosh(eta * np.sqrt(2.0))) <= 1e-14
    for t in np.linspace(0.0, 5.0, 11):
        p = traj.point_at(float(t))
        assert abs(inner(p.coords, p.coords, HYPERBOLIC) + 1.0) <= 1e-12
        expected = [traj.distance_to_body1, traj.distance_to_outer, traj.distance_to_outer]
        assert np.max(np.abs(traj.distances_at(float(t)) - expected)) <= 1e-10


def test_com_example_eulerian_coincides_with_body_at_zero():
    fam = eulerian_hyperbolic(1.0, 2.0)
    traj = com_example_eulerian(fam, w_star=0.0)
    for t in (0.0, 1.3):
        assert np.max(np.abs(traj.point_at(t).coords - fam.positions_at(t)[0])) <= 1e-12
    assert traj.distance_to_body1 == 0.0


def test_family_describe_is_json_friendly():
    import json

    fam = eulerian_hyperbolic(1.0, 1.5)
    text = json.dumps(fam.describe())
    assert "eulerian" in text and "beta_variant" in text
