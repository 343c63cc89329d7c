"""Equations-of-motion tests against independent brute-force oracles.

The oracles below re-transcribe the force law with plain Python loops
and never call into the dynamics module, so agreement is a real
cross-check rather than a tautology.
"""

import numpy as np
import pytest

from curvednbody import (
    HYPERBOLIC,
    SPHERE,
    ConstraintViolationError,
    ManifoldPoint,
    SingularityError,
    SystemState,
    TangentVector,
    acceleration,
    angular_momentum,
    complementary_six_body,
    energy,
    force_function,
    gravitational_field,
    kinetic_energy,
    lagrangian_elliptic,
    pair_denominator,
    random_rotation,
    residual,
)

ALPHA, BETA = 1.0, np.sqrt(2.0)


def brute_field(masses, positions, sigma, test):
    """Plain-loop gravitational field at a test point."""
    out = [0.0, 0.0, 0.0, 0.0]
    for m, q in zip(masses, positions):
        dot = q[0] * test[0] + q[1] * test[1] + q[2] * test[2] + sigma * q[3] * test[3]
        denom = (sigma - sigma * dot * dot) ** 1.5
        for k in range(4):
            out[k] += m * (q[k] - sigma * dot * test[k]) / denom
    return np.array(out)


def brute_force_function(masses, positions, sigma):
    # pairwise cot/coth of the mutual distances, via the signed product
    total = 0.0
    n = len(masses)
    for i in range(n):
        for j in range(i + 1, n):
            qi, qj = positions[i], positions[j]
            dot = qi[0] * qj[0] + qi[1] * qj[1] + qi[2] * qj[2] + sigma * qi[3] * qj[3]
            total += sigma * masses[i] * masses[j] * dot / (sigma - sigma * dot * dot) ** 0.5
    return total


def six_body():
    return complementary_six_body(1.0, ALPHA, BETA)


def lagrangian_half():
    return lagrangian_elliptic(1.0, 0.5, np.sqrt(3.0) / 2.0, 0.0)


def test_pair_denominator_values():
    assert abs(pair_denominator((1, 0, 0, 0), (0, 0, 1, 0), SPHERE) - 1.0) <= 1e-15
    # equilateral neighbours on a great circle: dot = -1/2
    a = np.array([1.0, 0.0, 0.0, 0.0])
    b = np.array([-0.5, np.sqrt(3.0) / 2.0, 0.0, 0.0])
    assert abs(pair_denominator(a, b, SPHERE) - 0.75**1.5) <= 1e-15
    assert abs(0.75**1.5 - 0.6495190528383290) <= 1e-15


def test_pair_denominator_singularities():
    a = np.array([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(SingularityError) as exc:
        pair_denominator(a, a, SPHERE)
    assert exc.value.kind == "collision"
    with pytest.raises(SingularityError) as exc:
        pair_denominator(a, -a, SPHERE)
    assert exc.value.kind == "antipodal"
    # threshold sits on the bracket, before the 3/2 power
    eps = 4e-14
    near = np.array([np.sqrt(1.0 - eps), np.sqrt(eps), 0.0, 0.0])
    with pytest.raises(SingularityError):
        pair_denominator(a, near, SPHERE)


def test_acceleration_matches_analytic_six_body():
    fam = six_body()
    for t in (0.0, 0.37, 1.9, 6.0):
        state = fam.state_at(t)
        acc = acceleration(state)
        # independent closed-form second derivative of the trajectories
        expected = np.empty((6, 4))
        for i in range(3):
            phase = ALPHA * t + 2.0 * np.pi * i / 3.0
            expected[i] = -(ALPHA**2) * np.array([np.cos(phase), np.sin(phase), 0.0, 0.0])
        for i in range(3):
            phase = BETA * t + 2.0 * np.pi * i / 3.0
            expected[3 + i] = -(BETA**2) * np.array([0.0, 0.0, np.cos(phase), np.sin(phase)])
        assert np.max(np.abs(acc - expected)) <= 1e-12


def test_acceleration_single_body_is_constraint_term():
    omega = 0.8
    p = ManifoldPoint(np.array([1.0, 0.0, 0.0, 0.0]), SPHERE)
    v = TangentVector(p, np.array([0.0, omega, 0.0, 0.0]))
    state = SystemState.from_bodies([(1.0, p, v)])
    acc = acceleration(state)
    assert np.max(np.abs(acc[0] + omega**2 * p.coords)) <= 1e-15


def test_acceleration_lagrangian_is_planar_spin():
    fam = lagrangian_half()
    omega = fam.params.omega
    for t in (0.0, 0.4, 1.3):
        state = fam.state_at(t)
        acc = acceleration(state)
        q = state.positions
        expected = -(omega**2) * np.column_stack([q[:, 0], q[:, 1], np.zeros(3), np.zeros(3)])
        assert np.max(np.abs(acc - expected)) <= 1e-12


def test_gravity_is_tangent():
    fam = six_body()
    state = fam.state_at(0.83)
    acc = acceleration(state)
    vv = np.einsum("ij,ij->i", state.velocities, state.velocities)
    gravity = acc + vv[:, None] * state.positions
    tangency = np.einsum("ij,ij->i", state.positions, gravity)
    assert np.max(np.abs(tangency)) <= 1e-12


def test_field_on_lagrangian_circle_axis_points_only():
    # The circle {w=x=0} is equidistant from the triangle, but the field
    # on it vanishes only at the two axis points +-(0,0,y,z)/|(y,z)|;
    # generic circle points feel a force tangent to the circle.
    fam = lagrangian_half()
    state = fam.state_at(0.0)
    for y0, z0, expect_zero in ((1.0, 0.0, True), (-1.0, 0.0, True), (0.0, 1.0, False), (0.6, 0.8, False)):
        p = ManifoldPoint(np.array([0.0, 0.0, y0, z0]), SPHERE)
        f = gravitational_field(state, p).coords
        oracle = brute_field(state.masses, state.positions, SPHERE, p.coords)
        assert np.max(np.abs(f - oracle)) <= 1e-13
        if expect_zero:
            assert np.linalg.norm(f) <= 1e-12
        else:
            assert np.linalg.norm(f) > 1e-2


def test_field_single_body_orthogonal():
    p = ManifoldPoint(np.array([1.0, 0.0, 0.0, 0.0]), SPHERE)
    v = TangentVector(p, np.zeros(4))
    state = SystemState.from_bodies([(2.5, p, v)])
    test = ManifoldPoint(np.array([0.0, 0.0, 1.0, 0.0]), SPHERE)
    f = gravitational_field(state, test)
    assert np.max(np.abs(f.coords - 2.5 * p.coords)) <= 1e-15


def test_field_matches_brute_force_on_random_points():
    fam = six_body()
    state = fam.state_at(0.51)
    rng = np.random.default_rng(29)
    for _ in range(20):
        v = rng.standard_normal(4)
        p = ManifoldPoint(v, SPHERE)
        f = gravitational_field(state, p).coords
        oracle = brute_field(state.masses, state.positions, SPHERE, p.coords)
        assert np.max(np.abs(f - oracle)) <= 1e-12 * max(1.0, np.max(np.abs(oracle)))


def test_field_at_body_location_raises():
    fam = six_body()
    state = fam.state_at(0.0)
    with pytest.raises(SingularityError) as exc:
        gravitational_field(state, ManifoldPoint(state.positions[2], SPHERE))
    assert exc.value.kind == "collision"
    with pytest.raises(SingularityError) as exc:
        gravitational_field(state, ManifoldPoint(-state.positions[2], SPHERE))
    assert exc.value.kind == "antipodal"


def test_force_function_six_body_value():
    fam = six_body()
    state = fam.state_at(0.0)
    u = force_function(state)
    oracle = brute_force_function(state.masses, state.positions, SPHERE)
    assert abs(u - oracle) <= 1e-13
    # six same-circle pairs at dot -1/2 (cot of the mutual distance,
    # -1/sqrt(3) each), nine cross pairs at dot 0
    assert abs(u - 6.0 * (-0.5) / 0.75**0.5) <= 1e-12
    assert abs(u + 2.0 * np.sqrt(3.0)) <= 1e-12


def test_energy_is_conserved_on_a_falling_orbit():
    # a non-equilibrium orbit exercises the radial dependence of U,
    # which relative equilibria (constant mutual distances) never probe
    p1 = ManifoldPoint(np.array([1.0, 0.0, 0.0, 0.0]), SPHERE)
    p2 = ManifoldPoint(np.array([0.0, 0.0, 1.0, 0.0]), SPHERE)
    state = SystemState.from_bodies(
        [(1.0, p1, TangentVector(p1, np.zeros(4))), (1.0, p2, TangentVector(p2, np.zeros(4)))]
    )
    from curvednbody import IntegratorConfig, integrate

    rec = integrate(state, 0.5, IntegratorConfig(step=1e-3), sampling=0.05)
    e = rec.energies()
    assert np.max(np.abs(e - e[0])) <= 1e-10


def test_force_function_orthogonal_pair_vanishes():
    p1 = ManifoldPoint(np.array([1.0, 0.0, 0.0, 0.0]), SPHERE)
    p2 = ManifoldPoint(np.array([0.0, 0.0, 1.0, 0.0]), SPHERE)
    state = SystemState.from_bodies(
        [(1.0, p1, TangentVector(p1, np.zeros(4))), (1.0, p2, TangentVector(p2, np.zeros(4)))]
    )
    assert force_function(state) == 0.0
    assert kinetic_energy(state) == 0.0
    assert energy(state) == 0.0


def test_u_and_t_invariant_under_simultaneous_rotation():
    fam = six_body()
    state = fam.state_at(0.42)
    u0, t0 = force_function(state), kinetic_energy(state)
    rng = np.random.default_rng(31)
    for _ in range(10):
        rot = random_rotation(rng)
        rotated = SystemState(
            state.masses,
            state.positions @ rot.T,
            state.velocities @ rot.T,
            SPHERE,
            state.time,
        )
        assert abs(force_function(rotated) - u0) <= 1e-10
        assert abs(kinetic_energy(rotated) - t0) <= 1e-10


def test_kinetic_energy_values():
    fam = six_body()
    assert abs(kinetic_energy(fam.state_at(0.7)) - 1.5 * (ALPHA**2 + BETA**2)) <= 1e-12
    assert abs(kinetic_energy(fam.state_at(0.7)) - 4.5) <= 1e-12
    lag = lagrangian_half()
    expected = 1.5 * 1.0 * 0.25 * lag.params.omega**2
    assert abs(kinetic_energy(lag.state_at(1.1)) - expected) <= 1e-12


def test_angular_momentum_six_body():
    fam = six_body()
    c = angular_momentum(fam.state_at(0.0))
    expected = np.array([3.0 * ALPHA, 0.0, 0.0, 0.0, 0.0, 3.0 * BETA])
    assert np.max(np.abs(c - expected)) <= 1e-12


def test_angular_momentum_zero_velocities_and_time_reversal():
    fam = six_body()
    state = fam.state_at(0.9)
    frozen = SystemState(state.masses, state.positions, np.zeros_like(state.velocities), SPHERE)
    assert np.max(np.abs(angular_momentum(frozen))) == 0.0
    reversed_state = SystemState(state.masses, state.positions, -state.velocities, SPHERE)
    assert np.max(np.abs(angular_momentum(reversed_state) + angular_momentum(state))) <= 1e-15


def test_conserved_along_analytic_families():
    for fam in (six_body(), lagrangian_half()):
        times = np.linspace(0.0, 10.0, 100)
        h0 = energy(fam.state_at(0.0))
        c0 = angular_momentum(fam.state_at(0.0))
        for t in times:
            s = fam.state_at(float(t))
            assert abs(energy(s) - h0) <= 1e-10
            assert np.max(np.abs(angular_momentum(s) - c0)) <= 1e-10


def test_residual_detects_wrong_frequency():
    fam = six_body()
    for t in (0.0, 0.5, 3.2):
        assert residual(fam, t) <= 1e-10
    lag = lagrangian_half()
    assert max(residual(lag, t) for t in np.linspace(0, 1, 11)) <= 1e-10

    from curvednbody.families import _lagrangian_raw

    p = lag.params
    bad = _lagrangian_raw(p.m, p.r, p.y, p.z, p.omega * 1.1)
    assert max(residual(bad, t) for t in np.linspace(0, 1, 11)) > 1e-3


def test_system_state_validation():
    p1 = ManifoldPoint(np.array([1.0, 0.0, 0.0, 0.0]), SPHERE)
    with pytest.raises(ConstraintViolationError):
        SystemState(np.array([-1.0]), p1.coords[None, :], np.zeros((1, 4)), SPHERE)
    with pytest.raises(ConstraintViolationError):
        SystemState(np.array([1.0]), p1.coords[None, :], np.array([[1.0, 0, 0, 0]]), SPHERE)
    # collisional pair rejected at construction
    with pytest.raises(SingularityError):
        SystemState(
            np.ones(2),
            np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]]),
            np.zeros((2, 4)),
            SPHERE,
        )
    assert six_body().state_at(0.0).total_mass == 6.0


def test_hyperbolic_field_matches_brute_force():
    q1 = ManifoldPoint(np.array([0.0, 0.0, 0.0, 1.0]), HYPERBOLIC)
    q2 = ManifoldPoint(np.array([0.0, 0.8, 0.0, np.sqrt(1.64)]), HYPERBOLIC)
    state = SystemState.from_bodies(
        [(1.0, q1, TangentVector(q1, np.zeros(4))), (1.5, q2, TangentVector(q2, np.zeros(4)))]
    )
    test = ManifoldPoint(np.array([0.3, -0.2, 0.5, np.sqrt(1.38)]), HYPERBOLIC)
    f = gravitational_field(state, test).coords
    oracle = brute_field(state.masses, state.positions, HYPERBOLIC, test.coords)
    assert np.max(np.abs(f - oracle)) <= 1e-12
    # the field at a body's own position is singular, never returned
    with pytest.raises(SingularityError):
        gravitational_field(state, q1)


def test_bodies_accessor_round_trip():
    fam = six_body()
    state = fam.state_at(0.3)
    rebuilt = SystemState.from_bodies(state.bodies, time=state.time)
    assert np.max(np.abs(rebuilt.positions - state.positions)) <= 1e-12
    assert np.max(np.abs(rebuilt.velocities - state.velocities)) <= 1e-12
