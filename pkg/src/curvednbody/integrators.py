"""Fixed-step integration of the constrained equations of motion.

The equations already contain the constraint force analytically, so a
plain one-step method stays near the manifold; projection after every
step (renormalize each position, tangent-project each velocity) only
cleans up round-off and truncation drift. Two methods are provided:

* ``rk4``: classical Runge-Kutta, order 4. The default.
* ``symmetric``: implicit midpoint (solved by fixed-point iteration),
  time-symmetric, better drift behaviour on long runs.

Steps are fixed; all target experiments are desk-scale with smooth
known solutions, and adaptivity would only add failure modes. Per-step
summation over bodies runs in ascending index order, so repeated runs
are bit-identical.

Constraint residuals (the drift checked against ``max_constraint_drift``
before projection and against ``projection_tolerance`` after) are
measured relative to the Euclidean size of the coordinates: on the unit
sphere that is the plain absolute residual, while on the hyperboloid it
stays meaningful once cosh-grown coordinates push absolute residuals
below evaluation round-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import SystemState, accelerations_raw, conserved_quantities, constraint_defects
from .errors import SingularityError, StepRejectionError, ValidationError

METHODS = ("rk4", "symmetric")

MIDPOINT_MAX_ITERATIONS = 64
MIDPOINT_TOLERANCE = 2e-15


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    step: float = 1e-3
    projection_tolerance: float = 1e-12
    max_constraint_drift: float = 1e-6

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(
                f"unknown method {self.method!r}, expected one of {METHODS}", field="method"
            )
        if self.step <= 0:
            raise ValidationError("step must be positive", field="step")
        if self.projection_tolerance <= 0:
            raise ValidationError(
                "projection_tolerance must be positive", field="projection_tolerance"
            )
        if self.max_constraint_drift <= 0:
            raise ValidationError(
                "max_constraint_drift must be positive", field="max_constraint_drift"
            )


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Sampled output of one integration run."""

    times: np.ndarray
    states: list
    conserved: list
    constraint_drift: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        d = np.asarray(self.constraint_drift, dtype=float)
        if not (len(t) == len(self.states) == len(self.conserved) == len(d)):
            raise ValidationError("trajectory record fields must have equal lengths")
        if len(t) > 1 and np.any(np.diff(t) <= 0):
            raise ValidationError("trajectory times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "constraint_drift", d)

    @property
    def final_state(self) -> SystemState:
        return self.states[-1]

    def energies(self) -> np.ndarray:
        return np.array([c.energy for c in self.conserved])

    def angular_momenta(self) -> np.ndarray:
        return np.array([c.angular_momentum for c in self.conserved])


def _metric(sigma):
    return np.array([1.0, 1.0, 1.0, float(sigma)])


def _constraint_drift(q, v, sigma) -> float:
    defect_q, defect_v = constraint_defects(q, v, sigma)
    return max(defect_q, defect_v)


def _project(q, v, sigma):
    """Renormalize positions to the manifold and tangent-project
    velocities; returns new arrays."""
    g = _metric(sigma)
    qq = np.einsum("ij,ij->i", q, q * g)
    q = q / np.sqrt(sigma * qq)[:, None]
    qv = np.einsum("ij,ij->i", q, v * g)
    v = v - sigma * qv[:, None] * q
    return q, v


def _rk4_step(masses, q, v, sigma, h, t):
    def f(qq, vv):
        return vv, accelerations_raw(masses, qq, vv, sigma, time=t)

    k1q, k1v = f(q, v)
    k2q, k2v = f(q + 0.5 * h * k1q, v + 0.5 * h * k1v)
    k3q, k3v = f(q + 0.5 * h * k2q, v + 0.5 * h * k2v)
    k4q, k4v = f(q + h * k3q, v + h * k3v)
    qn = q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return qn, vn


def _midpoint_step(masses, q, v, sigma, h, t):
    # Implicit midpoint: y1 = y0 + h f((y0 + y1)/2), fixed-point iterated.
    a0 = accelerations_raw(masses, q, v, sigma, time=t)
    qn, vn = q + h * v, v + h * a0
    for _ in range(MIDPOINT_MAX_ITERATIONS):
        qm, vm = 0.5 * (q + qn), 0.5 * (v + vn)
        am = accelerations_raw(masses, qm, vm, sigma, time=t)
        q_next, v_next = q + h * vm, v + h * am
        delta = max(np.max(np.abs(q_next - qn)), np.max(np.abs(v_next - vn)))
        qn, vn = q_next, v_next
        if delta <= MIDPOINT_TOLERANCE:
            return qn, vn
    raise StepRejectionError(
        f"implicit midpoint failed to converge at t = {t:g}; reduce the step size"
    )


_STEPPERS = {"rk4": _rk4_step, "symmetric": _midpoint_step}


def _advance(masses, q, v, sigma, config, t):
    """One step plus projection on raw arrays; returns (q, v, drift)."""
    stepper = _STEPPERS[config.method]
    h = config.step
    try:
        qn, vn = stepper(masses, q, v, sigma, h, t)
    except SingularityError as exc:
        if exc.time is None:
            exc.time = t
        raise
    drift = _constraint_drift(qn, vn, sigma)
    if drift > config.max_constraint_drift:
        raise StepRejectionError(
            f"pre-projection constraint drift {drift:.3e} at t = {t + h:g} exceeds "
            f"max_constraint_drift = {config.max_constraint_drift:g}; use a smaller step"
        )
    qn, vn = _project(qn, vn, sigma)
    post = _constraint_drift(qn, vn, sigma)
    if post > config.projection_tolerance:
        raise StepRejectionError(
            f"post-projection constraint residual {post:.3e} exceeds "
            f"projection_tolerance = {config.projection_tolerance:g}"
        )
    return qn, vn, drift


def step(state: SystemState, config: IntegratorConfig) -> SystemState:
    """Advance one step and project back onto the constraint manifold."""
    q, v, _ = _advance(state.masses, state.positions, state.velocities, state.sigma, config, state.time)
    return SystemState(state.masses, q, v, state.sigma, state.time + config.step)


def integrate(
    state: SystemState, t_end: float, config: IntegratorConfig, sampling: float
) -> TrajectoryRecord:
    """Integrate to t_end, recording every ``sampling`` time units.

    The record holds states, energy, angular momentum, and the
    pre-projection constraint drift at each sample. On a singularity the
    partial trajectory is attached to the raised error.
    """
    if t_end <= state.time:
        raise ValidationError("t_end must exceed the initial time", field="t_end")
    if sampling <= 0:
        raise ValidationError("sampling cadence must be positive", field="sampling")
    h = config.step
    n_steps = max(1, int(round((t_end - state.time) / h)))
    record_every = max(1, int(round(sampling / h)))

    masses, sigma = state.masses, state.sigma
    q, v = state.positions.copy(), state.velocities.copy()
    t0 = state.time

    times = [state.time]
    states = [state]
    conserved = [conserved_quantities(state)]
    drifts = [0.0]

    def _partial():
        return TrajectoryRecord(np.array(times), states, conserved, np.array(drifts))

    step_drift = 0.0
    for k in range(1, n_steps + 1):
        t = t0 + (k - 1) * h
        try:
            q, v, step_drift = _advance(masses, q, v, sigma, config, t)
        except SingularityError as exc:
            exc.partial = _partial()
            raise
        if k % record_every == 0 or k == n_steps:
            s = SystemState(masses, q, v, sigma, t0 + k * h)
            times.append(s.time)
            states.append(s)
            conserved.append(conserved_quantities(s))
            drifts.append(step_drift)
    return _partial()


def reverse_state(state: SystemState) -> SystemState:
    """Time-reversed copy (velocities negated); integrating a reversible
    method forward from here retraces the original path."""
    return SystemState(state.masses, state.positions, -state.velocities, state.sigma, 0.0)
