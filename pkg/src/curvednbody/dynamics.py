"""Equations of motion on S3/H3 and their known first integrals.

The second-order system for body i reads

    q_i'' = sum_{j != i} m_j [q_j - sigma (q_i.q_j) q_i]
                         / [sigma - sigma (q_i.q_j)^2]^{3/2}
            - sigma (q_i'.q_i') q_i

with the signed product of :mod:`curvednbody.geometry` and the
constraints q_i.q_i = sigma, q_i.q_i' = 0. The first term is gravity
(tangent at q_i), the second enforces the constraints. Conserved along
solutions: the energy h = T - U and the six planar angular momenta
c_ab = sum_i m_i (a_i b_i' - b_i a_i').

There is no linear-momentum or centre-of-mass integral here, so no
"total force is zero" identity is available; invariance checks instead
use simultaneous rotations of all bodies (see the tests).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError, SingularityError
from .geometry import HYPERBOLIC, SPHERE, ManifoldPoint, TangentVector, inner

# Below this the bracket sigma - sigma (qi.qj)^2 is considered singular:
# the 3/2 power amplifies round-off past any useful accuracy.
SINGULARITY_THRESHOLD = 1e-13

# Constraint slack accepted when assembling a state from raw arrays.
STATE_TOLERANCE = 1e-9

ANGULAR_MOMENTUM_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
ANGULAR_MOMENTUM_LABELS = ("c_wx", "c_wy", "c_wz", "c_xy", "c_xz", "c_yz")


def _metric_diag(sigma: int) -> np.ndarray:
    return np.array([1.0, 1.0, 1.0, float(sigma)])


def pairwise_inners(positions: np.ndarray, sigma: int) -> np.ndarray:
    """All signed products q_i . q_j as an (N, N) matrix."""
    return positions @ (positions * _metric_diag(sigma)).T


def constraint_defects(positions, velocities, sigma) -> tuple[float, float]:
    """Worst manifold-membership and tangency defects over all bodies.

    Defects are measured relative to the Euclidean size of the
    coordinates (the round-off scale of evaluating the signed products);
    on the unit sphere this coincides with the plain absolute residual,
    while on the hyperboloid it stays meaningful when cosh-grown
    coordinates make absolute residuals unrepresentable.
    """
    g = _metric_diag(sigma)
    qq = np.einsum("ij,ij->i", positions, positions * g)
    qv = np.einsum("ij,ij->i", positions, velocities * g)
    scale_q = np.maximum(1.0, np.einsum("ij,ij->i", positions, positions))
    scale_v = np.maximum(
        1.0,
        np.sqrt(np.einsum("ij,ij->i", positions, positions))
        * np.sqrt(np.einsum("ij,ij->i", velocities, velocities)),
    )
    defect_q = float(np.max(np.abs(qq - sigma) / scale_q))
    defect_v = float(np.max(np.abs(qv) / scale_v))
    return defect_q, defect_v


@dataclass(frozen=True, eq=False)
class SystemState:
    """Full phase point: masses, positions (N,4), velocities (N,4),
    shared curvature sign, and time.

    Construction validates the constraints to STATE_TOLERANCE and
    rejects collisional or antipodal pairs. Arrays are copied and
    frozen; the total mass is a derived accessor, never cached.
    """

    masses: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    sigma: int = SPHERE
    time: float = 0.0

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.masses, dtype=float)).copy()
        q = np.asarray(self.positions, dtype=float).reshape(len(m), 4).copy()
        v = np.asarray(self.velocities, dtype=float).reshape(len(m), 4).copy()
        if np.any(m <= 0):
            raise ConstraintViolationError("masses must be positive", field="masses")
        defect_q, defect_v = constraint_defects(q, v, self.sigma)
        if defect_q > STATE_TOLERANCE:
            raise ConstraintViolationError(f"positions off the manifold by {defect_q:.3e}")
        if defect_v > STATE_TOLERANCE:
            raise ConstraintViolationError(f"velocities non-tangent by {defect_v:.3e}")
        if self.sigma == HYPERBOLIC and np.any(q[:, 3] <= 0):
            raise ConstraintViolationError("hyperbolic bodies must have z > 0")
        _check_nonsingular(q, self.sigma)
        for arr in (m, q, v):
            arr.flags.writeable = False
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", q)
        object.__setattr__(self, "velocities", v)
        object.__setattr__(self, "time", float(self.time))

    @property
    def n_bodies(self) -> int:
        return len(self.masses)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    @property
    def bodies(self):
        """Ordered (mass, ManifoldPoint, TangentVector) triples."""
        out = []
        for i in range(self.n_bodies):
            p = ManifoldPoint(self.positions[i], self.sigma)
            out.append((float(self.masses[i]), p, TangentVector(p, self.velocities[i])))
        return out

    @classmethod
    def from_bodies(cls, bodies, time: float = 0.0) -> "SystemState":
        """Build from (mass, ManifoldPoint, TangentVector) triples."""
        masses = [b[0] for b in bodies]
        sigmas = {b[1].sigma for b in bodies}
        if len(sigmas) != 1:
            raise ConstraintViolationError("all bodies must share one manifold (sigma)")
        q = np.array([b[1].coords for b in bodies])
        v = np.array([b[2].coords for b in bodies])
        return cls(np.array(masses), q, v, sigmas.pop(), time)


@dataclass(frozen=True)
class ConservedQuantities:
    """Energy h and the six wedge components of the angular momentum."""

    energy: float
    angular_momentum: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.angular_momentum, dtype=float).reshape(6).copy()
        c.flags.writeable = False
        object.__setattr__(self, "angular_momentum", c)
        object.__setattr__(self, "energy", float(self.energy))


def _classify_pair(dot: float, sigma: int) -> str:
    if sigma == SPHERE and dot < 0:
        return "antipodal"
    return "collision"


def _check_nonsingular(positions: np.ndarray, sigma: int, time: float | None = None) -> None:
    dots = pairwise_inners(positions, sigma)
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            bracket = sigma - sigma * dots[i, j] ** 2
            if bracket < SINGULARITY_THRESHOLD:
                kind = _classify_pair(dots[i, j], sigma)
                raise SingularityError(
                    f"bodies {i} and {j} are {kind} (q_i.q_j = {dots[i, j]:.15g})",
                    pair=(i, j),
                    kind=kind,
                    time=time,
                )


def pair_denominator(qi, qj, sigma: int) -> float:
    """[sigma - sigma (qi.qj)^2]^{3/2}, the force-law denominator.

    Raises SingularityError when the bracket drops below
    SINGULARITY_THRESHOLD, reporting whether the pair is collisional or
    (sphere only) antipodal.
    """
    dot = inner(qi, qj, sigma)
    bracket = sigma - sigma * dot * dot
    if bracket < SINGULARITY_THRESHOLD:
        kind = _classify_pair(dot, sigma)
        raise SingularityError(
            f"singular pair separation (q_i.q_j = {dot:.15g}, {kind})",
            pair=None,
            kind=kind,
        )
    return float(bracket**1.5)


def _gravity(masses, positions, sigma, time=None) -> np.ndarray:
    """Gravitational part of the acceleration for every body, (N,4).

    Summation over bodies runs in ascending index order so results are
    bit-reproducible.
    """
    n = len(masses)
    dots = pairwise_inners(positions, sigma)
    _check_nonsingular(positions, sigma, time)
    brackets = sigma - sigma * dots**2
    np.fill_diagonal(brackets, 1.0)
    weights = masses[None, :] / brackets**1.5  # w[i, j] = m_j / denom(i, j)
    np.fill_diagonal(weights, 0.0)
    acc = weights @ positions - sigma * np.sum(weights * dots, axis=1)[:, None] * positions
    return acc


def acceleration(state: SystemState) -> np.ndarray:
    """Right-hand side q'' of the equations of motion, one row per body."""
    return accelerations_raw(state.masses, state.positions, state.velocities, state.sigma)


def accelerations_raw(masses, positions, velocities, sigma, time=None) -> np.ndarray:
    """acceleration() on raw arrays; used by the integrators mid-step."""
    g = _metric_diag(sigma)
    vv = np.einsum("ij,ij->i", velocities, velocities * g)
    return _gravity(masses, positions, sigma, time) - sigma * vv[:, None] * positions


def gravitational_field(state: SystemState, test: ManifoldPoint) -> TangentVector:
    """Gravitational field of all bodies at a test point (tangent there).

    Raises SingularityError if the test point is collisional or
    antipodal with any body.
    """
    if test.sigma != state.sigma:
        raise ConstraintViolationError("test point must live on the system's manifold")
    g = _metric_diag(state.sigma)
    dots = state.positions @ (g * test.coords)
    brackets = state.sigma - state.sigma * dots**2
    for j, bracket in enumerate(brackets):
        if bracket < SINGULARITY_THRESHOLD:
            kind = _classify_pair(dots[j], state.sigma)
            raise SingularityError(
                f"test point is {kind} with body {j}",
                pair=(j, None),
                kind=kind,
                time=state.time,
            )
    weights = state.masses / brackets**1.5
    field = weights @ (state.positions - state.sigma * dots[:, None] * test.coords[None, :])
    return TangentVector(test, field)


def force_function(state: SystemState) -> float:
    """U(q) = sum_{i<j} sigma m_i m_j (q_i.q_j) / [sigma - sigma (q_i.q_j)^2]^{1/2};
    -U is the potential energy.

    Per pair this is cot(d_ij) on the sphere and coth(d_ij) on the
    hyperboloid. The tangent-projected gradient of this U is exactly the
    gravitational term of the equations of motion (the 3/2-power bracket
    there arises from differentiating the 1/2-power here), and T - U is
    the conserved energy; a 3/2 power in U itself is NOT a first
    integral away from relative equilibria.
    """
    dots = pairwise_inners(state.positions, state.sigma)
    _check_nonsingular(state.positions, state.sigma, state.time)
    total = 0.0
    n = state.n_bodies
    for i in range(n):
        for j in range(i + 1, n):
            bracket = state.sigma - state.sigma * dots[i, j] ** 2
            total += state.sigma * state.masses[i] * state.masses[j] * dots[i, j] / bracket**0.5
    return float(total)


def kinetic_energy(state: SystemState) -> float:
    """T = (1/2) sum m_i (v_i.v_i)(sigma q_i.q_i); on the constraint
    manifold the second factor is 1."""
    g = _metric_diag(state.sigma)
    vv = np.einsum("ij,ij->i", state.velocities, state.velocities * g)
    qq = np.einsum("ij,ij->i", state.positions, state.positions * g)
    return float(0.5 * np.sum(state.masses * vv * (state.sigma * qq)))


def energy(state: SystemState) -> float:
    """h = T - U, conserved along solutions."""
    return kinetic_energy(state) - force_function(state)


def angular_momentum(state: SystemState) -> np.ndarray:
    """The six wedge components (c_wx, c_wy, c_wz, c_xy, c_xz, c_yz),
    c_ab = sum_i m_i (a_i b_i' - b_i a_i')."""
    q, v, m = state.positions, state.velocities, state.masses
    out = np.empty(6)
    for k, (a, b) in enumerate(ANGULAR_MOMENTUM_PAIRS):
        out[k] = np.sum(m * (q[:, a] * v[:, b] - q[:, b] * v[:, a]))
    return out


def conserved_quantities(state: SystemState) -> ConservedQuantities:
    return ConservedQuantities(energy(state), angular_momentum(state))


def residual(family, t: float) -> float:
    """Max-norm defect of a closed-form orbit in the equations of motion
    at time t: ||q''_analytic - rhs(q, q')||_inf over all bodies.

    ``family`` must provide state_at(t) and acceleration_at(t); exact
    solutions give round-off-level values.
    """
    state = family.state_at(t)
    analytic = family.acceleration_at(t)
    rhs = acceleration(state)
    return float(np.max(np.abs(analytic - rhs)))
