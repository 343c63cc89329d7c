"""Closed-form orbit families and their construction-time validation.

Every family here is a relative equilibrium: each body moves on a fixed
2-plane orbit (circular on S3, hyperbolic-rotational on H3) so that all
mutual distances stay constant. Constructors substitute the candidate
trajectory into the equations of motion and refuse to return an object
whose residual exceeds RESIDUAL_TOLERANCE; hand-transcribed formulas do
not get the benefit of the doubt.

Families:

* Lagrangian elliptic: three equal masses at the vertices of an
  equilateral triangle of circumradius r in the wx-plane, offset to a
  constant (y, z), spinning at

      omega^2 = 8 m / (sqrt(3) r^3 (4 - 3 r^2)^{3/2}).

* Eulerian hyperbolic: three equal masses on a hyperbolically rotating
  geodesic of H3, the outer two at coordinate +-x = sqrt(eta^2 - 1).
  Residual validation selects the frequency scaling

      beta^2 = m (1 + 4 eta^2) / (4 eta^3 (eta^2 - 1)^{3/2});

  the variant without the mass factor fails for m != 1, and the
  constructor records both residuals.

* Complementary six-body and (N+M)-gon pairs: equal masses at regular
  polygons on the two complementary great circles {y=z=0} and {w=x=0},
  each spinning at an arbitrary nonzero rate. The net gravitational
  force on every body vanishes (odd polygons cancel within their own
  circle, and a centred regular polygon sums to zero across circles),
  so any frequency pair works; the constructor verifies this rather
  than assuming it. Odd N and M are required: even polygons contain
  antipodal pairs, which are singular.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import dynamics
from .errors import ValidationError
from .geometry import HYPERBOLIC, SPHERE, ManifoldPoint

RESIDUAL_TOLERANCE = 1e-10

# Times at which every constructor checks the equations of motion.
VALIDATION_TIMES = np.linspace(0.0, 1.0, 11)

# Frequency-law pole guard for the Eulerian family.
ETA_MIN = 1.0 + 1e-6


class FamilyKind(enum.Enum):
    LAGRANGIAN_ELLIPTIC = "lagrangian"
    EULERIAN_HYPERBOLIC = "eulerian"
    COMPLEMENTARY_SIX_BODY = "six_body"
    COMPLEMENTARY_POLYGON_PAIR = "polygon_pair"
    # Reserved for unequal-mass scalene generalizations; no constructor
    # is provided because no closed form is implemented for them.
    SCALENE_RESERVED = "scalene"


@dataclass(frozen=True)
class LagrangianParams:
    m: float
    r: float
    y: float
    z: float
    omega: float


@dataclass(frozen=True)
class EulerianParams:
    m: float
    eta: float
    x: float
    beta: float
    # Which frequency-mass scaling passed residual validation, plus the
    # measured residuals of both candidates.
    beta_variant: str = "m-scaled"
    variant_residuals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SixBodyParams:
    m: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class PolygonPairParams:
    n: int
    m: int
    mass: float
    alpha: float
    beta: float
    phase_a: float = 0.0
    phase_b: float = 0.0


@dataclass(frozen=True, eq=False)
class OrbitFamily:
    """A validated closed-form solution, evaluable at any time.

    Each body i follows

        q_i(t) = c_i + f(w_i t + p_i) u_i + g(w_i t + p_i) v_i

    with (f, g) = (cos, sin) on S3 and (cosh, sinh) on H3, which makes
    the analytic second derivative simply -sigma w_i^2 (q_i - c_i).
    """

    kind: FamilyKind
    params: object
    masses: np.ndarray
    sigma: int
    centers: np.ndarray
    axes_u: np.ndarray
    axes_v: np.ndarray
    rates: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        for name in ("masses", "centers", "axes_u", "axes_v", "rates", "phases"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_bodies(self) -> int:
        return len(self.masses)

    def _angles(self, t):
        return np.multiply.outer(np.atleast_1d(t), self.rates) + self.phases

    def positions_at(self, t: float) -> np.ndarray:
        a = self._angles(t)[0]
        f, g = (np.cos, np.sin) if self.sigma == SPHERE else (np.cosh, np.sinh)
        return self.centers + f(a)[:, None] * self.axes_u + g(a)[:, None] * self.axes_v

    def velocities_at(self, t: float) -> np.ndarray:
        a = self._angles(t)[0]
        w = self.rates[:, None]
        if self.sigma == SPHERE:
            return w * (-np.sin(a)[:, None] * self.axes_u + np.cos(a)[:, None] * self.axes_v)
        return w * (np.sinh(a)[:, None] * self.axes_u + np.cosh(a)[:, None] * self.axes_v)

    def acceleration_at(self, t: float) -> np.ndarray:
        """Analytic q'' of every body at time t."""
        q = self.positions_at(t)
        return -self.sigma * self.rates[:, None] ** 2 * (q - self.centers)

    def positions_batch(self, times) -> np.ndarray:
        """(T, N, 4) positions at many times."""
        a = self._angles(times)
        f, g = (np.cos, np.sin) if self.sigma == SPHERE else (np.cosh, np.sinh)
        return self.centers + f(a)[..., None] * self.axes_u + g(a)[..., None] * self.axes_v

    def velocities_batch(self, times) -> np.ndarray:
        a = self._angles(times)
        w = self.rates[:, None]
        if self.sigma == SPHERE:
            return w * (-np.sin(a)[..., None] * self.axes_u + np.cos(a)[..., None] * self.axes_v)
        return w * (np.sinh(a)[..., None] * self.axes_u + np.cosh(a)[..., None] * self.axes_v)

    def state_at(self, t: float) -> dynamics.SystemState:
        return dynamics.SystemState(
            self.masses, self.positions_at(t), self.velocities_at(t), self.sigma, t
        )

    def __call__(self, t: float) -> dynamics.SystemState:
        return self.state_at(t)

    def rotation_rates(self):
        """(gamma, delta) of the rigid rotation generating this family in
        standard coordinates: the wx-plane and yz-plane rates. Only
        meaningful for the S3 families."""
        if self.kind is FamilyKind.LAGRANGIAN_ELLIPTIC:
            return float(self.params.omega), 0.0
        if self.kind is FamilyKind.COMPLEMENTARY_SIX_BODY:
            return float(self.params.alpha), float(self.params.beta)
        if self.kind is FamilyKind.COMPLEMENTARY_POLYGON_PAIR:
            return float(self.params.alpha), float(self.params.beta)
        raise ValidationError(f"family kind {self.kind.value} has no S3 rotation rates")

    def describe(self) -> dict:
        """JSON-friendly summary (kind plus parameter record)."""
        p = self.params
        out = {"kind": self.kind.value}
        for key in p.__dataclass_fields__:
            val = getattr(p, key)
            out[key] = val if not isinstance(val, dict) else dict(val)
        return out


def residual_profile(family: OrbitFamily, times=VALIDATION_TIMES) -> np.ndarray:
    """Equation-of-motion residual of the family at each given time."""
    return np.array([dynamics.residual(family, float(t)) for t in np.atleast_1d(times)])


def _validated(family: OrbitFamily, what: str) -> OrbitFamily:
    res = residual_profile(family)
    worst = float(np.max(res))
    if worst > RESIDUAL_TOLERANCE:
        raise ValidationError(
            f"{what}: candidate orbit does not solve the equations of motion "
            f"(max residual {worst:.3e} > {RESIDUAL_TOLERANCE:g})"
        )
    return family


def lagrangian_omega_squared(m: float, r: float) -> float:
    """Squared spin rate of the equilateral-triangle family."""
    return 8.0 * m / (np.sqrt(3.0) * r**3 * (4.0 - 3.0 * r**2) ** 1.5)


def _lagrangian_raw(m, r, y, z, omega) -> OrbitFamily:
    phases = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    e_w = np.array([1.0, 0.0, 0.0, 0.0])
    e_x = np.array([0.0, 1.0, 0.0, 0.0])
    return OrbitFamily(
        kind=FamilyKind.LAGRANGIAN_ELLIPTIC,
        params=LagrangianParams(m=m, r=r, y=y, z=z, omega=omega),
        masses=np.full(3, m),
        sigma=SPHERE,
        centers=np.tile([0.0, 0.0, y, z], (3, 1)),
        axes_u=np.tile(r * e_w, (3, 1)),
        axes_v=np.tile(r * e_x, (3, 1)),
        rates=np.full(3, omega),
        phases=phases,
    )


def lagrangian_elliptic(m: float, r: float, y: float, z: float, sign: int = 1) -> OrbitFamily:
    """Equilateral three-body family on S3.

    Requires r strictly inside (0, 1) and r^2 + y^2 + z^2 = 1; the spin
    rate is fixed by the closed form (sign picks its direction) and the
    result is residual-validated.
    """
    if m <= 0:
        raise ValidationError("mass must be positive", field="m")
    if not 0.0 < r < 1.0:
        raise ValidationError(f"circumradius r must lie strictly in (0, 1), got {r}", field="r")
    if abs(r * r + y * y + z * z - 1.0) > 1e-12:
        raise ValidationError(
            f"(r, y, z) must satisfy r^2 + y^2 + z^2 = 1, got {r * r + y * y + z * z!r}",
            field="y",
        )
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1", field="sign")
    omega = sign * np.sqrt(lagrangian_omega_squared(m, r))
    return _validated(_lagrangian_raw(m, r, y, z, omega), "lagrangian_elliptic")


def eulerian_beta_squared(eta: float, m: float = 1.0) -> float:
    """Squared hyperbolic rotation rate of the collinear family, with
    the mass scaling selected by residual validation."""
    return m * (1.0 + 4.0 * eta * eta) / (4.0 * eta**3 * (eta * eta - 1.0) ** 1.5)


def _eulerian_raw(m, eta, beta, beta_variant="m-scaled", variant_residuals=None) -> OrbitFamily:
    x = np.sqrt(eta * eta - 1.0)
    e_y = np.array([0.0, 0.0, 1.0, 0.0])
    e_z = np.array([0.0, 0.0, 0.0, 1.0])
    params = EulerianParams(
        m=m,
        eta=eta,
        x=float(x),
        beta=beta,
        beta_variant=beta_variant,
        variant_residuals=variant_residuals or {},
    )
    return OrbitFamily(
        kind=FamilyKind.EULERIAN_HYPERBOLIC,
        params=params,
        masses=np.full(3, m),
        sigma=HYPERBOLIC,
        centers=np.array([[0.0, 0.0, 0.0, 0.0], [0.0, x, 0.0, 0.0], [0.0, -x, 0.0, 0.0]]),
        axes_u=np.array([e_z, eta * e_z, eta * e_z]),
        axes_v=np.array([e_y, eta * e_y, eta * e_y]),
        rates=np.full(3, beta),
        phases=np.zeros(3),
    )


def eulerian_hyperbolic(m: float, eta: float, sign: int = 1) -> OrbitFamily:
    """Collinear three-body family on H3: one body on the geodesic
    x = 0, two at mirror offsets +-sqrt(eta^2 - 1).

    The frequency law carries a factor m; both the mass-scaled and the
    unscaled variant are substituted into the equations of motion and
    the passing one is recorded on the returned parameter record.
    """
    if m <= 0:
        raise ValidationError("mass must be positive", field="m")
    if eta < ETA_MIN:
        raise ValidationError(
            f"eta must exceed {ETA_MIN} (the frequency law has a pole at eta = 1), got {eta}",
            field="eta",
        )
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1", field="sign")
    base = eulerian_beta_squared(eta, m=1.0)
    candidates = {"m-scaled": m * base, "literal": base}
    residuals = {}
    chosen = None
    for name in ("m-scaled", "literal"):
        beta = sign * np.sqrt(candidates[name])
        trial = _eulerian_raw(m, eta, beta)
        residuals[name] = float(np.max(residual_profile(trial)))
        if chosen is None and residuals[name] <= RESIDUAL_TOLERANCE:
            chosen = name
    if chosen is None:
        raise ValidationError(
            "eulerian_hyperbolic: neither frequency variant solves the equations "
            f"of motion (residuals {residuals})"
        )
    beta = sign * np.sqrt(candidates[chosen])
    return _eulerian_raw(m, eta, beta, beta_variant=chosen, variant_residuals=residuals)


def _polygon_pair_raw(params: PolygonPairParams, kind: FamilyKind, family_params) -> OrbitFamily:
    n, mm = params.n, params.m
    e_w = np.array([1.0, 0.0, 0.0, 0.0])
    e_x = np.array([0.0, 1.0, 0.0, 0.0])
    e_y = np.array([0.0, 0.0, 1.0, 0.0])
    e_z = np.array([0.0, 0.0, 0.0, 1.0])
    total = n + mm
    centers = np.zeros((total, 4))
    axes_u = np.vstack([np.tile(e_w, (n, 1)), np.tile(e_y, (mm, 1))])
    axes_v = np.vstack([np.tile(e_x, (n, 1)), np.tile(e_z, (mm, 1))])
    rates = np.concatenate([np.full(n, params.alpha), np.full(mm, params.beta)])
    phases = np.concatenate(
        [
            params.phase_a + 2.0 * np.pi * np.arange(n) / n,
            params.phase_b + 2.0 * np.pi * np.arange(mm) / mm,
        ]
    )
    return OrbitFamily(
        kind=kind,
        params=family_params,
        masses=np.full(total, params.mass),
        sigma=SPHERE,
        centers=centers,
        axes_u=axes_u,
        axes_v=axes_v,
        rates=rates,
        phases=phases,
    )


def complementary_six_body(m: float, alpha: float, beta: float) -> OrbitFamily:
    """Two equal-mass equilateral triangles on the complementary circles
    {y=z=0} (rate alpha) and {w=x=0} (rate beta).

    At t = 0 the configuration is the fixed-point arrangement
    (1,0,0,0), (-1/2, +-sqrt(3)/2, 0, 0) and (0,0,1,0),
    (0, 0, -1/2, +-sqrt(3)/2), at which all gravitational forces vanish;
    any nonzero frequency pair then yields a solution.
    """
    if m <= 0:
        raise ValidationError("mass must be positive", field="m")
    if alpha == 0.0:
        raise ValidationError("frequency alpha must be nonzero", field="alpha")
    if beta == 0.0:
        raise ValidationError("frequency beta must be nonzero", field="beta")
    poly = PolygonPairParams(n=3, m=3, mass=m, alpha=alpha, beta=beta)
    family = _polygon_pair_raw(
        poly, FamilyKind.COMPLEMENTARY_SIX_BODY, SixBodyParams(m=m, alpha=alpha, beta=beta)
    )
    return _validated(family, "complementary_six_body")


def complementary_polygon_pair(params: PolygonPairParams) -> OrbitFamily:
    """Regular N-gon and M-gon of equal masses on the two complementary
    circles, with free nonzero frequencies.

    N and M must be odd (and at least 3): an even regular polygon on a
    great circle contains antipodal pairs, which are singular for the
    force law.
    """
    for label, value in (("n", params.n), ("m", params.m)):
        if not isinstance(value, (int, np.integer)) or value < 3:
            raise ValidationError(f"polygon size {label} must be an integer >= 3", field=label)
        if value % 2 == 0:
            raise ValidationError(
                f"polygon size {label} = {value} is even: a regular even polygon on a "
                "great circle places bodies at antipodes, a singular configuration",
                field=label,
            )
    if params.mass <= 0:
        raise ValidationError("mass must be positive", field="mass")
    if params.alpha == 0.0:
        raise ValidationError("frequency alpha must be nonzero", field="alpha")
    if params.beta == 0.0:
        raise ValidationError("frequency beta must be nonzero", field="beta")
    family = _polygon_pair_raw(params, FamilyKind.COMPLEMENTARY_POLYGON_PAIR, params)
    return _validated(family, "complementary_polygon_pair")


# ---------------------------------------------------------------------------
# Centre-of-mass-like certifications for the two positive-control families.


@dataclass(frozen=True)
class CirclePointCertificate:
    """Diagnostics for one candidate point on the circle {w=x=0}."""

    point: ManifoldPoint
    field_norm: float
    distance_spread: float
    equidistance_value: float
    field_ok: bool
    equidistant_ok: bool

    @property
    def certified(self) -> bool:
        return self.field_ok and self.equidistant_ok


def lagrangian_circle_survey(
    family: OrbitFamily,
    n_samples: int = 100,
    field_tol: float = 1e-12,
    dist_tol: float = 1e-12,
    times=(0.0, 0.3, 0.7),
) -> list[CirclePointCertificate]:
    """Scan the circle {w = x = 0} fixed by the triangle's rotation.

    Every point of the circle is equidistant from the three bodies, with
    distance arccos(y0 y + z0 z), constant in time. The gravitational
    field on the circle is tangent to the circle and vanishes only on
    the axis through the triangle's centre, i.e. at
    +-(0, 0, y, z)/sqrt(1 - r^2); those two axis points are included in
    the scan alongside ``n_samples`` equally spaced angles.
    """
    if family.kind is not FamilyKind.LAGRANGIAN_ELLIPTIC:
        raise ValidationError("circle survey applies to the Lagrangian family only")
    p = family.params
    angles = list(np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False))
    span = np.hypot(p.y, p.z)
    if span > 0:
        for extra in (np.arctan2(p.z, p.y) % (2.0 * np.pi), (np.arctan2(p.z, p.y) + np.pi) % (2.0 * np.pi)):
            if min(abs(extra - a % (2.0 * np.pi)) for a in angles) > 1e-12:
                angles.append(extra)
    states = [family.state_at(float(t)) for t in times]
    out = []
    for theta in angles:
        point = ManifoldPoint(np.array([0.0, 0.0, np.cos(theta), np.sin(theta)]), SPHERE)
        field_norm = max(
            float(np.linalg.norm(dynamics.gravitational_field(s, point).coords)) for s in states
        )
        dists = []
        for s in states:
            for i in range(s.n_bodies):
                dists.append(np.arccos(np.clip(np.dot(point.coords, s.positions[i]), -1, 1)))
        dists = np.array(dists)
        spread = float(np.max(dists) - np.min(dists))
        expected = float(np.arccos(np.clip(np.cos(theta) * p.y + np.sin(theta) * p.z, -1, 1)))
        out.append(
            CirclePointCertificate(
                point=point,
                field_norm=field_norm,
                distance_spread=spread,
                equidistance_value=expected,
                field_ok=field_norm <= field_tol,
                equidistant_ok=spread <= dist_tol and abs(float(dists[0]) - expected) <= dist_tol,
            )
        )
    return out


def com_examples_lagrangian(
    family: OrbitFamily,
    n_samples: int = 100,
    field_tol: float = 1e-12,
    dist_tol: float = 1e-12,
) -> list[ManifoldPoint]:
    """Fully certified centre-of-mass-like points of the Lagrangian
    family: fixed under the motion, equidistant from all three bodies,
    and with vanishing gravitational field.

    Note that only the field check cuts the candidate set down: the
    whole circle {w=x=0} is equidistant from the bodies, but the field
    on it vanishes just at the two axis points +-(0,0,y,z)/sqrt(1-r^2)
    (see :func:`lagrangian_circle_survey` for the full scan).
    """
    certs = lagrangian_circle_survey(family, n_samples, field_tol, dist_tol)
    return [c.point for c in certs if c.certified]


@dataclass(frozen=True, eq=False)
class EulerianComTrajectory:
    """The uniformly moving companion point of the Eulerian family:
    t -> (w*, 0, rho* sinh(beta t), rho* cosh(beta t)) with
    rho* = sqrt(1 + w*^2).

    Its hyperbolic distances to the bodies are constant in time:
    arccosh(rho*) to the central body and arccosh(eta rho*) to the two
    mirror bodies. For w* = 0 the point coincides with the central body.
    """

    family: OrbitFamily
    w_star: float
    rho_star: float
    distance_to_body1: float
    distance_to_outer: float

    def point_at(self, t: float) -> ManifoldPoint:
        beta = self.family.params.beta
        return ManifoldPoint(
            np.array(
                [
                    self.w_star,
                    0.0,
                    self.rho_star * np.sinh(beta * t),
                    self.rho_star * np.cosh(beta * t),
                ]
            ),
            HYPERBOLIC,
        )

    def distances_at(self, t: float) -> np.ndarray:
        state = self.family.state_at(t)
        return np.arccosh(np.maximum(self.distance_arguments_at(t), 1.0))

    def distance_arguments_at(self, t: float) -> np.ndarray:
        """-q*(t) . q_i(t) (Lorentz product), i.e. cosh of the distances."""
        state = self.family.state_at(t)
        p = self.point_at(t)
        g = np.array([1.0, 1.0, 1.0, -1.0])
        return -(state.positions @ (g * p.coords))


def com_example_eulerian(
    family: OrbitFamily,
    w_star: float,
    window: float = 5.0,
    n_samples: int = 101,
    tol: float = 1e-10,
) -> EulerianComTrajectory:
    """Build and certify the co-moving companion point of the Eulerian
    family, checking distance constancy over the given window."""
    if family.kind is not FamilyKind.EULERIAN_HYPERBOLIC:
        raise ValidationError("the companion-point construction needs an Eulerian family")
    rho = float(np.sqrt(1.0 + w_star * w_star))
    eta = family.params.eta
    traj = EulerianComTrajectory(
        family=family,
        w_star=float(w_star),
        rho_star=rho,
        distance_to_body1=float(np.arccosh(max(rho, 1.0))),
        distance_to_outer=float(np.arccosh(eta * rho)),
    )
    expected = np.array([traj.distance_to_body1, traj.distance_to_outer, traj.distance_to_outer])
    expected_args = np.cosh(expected)
    # arccosh has a sqrt singularity at argument 1, so a coincident body
    # (distance 0) is certified on the cosh argument instead, where the
    # comparison stays linear in round-off.
    use_distance = expected >= 1e-6
    for t in np.linspace(0.0, window, n_samples):
        args = traj.distance_arguments_at(float(t))
        dists = np.arccosh(np.maximum(args, 1.0))
        dev = float(
            np.max(np.where(use_distance, np.abs(dists - expected), np.abs(args - expected_args)))
        )
        if dev > tol:
            raise ValidationError(
                f"companion-point distances drift by {dev:.3e} at t = {t:g} (tol {tol:g})"
            )
    return traj
