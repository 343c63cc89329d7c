"""Rigid-rotation analysis and the centre-of-mass-like point search.

The complementary-circle orbits are generated by a one-parameter
rotation A(t) acting on the initial configuration: block rotation at
rate gamma in one invariant plane and delta in the other. This module

* realizes and fits such actions,
* classifies how a candidate point moves under an action (fixed,
  uniformly along a great circle, or neither), and
* searches the whole sphere for points that could play the role of a
  centre of mass for a given orbit family, producing a JSON-friendly
  report.

Irrationality of gamma/delta cannot be decided numerically. The
geodesic test is therefore operational: a trajectory counts as planar
when the smallest singular value of its sample matrix over a finite
window falls below tol * sqrt(n_samples), and a low-order-rational
guard warns when the frequency ratio is within 1e-6 of p/q with
q <= 20. Reports always carry the window and tolerances used; they
certify numerics, not proofs.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import dynamics
from .errors import (
    ConstraintViolationError,
    NotARigidRotationError,
    ValidationError,
)
from .families import FamilyKind, OrbitFamily, com_example_eulerian
from .geometry import SPHERE, ManifoldPoint

# Points per classification window; with gamma/delta = sqrt(2) and a
# window of 50 this separates quasiperiodic from planar trajectories by
# more than six orders of magnitude in the smallest singular value.
SAMPLES_PER_WINDOW = 512

DEFAULT_WINDOW = 50.0
DEFAULT_TOL = 1e-6

RIGID_FIT_TOLERANCE = 1e-6

# Low-order rational guard for the frequency ratio.
RESONANCE_MAX_DENOMINATOR = 20
RESONANCE_TOLERANCE = 1e-6

CRITERIA_NOTE = (
    "uniform-geodesic verdicts are numerical: a trajectory sampled over the "
    "stated window counts as planar when the smallest singular value of its "
    "sample matrix is below tol*sqrt(n_samples); this certifies behaviour at "
    "the stated tolerances, not a proof"
)


class Verdict(enum.Enum):
    FIXED = "fixed"
    UNIFORM_GEODESIC = "uniform_geodesic"
    NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class GeodesicPlane:
    """Hyperplane A w + B x + C y + D z = 0 through the origin, with
    unit-norm coefficient vector."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float).reshape(4).copy()
        norm = np.linalg.norm(c)
        if norm == 0:
            raise ValidationError("plane coefficients must not all vanish")
        c /= norm
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    def evaluate(self, points) -> np.ndarray:
        return np.asarray(points) @ self.coefficients


@dataclass(frozen=True, eq=False)
class ComClassification:
    verdict: Verdict
    witness: GeodesicPlane | None
    max_deviation: float


@dataclass(frozen=True, eq=False)
class RotationAction:
    """One-parameter rotation of S3: rate ``gamma`` in the plane of the
    first two frame axes, ``delta`` in the plane of the last two."""

    gamma: float
    delta: float
    frame: np.ndarray = None

    def __post_init__(self):
        f = np.eye(4) if self.frame is None else np.asarray(self.frame, dtype=float).copy()
        if f.shape != (4, 4) or np.max(np.abs(f.T @ f - np.eye(4))) > 1e-12:
            raise ValidationError("rotation frame must be a 4x4 orthogonal matrix")
        f.flags.writeable = False
        object.__setattr__(self, "frame", f)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "delta", float(self.delta))

    def matrix_at(self, t: float) -> np.ndarray:
        cg, sg = np.cos(self.gamma * t), np.sin(self.gamma * t)
        cd, sd = np.cos(self.delta * t), np.sin(self.delta * t)
        block = np.array(
            [[cg, -sg, 0.0, 0.0], [sg, cg, 0.0, 0.0], [0.0, 0.0, cd, -sd], [0.0, 0.0, sd, cd]]
        )
        return self.frame @ block @ self.frame.T

    def trajectories(self, points, times) -> np.ndarray:
        """Orbits of many points under the action: (n_points, T, 4)."""
        c = np.atleast_2d(points) @ self.frame  # frame coordinates
        t = np.asarray(times, dtype=float)
        cg, sg = np.cos(self.gamma * t), np.sin(self.gamma * t)
        cd, sd = np.cos(self.delta * t), np.sin(self.delta * t)
        out = np.empty((c.shape[0], len(t), 4))
        out[:, :, 0] = c[:, 0, None] * cg - c[:, 1, None] * sg
        out[:, :, 1] = c[:, 0, None] * sg + c[:, 1, None] * cg
        out[:, :, 2] = c[:, 2, None] * cd - c[:, 3, None] * sd
        out[:, :, 3] = c[:, 2, None] * sd + c[:, 3, None] * cd
        return out @ self.frame.T


def family_action(family: OrbitFamily) -> RotationAction:
    """The rigid rotation generating an S3 family in standard
    coordinates: block rates equal to the family's two circle
    frequencies, under which A(t) applied to the initial configuration
    reproduces the closed-form trajectories exactly."""
    gamma, delta = family.rotation_rates()
    return RotationAction(gamma, delta)


def apply_action(action: RotationAction, p: ManifoldPoint, t: float) -> ManifoldPoint:
    """A(t) p for a point of S3."""
    if p.sigma != SPHERE:
        raise ConstraintViolationError("rotation actions apply to S3 points only")
    return ManifoldPoint(action.matrix_at(t) @ p.coords, SPHERE)


def fit_action(trajectory) -> tuple[RotationAction, float]:
    """Recover a rigid rotation from a sampled trajectory.

    A least-squares fit of an antisymmetric generator W to the sampled
    (position, velocity) pairs gives the candidate action; its two
    invariant planes and rates come from the spectral decomposition of
    W^2. Returns the action together with the max-norm error of
    reconstructing every sampled position as A(t) q(0); an error above
    RIGID_FIT_TOLERANCE raises NotARigidRotationError.

    The block whose invariant plane overlaps the wx coordinate plane
    most is reported as gamma; both rates are nonnegative.
    """
    times = np.asarray(trajectory.times, dtype=float)
    Q = np.array([s.positions for s in trajectory.states])  # (T, N, 4)
    V = np.array([s.velocities for s in trajectory.states])
    flat_q = Q.reshape(-1, 4)
    flat_v = V.reshape(-1, 4)

    # Least squares over the 6 generator components.
    generators = []
    for a, b in dynamics.ANGULAR_MOMENTUM_PAIRS:
        g = np.zeros((4, 4))
        g[b, a], g[a, b] = 1.0, -1.0
        generators.append(g)
    design = np.stack([flat_q @ g.T for g in generators], axis=-1).reshape(-1, 6)
    coeffs, *_ = np.linalg.lstsq(design, flat_v.reshape(-1), rcond=None)
    omega = sum(c * g for c, g in zip(coeffs, generators))

    action = _action_from_generator(omega)
    recon = action.trajectories(Q[0], times - times[0])  # (N, T, 4)
    err = float(np.max(np.abs(recon.transpose(1, 0, 2) - Q)))
    if err > RIGID_FIT_TOLERANCE:
        raise NotARigidRotationError(
            f"trajectory is not a rigid rotation (reconstruction error {err:.3e})",
            reconstruction_error=err,
        )
    return action, err


def _action_from_generator(omega: np.ndarray) -> RotationAction:
    # W^2 is symmetric negative semidefinite with doubly degenerate
    # eigenvalues -rate^2; eigh gives the invariant planes.
    evals, evecs = np.linalg.eigh(omega @ omega)
    scale = max(1.0, float(np.max(np.abs(evals))))
    rate_pairs = []  # (rate, u, v) per invariant plane
    used = np.zeros(4, dtype=bool)
    for idx in np.argsort(evals):  # most negative (largest rate) first
        if used[idx]:
            continue
        rate = float(np.sqrt(max(0.0, -evals[idx])))
        u = evecs[:, idx]
        for _, pu, pv in rate_pairs:  # orthogonalize within degenerate spectra
            u = u - np.dot(u, pu) * pu - np.dot(u, pv) * pv
        nu = np.linalg.norm(u)
        if nu < 1e-8:
            continue
        u = u / nu
        if rate > 1e-12 * np.sqrt(scale):
            v = omega @ u / rate
        else:
            # Kernel plane: pick any orthonormal completion inside it.
            rate = 0.0
            v = None
            for jdx in np.argsort(evals):
                cand = evecs[:, jdx]
                cand = cand - np.dot(cand, u) * u
                for _, pu, pv in rate_pairs:
                    cand = cand - np.dot(cand, pu) * pu - np.dot(cand, pv) * pv
                if np.linalg.norm(cand) > 1e-8:
                    v = cand / np.linalg.norm(cand)
                    break
            if v is None:
                raise NotARigidRotationError("could not complete a rotation frame")
        rate_pairs.append((rate, u, v))
        used[idx] = True
        if len(rate_pairs) == 2:
            break
    if len(rate_pairs) < 2:
        raise NotARigidRotationError("could not extract two invariant planes")

    # Label as gamma the block closest to the wx coordinate plane.
    def wx_overlap(pair):
        _, u, v = pair
        return u[0] ** 2 + u[1] ** 2 + v[0] ** 2 + v[1] ** 2

    rate_pairs.sort(key=wx_overlap, reverse=True)
    (g_rate, u1, v1), (d_rate, u2, v2) = rate_pairs
    frame = np.column_stack([u1, v1, u2, v2])
    return RotationAction(g_rate, d_rate, frame)


def classify_point(
    action: RotationAction,
    p: ManifoldPoint,
    window: float = DEFAULT_WINDOW,
    tol: float = DEFAULT_TOL,
    n_samples: int = SAMPLES_PER_WINDOW,
) -> ComClassification:
    """Classify the orbit of p under the action over [0, window].

    Fixed: every sampled position stays within ``tol`` (geodesic
    distance) of p. Uniform geodesic: the sampled orbit lies in a
    hyperplane through the origin, detected by the smallest singular
    value of the (n_samples, 4) sample matrix falling below
    tol * sqrt(n_samples); the fitted plane is returned as witness, and
    the (automatically constant) speed is asserted. Otherwise Neither,
    with the smallest singular value as the deviation measure.

    The hyperplane test is a necessary condition for great-circle
    motion; for dual-block actions with both rates nonzero it is also
    sufficient, which is the regime the search relies on.
    """
    if p.sigma != SPHERE:
        raise ConstraintViolationError("classification applies to S3 points only")
    times = np.linspace(0.0, window, n_samples)
    traj = action.trajectories(p.coords[None, :], times)[0]  # (T, 4)

    displacement = float(np.max(np.arccos(np.clip(traj @ p.coords, -1.0, 1.0))))
    if displacement <= tol:
        return ComClassification(Verdict.FIXED, None, displacement)

    svals = np.linalg.svd(traj, compute_uv=False)
    s_min = float(svals[-1])
    if s_min <= tol * np.sqrt(n_samples):
        _, _, vt = np.linalg.svd(traj)
        witness = GeodesicPlane(vt[-1])
        _assert_constant_speed(action, p, times)
        return ComClassification(Verdict.UNIFORM_GEODESIC, witness, s_min)
    return ComClassification(Verdict.NEITHER, None, s_min)


def _assert_constant_speed(action, p, times):
    c = action.frame.T @ p.coords
    r2 = c[0] ** 2 + c[1] ** 2
    rho2 = c[2] ** 2 + c[3] ** 2
    speed = np.sqrt(action.gamma**2 * r2 + action.delta**2 * rho2)
    # The action is an isometry, so the orbit speed cannot vary; this
    # assert documents the invariant rather than guarding real risk.
    assert np.isfinite(speed)


def _classify_batch(action, points, window, tol, n_samples):
    """Vectorized classify for (n, 4) points; returns verdict codes
    (0 fixed, 1 uniform geodesic, 2 neither) and deviations."""
    times = np.linspace(0.0, window, n_samples)
    n = len(points)
    codes = np.full(n, 2, dtype=int)
    deviations = np.empty(n)
    threshold = tol * np.sqrt(n_samples)
    chunk = 1024
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        traj = action.trajectories(points[lo:hi], times)  # (c, T, 4)
        dots = np.einsum("ctk,ck->ct", traj, points[lo:hi])
        disp = np.max(np.arccos(np.clip(dots, -1.0, 1.0)), axis=1)
        svals = np.linalg.svd(traj, compute_uv=False)
        s_min = svals[:, -1]
        fixed = disp <= tol
        planar = ~fixed & (s_min <= threshold)
        codes[lo:hi][fixed] = 0
        codes[lo:hi][planar] = 1
        deviations[lo:hi] = np.where(fixed, disp, s_min)
    return codes, deviations


def distance_to_complementary_circles(points) -> np.ndarray:
    """Geodesic distance from each point to the union of the circles
    {y=z=0} and {w=x=0}: min(arccos r0, arccos rho0)."""
    pts = np.atleast_2d(points)
    r0 = np.sqrt(pts[:, 0] ** 2 + pts[:, 1] ** 2)
    rho0 = np.sqrt(pts[:, 2] ** 2 + pts[:, 3] ** 2)
    return np.minimum(np.arccos(np.clip(rho0, -1, 1)), np.arccos(np.clip(r0, -1, 1)))


def _equidistance_filter(family, action, points, window, tol, n_check=256):
    """Full-system centre-of-mass filter for candidate points that
    co-move with the action: distances to every body must be constant
    in time AND equal across all bodies.

    Co-moving candidates always keep constant distances when the whole
    system is carried by the same rotation, so the discriminating
    clause is equality across bodies; a rotating polygon admits no
    point equidistant from all of its vertices other than on the
    complementary circle, and no point is equidistant from both
    polygons at once.

    Returns (passes, constancy_dev, equality_dev) arrays.
    """
    pts = np.atleast_2d(points)
    times = np.linspace(0.0, window, n_check)
    bodies = family.positions_batch(times)  # (T, N, 4)
    n = len(pts)
    passes = np.zeros(n, dtype=bool)
    const_dev = np.empty(n)
    eq_dev = np.empty(n)
    chunk = 256
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        traj = action.trajectories(pts[lo:hi], times)  # (c, T, 4)
        dots = np.einsum("ctk,tnk->ctn", traj, bodies)
        dists = np.arccos(np.clip(dots, -1.0, 1.0))  # (c, T, N)
        c_dev = np.max(np.abs(dists - dists[:, :1, :]), axis=(1, 2))
        e_dev = np.max(dists[:, 0, :], axis=1) - np.min(dists[:, 0, :], axis=1)
        const_dev[lo:hi] = c_dev
        eq_dev[lo:hi] = e_dev
        passes[lo:hi] = (c_dev <= tol) & (e_dev <= tol)
    return passes, const_dev, eq_dev


def _resonance_check(gamma, delta):
    ratio = abs(gamma / delta)
    for q in range(1, RESONANCE_MAX_DENOMINATOR + 1):
        p = round(ratio * q)
        if p == 0:
            continue
        if abs(ratio - p / q) < RESONANCE_TOLERANCE:
            return {
                "ratio": ratio,
                "p": int(p),
                "q": int(q),
                "message": (
                    f"frequency ratio {ratio:.9g} is within {RESONANCE_TOLERANCE:g} of "
                    f"{p}/{q}; the irrationality hypothesis is numerically fragile here"
                ),
            }
    return None


def _histogram(values):
    edges = np.concatenate([[0.0], np.logspace(-16, 2, 19)])
    counts, _ = np.histogram(values, bins=edges)
    return {"bin_edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


@dataclass
class SearchReport:
    """Outcome of a centre-of-mass candidate search, JSON-serializable."""

    family: dict
    mode: str
    n_samples: int
    window: float
    tol: float
    seed: int
    samples_per_window: int
    counts: dict
    survivors: list
    uniform_geodesic_summary: dict
    histograms: dict
    resonance_warning: dict | None
    criteria_note: str = CRITERIA_NOTE
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "mode": self.mode,
            "n_samples": self.n_samples,
            "window": self.window,
            "tol": self.tol,
            "seed": self.seed,
            "samples_per_window": self.samples_per_window,
            "counts": self.counts,
            "survivors": self.survivors,
            "uniform_geodesic_summary": self.uniform_geodesic_summary,
            "histograms": self.histograms,
            "resonance_warning": self.resonance_warning,
            "criteria_note": self.criteria_note,
            **({"extra": self.extra} if self.extra else {}),
        }


def search_com(
    family: OrbitFamily,
    n_samples: int = 10000,
    window: float = DEFAULT_WINDOW,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    samples_per_window: int = SAMPLES_PER_WINDOW,
    mode: str | None = None,
) -> SearchReport:
    """Search S3 for centre-of-mass-like points of an orbit family.

    ``mode="action"`` (complementary-circle families): every sampled
    point is classified under the family's rigid rotation; fixed or
    uniform-geodesic hits are then passed through the full-system
    equidistance filter (constant AND equal distances to all bodies).
    Survivors are expected to be none for generic frequency pairs.

    ``mode="field"`` (Lagrangian family): candidates are tested for
    being fixed under the family's rotation with a vanishing
    gravitational field over the window. The circle {w=x=0} fixed by
    the rotation is scanned explicitly in addition to the uniform
    samples; survivors are the axis points of that circle.

    Sampling is uniform on S3 via normalized 4D Gaussian draws from the
    recorded seed. A resonance warning is attached when the frequency
    ratio is within 1e-6 of a rational p/q with q <= 20.
    """
    if mode is None:
        if family.kind in (FamilyKind.COMPLEMENTARY_SIX_BODY, FamilyKind.COMPLEMENTARY_POLYGON_PAIR):
            mode = "action"
        elif family.kind is FamilyKind.LAGRANGIAN_ELLIPTIC:
            mode = "field"
        else:
            raise ValidationError(f"no search mode for family kind {family.kind.value}")
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((n_samples, 4))
    samples /= np.linalg.norm(samples, axis=1, keepdims=True)

    if mode == "action":
        return _search_action_mode(family, samples, window, tol, seed, samples_per_window)
    if mode == "field":
        return _search_field_mode(family, samples, window, tol, seed, samples_per_window)
    raise ValidationError(f"unknown search mode {mode!r}", field="mode")


def _search_action_mode(family, samples, window, tol, seed, samples_per_window):
    gamma, delta = family.rotation_rates()
    action = RotationAction(gamma, delta)
    resonance = _resonance_check(gamma, delta)
    if resonance is not None:
        warnings.warn(resonance["message"], stacklevel=2)

    codes, deviations = _classify_batch(action, samples, window, tol, samples_per_window)
    hits = codes <= 1  # fixed or uniform geodesic
    survivors = []
    ug_summary = {"count": int(np.sum(codes == 1)), "max_distance_to_circles": 0.0,
                  "all_within_tol_of_circles": True, "equidistance_rejections": 0}
    if np.any(hits):
        hit_pts = samples[hits]
        circle_dist = distance_to_complementary_circles(hit_pts)
        ug_summary["max_distance_to_circles"] = float(np.max(circle_dist))
        ug_summary["all_within_tol_of_circles"] = bool(np.all(circle_dist <= tol))
        passes, c_dev, e_dev = _equidistance_filter(family, action, hit_pts, window, tol)
        ug_summary["equidistance_rejections"] = int(np.sum(~passes))
        hit_indices = np.flatnonzero(hits)
        for i in np.flatnonzero(passes):
            survivors.append(
                {
                    "point": [float(x) for x in hit_pts[i]],
                    "verdict": "fixed" if codes[hit_indices[i]] == 0 else "uniform_geodesic",
                    "constancy_deviation": float(c_dev[i]),
                    "equality_deviation": float(e_dev[i]),
                }
            )
    counts = {
        "fixed": int(np.sum(codes == 0)),
        "uniform_geodesic": int(np.sum(codes == 1)),
        "neither": int(np.sum(codes == 2)),
        "survivors": len(survivors),
    }
    histograms = {
        "fixed": _histogram(deviations[codes == 0]),
        "uniform_geodesic": _histogram(deviations[codes == 1]),
        "neither": _histogram(deviations[codes == 2]),
    }
    return SearchReport(
        family=family.describe(),
        mode="action",
        n_samples=len(samples),
        window=window,
        tol=tol,
        seed=seed,
        samples_per_window=samples_per_window,
        counts=counts,
        survivors=survivors,
        uniform_geodesic_summary=ug_summary,
        histograms=histograms,
        resonance_warning=resonance,
    )


def _search_field_mode(family, samples, window, tol, seed, samples_per_window):
    gamma, delta = family.rotation_rates()
    action = RotationAction(gamma, delta)
    p = family.params
    # Structured candidates: the circle fixed by the rotation, plus the
    # axis points through the triangle's centre.
    angles = list(np.linspace(0.0, 2.0 * np.pi, 128, endpoint=False))
    span = np.hypot(p.y, p.z)
    if span > 0:
        axis_angle = np.arctan2(p.z, p.y) % (2.0 * np.pi)
        for extra_angle in (axis_angle, (axis_angle + np.pi) % (2.0 * np.pi)):
            if min(abs(extra_angle - a % (2.0 * np.pi)) for a in angles) > 1e-12:
                angles.append(extra_angle)
    angles = np.array(angles)
    circle = np.stack(
        [np.zeros_like(angles), np.zeros_like(angles), np.cos(angles), np.sin(angles)], axis=1
    )
    candidates = np.vstack([samples, circle])
    origin = ["uniform"] * len(samples) + ["circle"] * len(circle)

    codes, deviations = _classify_batch(action, candidates, window, tol, samples_per_window)

    field_tol = 1e-12  # force-vanishing threshold for survivor status
    times = np.linspace(0.0, window, 32)
    states = [family.state_at(float(t)) for t in times]
    survivors = []
    n_field_pass = 0
    for i in np.flatnonzero(codes == 0):  # fixed candidates only
        point = ManifoldPoint(candidates[i], SPHERE)
        norms = []
        for s in states:
            norms.append(float(np.linalg.norm(dynamics.gravitational_field(s, point).coords)))
        worst = max(norms)
        if worst <= field_tol:
            n_field_pass += 1
            survivors.append(
                {
                    "point": [float(x) for x in candidates[i]],
                    "verdict": "fixed",
                    "origin": origin[i],
                    "max_field_norm": worst,
                }
            )
    counts = {
        "fixed": int(np.sum(codes == 0)),
        "uniform_geodesic": int(np.sum(codes == 1)),
        "neither": int(np.sum(codes == 2)),
        "survivors": len(survivors),
    }
    histograms = {
        "fixed": _histogram(deviations[codes == 0]),
        "uniform_geodesic": _histogram(deviations[codes == 1]),
        "neither": _histogram(deviations[codes == 2]),
    }
    return SearchReport(
        family=family.describe(),
        mode="field",
        n_samples=len(samples),
        window=window,
        tol=tol,
        seed=seed,
        samples_per_window=samples_per_window,
        counts=counts,
        survivors=survivors,
        uniform_geodesic_summary={"count": counts["uniform_geodesic"]},
        histograms=histograms,
        resonance_warning=None,
        extra={"structured_candidates": len(circle), "field_tolerance": field_tol},
    )


def field_com_test(
    family: OrbitFamily,
    p: ManifoldPoint,
    window: float = DEFAULT_WINDOW,
    tol: float = 1e-10,
    n_samples: int = 100,
) -> bool:
    """Does the gravitational field vanish along the candidate point's
    trajectory?

    For S3 families the point co-moves under the family's rigid
    rotation (points on the rotation's fixed set simply stay put) and
    the field norm is required to stay below ``tol`` at every sample.
    For the hyperbolic family the candidate must lie on the co-moving
    companion curve (w*, 0, rho* sinh, rho* cosh); there the certified
    property is distance constancy to every body, checked at the same
    tolerance, because that is the centre-of-mass-like property this
    family exhibits.
    """
    times = np.linspace(0.0, window, n_samples)
    if family.sigma == SPHERE:
        action = family_action(family)
        traj = action.trajectories(p.coords[None, :], times)[0]
        for t, coords in zip(times, traj):
            state = family.state_at(float(t))
            f = dynamics.gravitational_field(state, ManifoldPoint(coords, SPHERE))
            if np.linalg.norm(f.coords) > tol:
                return False
        return True
    # Hyperbolic: certify the companion curve through p.
    w_star, x0 = float(p.coords[0]), float(p.coords[1])
    rho = np.sqrt(1.0 + w_star * w_star)
    on_curve = abs(x0) <= 1e-9 and abs(p.coords[2]) <= 1e-9 and abs(p.coords[3] - rho) <= 1e-9
    if not on_curve:
        return False
    try:
        com_example_eulerian(family, w_star, window=window, tol=max(tol, 1e-10))
    except ValidationError:
        return False
    return True
