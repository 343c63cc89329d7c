"""Geometric kernel for S3 and H3 embedded in R4.

Both manifolds are handled through one signed inner product: with
sigma = +1 the standard Euclidean product on R4 (the unit sphere
w^2+x^2+y^2+z^2 = 1), with sigma = -1 the Lorentz product of signature
(+,+,+,-) (the upper hyperboloid sheet w^2+x^2+y^2-z^2 = -1, z > 0).

Everything here is a pure function on small immutable values; there is
no shared state, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError, ProjectionSingularityError

SPHERE = 1
HYPERBOLIC = -1

# Inverse trig arguments within this distance of the domain boundary are
# clamped; anything farther out is a real constraint violation.
CLAMP_TOLERANCE = 1e-9

# Post-construction manifold membership must hold this tightly.
MEMBERSHIP_TOLERANCE = 1e-12

# Velocities handed to TangentVector may carry this much non-tangency
# before we refuse them (integrator round-off is far below this).
TANGENCY_TOLERANCE = 1e-9


def inner(a, b, sigma: int) -> float:
    """Signed inner product: a.b with the z*z term multiplied by sigma."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + sigma * a[3] * b[3])


def _check_sigma(sigma: int) -> None:
    if sigma not in (SPHERE, HYPERBOLIC):
        raise ConstraintViolationError(f"sigma must be +1 or -1, got {sigma!r}", field="sigma")


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A point of S3 (sigma=+1) or H3 (sigma=-1), stored as a 4-vector.

    Coordinates are normalized on construction so that
    ``inner(coords, coords, sigma) == sigma`` up to round-off; callers
    are never trusted to pass exactly-normalized input. Hyperbolic
    points must lie on the upper sheet (z > 0); lower-sheet input is
    rejected rather than reflected.
    """

    coords: np.ndarray
    sigma: int = SPHERE

    def __post_init__(self):
        _check_sigma(self.sigma)
        q = np.asarray(self.coords, dtype=float).reshape(4).copy()
        norm2 = inner(q, q, self.sigma)
        if self.sigma == SPHERE:
            if norm2 <= 0.0:
                raise ConstraintViolationError("cannot normalize a zero 4-vector onto S3")
            q /= np.sqrt(norm2)
        else:
            if norm2 >= 0.0:
                raise ConstraintViolationError(
                    f"4-vector with q.q = {norm2:.3e} >= 0 does not point into H3"
                )
            q /= np.sqrt(-norm2)
            if q[3] <= 0.0:
                raise ConstraintViolationError(
                    "hyperbolic points must satisfy z > 0 (upper sheet); "
                    "refusing to reflect a lower-sheet point"
                )
        q.flags.writeable = False
        object.__setattr__(self, "coords", q)

    def inner_with(self, other: "ManifoldPoint") -> float:
        if self.sigma != other.sigma:
            raise ConstraintViolationError("points live on different manifolds (sigma mismatch)")
        return inner(self.coords, other.coords, self.sigma)

    def __eq__(self, other):
        return (
            isinstance(other, ManifoldPoint)
            and self.sigma == other.sigma
            and np.array_equal(self.coords, other.coords)
        )


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A vector attached at ``base`` with ``base . v = 0`` (signed product).

    Used for velocities; construction checks tangency to within
    TANGENCY_TOLERANCE and refuses anything worse. Use
    :func:`tangent_project` to build one from an arbitrary 4-vector.
    """

    base: ManifoldPoint
    coords: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=float).reshape(4).copy()
        defect = abs(inner(self.base.coords, v, self.base.sigma))
        scale = max(1.0, float(np.max(np.abs(v))))
        if defect > TANGENCY_TOLERANCE * scale:
            raise ConstraintViolationError(
                f"vector is not tangent at its base point (q.v = {defect:.3e})"
            )
        v.flags.writeable = False
        object.__setattr__(self, "coords", v)


def tangent_project(p: ManifoldPoint, v) -> TangentVector:
    """Remove from v its signed component along p: r = v - sigma (p.v) p.

    The result satisfies p . r = 0 exactly up to round-off, and the map
    is idempotent.
    """
    v = np.asarray(v, dtype=float).reshape(4)
    r = v - p.sigma * inner(p.coords, v, p.sigma) * p.coords
    return TangentVector(p, r)


def distance(a: ManifoldPoint, b: ManifoldPoint) -> float:
    """Geodesic distance: arccos(a.b) on S3, arccosh(-a.b) on H3.

    Inverse-trig arguments within CLAMP_TOLERANCE of the domain edge are
    clamped (round-off near coincident or antipodal points must not
    produce NaN); arguments beyond that raise ConstraintViolationError.
    """
    if a.sigma != b.sigma:
        raise ConstraintViolationError("distance requires both points on the same manifold")
    d = inner(a.coords, b.coords, a.sigma)
    if a.sigma == SPHERE:
        if abs(d) > 1.0 + CLAMP_TOLERANCE:
            raise ConstraintViolationError(
                f"spherical inner product {d!r} is outside [-1, 1] beyond tolerance"
            )
        return float(np.arccos(np.clip(d, -1.0, 1.0)))
    arg = -d
    if arg < 1.0 - CLAMP_TOLERANCE:
        raise ConstraintViolationError(
            f"hyperbolic distance argument {arg!r} is below 1 beyond tolerance"
        )
    return float(np.arccosh(max(arg, 1.0)))


def hopf(p: ManifoldPoint) -> np.ndarray:
    """Hopf map S3 -> S2.

    (w,x,y,z) maps to (w^2+x^2-y^2-z^2, 2(wz+xy), 2(xz-wy)); the image
    always has unit Euclidean norm, and every circle fibre collapses to
    a single point. Under this formula the circle {w=x=0} lands on
    (-1,0,0) and the circle {y=z=0} on (+1,0,0).
    """
    if p.sigma != SPHERE:
        raise ConstraintViolationError("the Hopf map is defined on S3 only")
    w, x, y, z = p.coords
    return np.array([w * w + x * x - y * y - z * z, 2.0 * (w * z + x * y), 2.0 * (x * z - w * y)])


@dataclass(frozen=True, eq=False)
class GreatCircle:
    """Great circle of S3: {cos(s) u + sin(s) v} for orthonormal u, v."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(4).copy()
        v = np.asarray(self.v, dtype=float).reshape(4).copy()
        if (
            abs(inner(u, u, SPHERE) - 1.0) > MEMBERSHIP_TOLERANCE
            or abs(inner(v, v, SPHERE) - 1.0) > MEMBERSHIP_TOLERANCE
            or abs(inner(u, v, SPHERE)) > MEMBERSHIP_TOLERANCE
        ):
            raise ConstraintViolationError("great circle spanning vectors must be orthonormal")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def point_at(self, s: float) -> ManifoldPoint:
        return ManifoldPoint(np.cos(s) * self.u + np.sin(s) * self.v, SPHERE)

    def sample(self, n: int) -> list[ManifoldPoint]:
        return [self.point_at(s) for s in np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)]


def complementary_pair() -> tuple[GreatCircle, GreatCircle]:
    """The standard complementary pair: C1 = {w=x=0}, C2 = {y=z=0}.

    Every point of one circle is orthogonal to every point of the
    other, so all cross distances equal pi/2 and the two circles form a
    Hopf link.
    """
    c1 = GreatCircle(np.array([0.0, 0.0, 1.0, 0.0]), np.array([0.0, 0.0, 0.0, 1.0]))
    c2 = GreatCircle(np.array([1.0, 0.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0, 0.0]))
    return c1, c2


def _equatorial_basis(pole: np.ndarray) -> np.ndarray:
    # Orthonormal basis of the hyperplane orthogonal to the pole, built
    # from the standard axes so that axis-aligned poles keep the
    # remaining coordinates unchanged.
    k = int(np.argmax(np.abs(pole)))
    basis = []
    for j in range(4):
        if j == k:
            continue
        e = np.zeros(4)
        e[j] = 1.0
        e = e - np.dot(e, pole) * pole
        for b in basis:
            e = e - np.dot(e, b) * b
        e /= np.linalg.norm(e)
        basis.append(e)
    return np.array(basis)


def stereographic(p: ManifoldPoint, pole: ManifoldPoint) -> np.ndarray:
    """Stereographic projection of S3 from ``pole`` onto the equatorial
    3-space orthogonal to it, returned as 3 coordinates in a fixed
    orthonormal basis of that space.

    For an axis-aligned pole the basis is the remaining coordinate axes
    in order, so equatorial points project to themselves.
    """
    if p.sigma != SPHERE or pole.sigma != SPHERE:
        raise ConstraintViolationError("stereographic projection is defined on S3 only")
    n = pole.coords
    t = float(np.dot(p.coords, n))
    if 1.0 - t < 1e-12:
        raise ProjectionSingularityError("point coincides with the projection pole")
    u = (p.coords - t * n) / (1.0 - t)
    return _equatorial_basis(n) @ u


def stereographic_inverse(u3, pole: ManifoldPoint) -> ManifoldPoint:
    """Inverse of :func:`stereographic` (same pole, same basis)."""
    u3 = np.asarray(u3, dtype=float).reshape(3)
    n = pole.coords
    v = _equatorial_basis(n).T @ u3
    s = float(np.dot(u3, u3))
    return ManifoldPoint(((s - 1.0) * n + 2.0 * v) / (s + 1.0), SPHERE)


def random_point(sigma: int = SPHERE, rng: np.random.Generator | None = None) -> ManifoldPoint:
    """Uniform random point: normalized 4D Gaussian on S3; for H3 a
    Gaussian (w,x,y) lifted to the upper sheet (convenience sampler for
    tests, not uniform in any canonical measure)."""
    _check_sigma(sigma)
    rng = rng or np.random.default_rng()
    if sigma == SPHERE:
        return ManifoldPoint(rng.standard_normal(4), SPHERE)
    wxy = rng.standard_normal(3)
    z = np.sqrt(1.0 + np.dot(wxy, wxy))
    return ManifoldPoint(np.array([*wxy, z]), HYPERBOLIC)


def random_rotation(rng: np.random.Generator | None = None) -> np.ndarray:
    """Haar-random SO(4) matrix (QR of a Gaussian, sign-fixed, det +1)."""
    rng = rng or np.random.default_rng()
    m = rng.standard_normal((4, 4))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
