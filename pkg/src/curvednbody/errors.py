"""Exception hierarchy shared by all curvednbody modules.

The CLI maps these onto exit codes: validation problems exit 2,
singularities exit 3, I/O failures exit 4.
"""


class CurvedNBodyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CurvedNBodyError):
    """Invalid parameters, malformed configuration, or a failed
    construction-time check (e.g. a closed-form orbit whose residual
    does not vanish).

    ``field`` optionally names the offending parameter so CLI error
    reports can point at it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConstraintViolationError(ValidationError):
    """A quantity violates a manifold constraint beyond tolerance:
    a point off the sphere/hyperboloid, a non-tangent velocity, a
    distance argument outside its domain, mismatched curvature signs.
    """


class SingularityError(CurvedNBodyError):
    """Two bodies are collisional or (on the sphere) antipodal, so the
    force law blows up.

    Attributes
    ----------
    pair : tuple or None
        Body indices (i, j), or (i, None) when a test point hits body i.
    kind : str
        "collision" or "antipodal".
    time : float or None
        Simulation time at which the singularity was detected.
    partial : TrajectoryRecord or None
        For integration failures, the trajectory accumulated before the
        blow-up (diagnostics).
    """

    def __init__(self, message, pair=None, kind="collision", time=None, partial=None):
        super().__init__(message)
        self.pair = pair
        self.kind = kind
        self.time = time
        self.partial = partial


class ProjectionSingularityError(CurvedNBodyError):
    """Stereographic projection evaluated at (or too close to) its pole."""

    def __init__(self, message, rows=None):
        super().__init__(message)
        self.rows = rows or []


class StepRejectionError(CurvedNBodyError):
    """Pre-projection constraint drift of one integration step exceeded
    the configured bound; retry with a smaller step size."""


class NotARigidRotationError(CurvedNBodyError):
    """A trajectory handed to the rotation-fitting routine is not, within
    tolerance, generated by a fixed one-parameter rotation."""

    def __init__(self, message, reconstruction_error=None):
        super().__init__(message)
        self.reconstruction_error = reconstruction_error
