"""curvednbody: the gravitational N-body problem on S3 and H3.

A toolkit for integrating the constrained equations of motion on the
unit 3-sphere and the hyperbolic 3-space, certifying closed-form
relative equilibria by residual substitution, monitoring the energy and
angular-momentum integrals, and searching numerically for
centre-of-mass-like points (points at rest or in uniform geodesic
motion under an orbit's rigid rotation).
"""

__version__ = "0.1.0"

from .com_analysis import (
    ComClassification,
    GeodesicPlane,
    RotationAction,
    SearchReport,
    Verdict,
    apply_action,
    classify_point,
    family_action,
    field_com_test,
    fit_action,
    search_com,
)
from .dynamics import (
    ConservedQuantities,
    SystemState,
    acceleration,
    angular_momentum,
    conserved_quantities,
    energy,
    force_function,
    gravitational_field,
    kinetic_energy,
    pair_denominator,
    residual,
)
from .errors import (
    ConstraintViolationError,
    CurvedNBodyError,
    NotARigidRotationError,
    ProjectionSingularityError,
    SingularityError,
    StepRejectionError,
    ValidationError,
)
from .families import (
    EulerianComTrajectory,
    FamilyKind,
    LagrangianParams,
    EulerianParams,
    OrbitFamily,
    PolygonPairParams,
    SixBodyParams,
    com_example_eulerian,
    com_examples_lagrangian,
    complementary_polygon_pair,
    complementary_six_body,
    eulerian_hyperbolic,
    lagrangian_circle_survey,
    lagrangian_elliptic,
    residual_profile,
)
from .geometry import (
    HYPERBOLIC,
    SPHERE,
    GreatCircle,
    ManifoldPoint,
    TangentVector,
    complementary_pair,
    distance,
    hopf,
    inner,
    random_point,
    random_rotation,
    stereographic,
    stereographic_inverse,
    tangent_project,
)
from .integrators import IntegratorConfig, TrajectoryRecord, integrate, step

__all__ = [
    "__version__",
    "SPHERE",
    "HYPERBOLIC",
    "ManifoldPoint",
    "TangentVector",
    "GreatCircle",
    "inner",
    "distance",
    "tangent_project",
    "hopf",
    "complementary_pair",
    "stereographic",
    "stereographic_inverse",
    "random_point",
    "random_rotation",
    "SystemState",
    "ConservedQuantities",
    "pair_denominator",
    "acceleration",
    "gravitational_field",
    "force_function",
    "kinetic_energy",
    "energy",
    "angular_momentum",
    "conserved_quantities",
    "residual",
    "FamilyKind",
    "OrbitFamily",
    "LagrangianParams",
    "EulerianParams",
    "SixBodyParams",
    "PolygonPairParams",
    "lagrangian_elliptic",
    "eulerian_hyperbolic",
    "complementary_six_body",
    "complementary_polygon_pair",
    "residual_profile",
    "com_examples_lagrangian",
    "lagrangian_circle_survey",
    "com_example_eulerian",
    "EulerianComTrajectory",
    "IntegratorConfig",
    "TrajectoryRecord",
    "step",
    "integrate",
    "RotationAction",
    "GeodesicPlane",
    "ComClassification",
    "Verdict",
    "SearchReport",
    "apply_action",
    "family_action",
    "fit_action",
    "classify_point",
    "search_com",
    "field_com_test",
    "CurvedNBodyError",
    "ValidationError",
    "ConstraintViolationError",
    "SingularityError",
    "ProjectionSingularityError",
    "StepRejectionError",
    "NotARigidRotationError",
]
