"""Markoff-style descent on the cubic trace surfaces of the one-holed
torus and the four-holed sphere: reduction, orbit enumeration, class
numbers, exceptional loci, and matrix-level cross-checks."""

__version__ = "0.1.0"

from .surfaces import (  # noqa: F401
    APPROX,
    Cubic04,
    DomainMismatch,
    EXACT,
    Markoff11,
    MarkoffError,
    MoveMismatch,
    NonFiniteScalar,
    Point3,
    RelationViolation,
    boundary_trace_11,
    height,
    linf_height,
    make_cubic04,
    on_surface,
    residual,
)
from .moves import (  # noqa: F401
    Move,
    MoveWord,
    apply_move,
    apply_word,
    dehn_twist_04,
    dehn_twist_11,
    generators,
    normalize_11,
    parse_word,
)
from .trace_algebra import (  # noqa: F401
    Mat2,
    Pair,
    Quad,
    commutator_trace,
    f3_relations,
    fricke_coords,
    lift_twist_04,
    lift_twist_11,
    make_pair,
    make_quad,
    quad_to_04_point,
    trace_product_identity,
)
from .descent import (  # noqa: F401
    AConfig,
    DescentResult,
    ellipse_bound_04,
    min_bound_11,
    reduce_compact,
    reduce_min_complex_04,
    reduce_min_complex_11,
)
from .orbits import (  # noqa: F401
    Caps,
    OrbitReport,
    ParabolicLine,
    class_number,
    enumerate_points,
    equivalent,
    is_exceptional,
    lines_cover_point,
    orbit_bfs,
    parabolic_lines_11,
)
