"""Exact rational circle families with certified girth and chromatic bounds."""

from .budget import Budget, DEFAULT_BUDGET
from .builder import (
    Constellation,
    DirectionSet,
    Provenance,
    base_odd_cycle,
    choose_R,
    choose_directions,
    extract_template,
    induction_step_tangency,
    induction_step_theta,
    large_circle,
    small_circle,
    tangency_constraints,
    theta_template,
    verify_constellation,
)
from .gallai import (
    CombinatorialLine,
    Constraint,
    GallaiCertificate,
    HomotheticCopy,
    Template,
    berge_girth,
    enumerate_copies,
    enumerate_lines,
    find_mono_line,
    is_generalized_line,
    lift_gallai,
    proportional,
    sample_gamma,
    sparsify,
    verify_certificate,
    verify_ramsey,
    zeta,
)
from .geometry import (
    Circle,
    CosAngle,
    HomotheticMap,
    HorizontalLine,
    apply_homothety,
    concentric,
    externally_tangent,
    internally_tangent,
    intersect_at_angle,
    invert_circle,
    invert_line,
    line_circle_angle,
    tangency_point,
)
from .graphs import (
    Graph,
    chromatic_number,
    girth,
    is_k_colorable,
    tangency_graph,
    theta_graph,
    verify_structure,
)

__version__ = "0.1.0"
