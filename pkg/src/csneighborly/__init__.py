"""csneighborly: exact construction and certification of centrally
symmetric 2-neighborly polytopes with 2^(d-1)+2 vertices."""

__version__ = "0.1.0"

from .bounds import (
    BoundsTable,
    bounds_table,
    edge_bounds,
    three_neighborly_vertex_cap,
    vertex_range,
)
from .certify import (
    AntipodalReport,
    EdgeReport,
    FaceCertificate,
    FaceLattice,
    TheoremReport,
    TwoNeighborlyReport,
    brute_force_face_lattice,
    certify_theorem,
    edge_certificate_direct,
    is_antipodal_set,
    is_edge,
    is_two_neighborly,
    theorem_report_json,
    verify_certificate,
    vertex_certificate,
)
from .construction import (
    ConstructionError,
    ConstructionParams,
    ConstructionRun,
    ConstructionTrace,
    PairTrace,
    base_angle_families,
    base_set,
    check_base_angles,
    construct,
    default_apex_height,
    fixed_pair_invariant,
    norm_radius_bound,
    safety_radius,
)
from .fileio import (
    FormatError,
    format_point_set,
    load_point_set,
    parse_point_set,
    save_point_set,
    trace_json,
)
from .geometry import (
    AlmostAcuteReport,
    CsReport,
    GeometryError,
    Point,
    PointSet,
    PointSetError,
    Scalar,
    TripleViolation,
    acute_margin,
    angle_slack,
    dot,
    is_acute_angle,
    is_acute_set,
    is_almost_acute,
    is_centrally_symmetric,
    norm_sq,
    point,
    spans,
)
from .linprog import LPProblem, LPResult, PivotLimitError, lp_feasible, make_problem

__all__ = [
    "__version__",
    "AlmostAcuteReport",
    "AntipodalReport",
    "BoundsTable",
    "ConstructionError",
    "ConstructionParams",
    "ConstructionRun",
    "ConstructionTrace",
    "CsReport",
    "EdgeReport",
    "FaceCertificate",
    "FaceLattice",
    "FormatError",
    "GeometryError",
    "LPProblem",
    "LPResult",
    "PairTrace",
    "PivotLimitError",
    "Point",
    "PointSet",
    "PointSetError",
    "Scalar",
    "TheoremReport",
    "TripleViolation",
    "TwoNeighborlyReport",
    "acute_margin",
    "angle_slack",
    "base_angle_families",
    "base_set",
    "bounds_table",
    "brute_force_face_lattice",
    "certify_theorem",
    "check_base_angles",
    "construct",
    "default_apex_height",
    "dot",
    "edge_bounds",
    "edge_certificate_direct",
    "fixed_pair_invariant",
    "format_point_set",
    "is_acute_angle",
    "is_acute_set",
    "is_almost_acute",
    "is_antipodal_set",
    "is_centrally_symmetric",
    "is_edge",
    "is_two_neighborly",
    "load_point_set",
    "lp_feasible",
    "make_problem",
    "norm_radius_bound",
    "norm_sq",
    "parse_point_set",
    "point",
    "safety_radius",
    "save_point_set",
    "spans",
    "theorem_report_json",
    "three_neighborly_vertex_cap",
    "trace_json",
    "verify_certificate",
    "vertex_certificate",
    "vertex_range",
]
