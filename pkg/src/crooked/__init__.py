"""Crooked planes in Minkowski 2+1 space: disjointness criteria, one-parameter
isometry flows, foliation verification and a mesh intersection oracle."""

from .errors import (
    AxisCase,
    BadRegionParams,
    CrookedError,
    CrossingDirectors,
    CrossingPair,
    DegeneratePair,
    InvalidParams,
    NotDisjoint,
    NotLorentzOrthogonal,
    NotSpacelike,
    NotUltraparallel,
    ZeroDerivative,
)
from .flows import (
    Calibration,
    HyperbolicFlow,
    OrbitParams,
    ParabolicFlow,
    Region,
    calibrate,
    hyp_admits_asymptotic,
    hyp_admits_ultraparallel,
    hyp_director,
    hyp_linear,
    hyp_orbit,
    par_admits,
    par_director,
    par_linear,
    par_orbit,
    par_to_standard,
    region_classify,
)
from .minkowski import (
    Isometry,
    NullFrame,
    Point,
    apply,
    causal_class,
    compose,
    linear_class,
    lorentz_cross,
    lorentz_dot,
    negate_frame_law,
    null_frame,
)
from .oracle import OracleResult, TriangleMesh, mesh_crooked_plane, oracle_disjoint
from .planes import (
    CrookedPlane,
    cone_disjoint,
    consistently_oriented,
    contains_point,
    dg_disjoint,
    in_stem_quadrant,
    normalize_consistent,
    pair_class,
)
from .verify import (
    FoliationSpec,
    VerificationReport,
    check_normalized,
    infinitesimal_check,
    pairwise_check,
    verify,
)

__version__ = "0.1.0"
