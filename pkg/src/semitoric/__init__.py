"""Symplectic invariants of a coupled angular-momenta family on S2 x S2.

The package computes, for the one-parameter family

    L = z1 + 2 z2,
    H = (1-s) z1 + s z2 + 2 (1-s) s (x1 x2 + y1 y2),       s in [0, 1],

its number of focus-focus points, polygon invariant, heights, degree-2
series invariants, and twisting-index labels, by independent numerics
(quadrature, complete elliptic integrals, contour integration and series
inversion).
"""
from .actions import ActionRoute, ActionValue, action, basic_integrals, reduced_period, rotation_number
from .elliptic import carlson_rc, carlson_rf, carlson_rj, ellip_k, ellip_pi
from .errors import (
    AmbiguousMatchError,
    ConsistencyError,
    ContourError,
    ConvergenceError,
    DegenerateLevelError,
    DegenerateTransitionError,
    DomainError,
    InvalidMoveError,
    SemitoricError,
    SeparatrixPoleError,
    UnsupportedOrderError,
    ValidationError,
    WindowError,
)
from .model import (
    S_MINUS,
    S_PLUS,
    PhasePoint,
    SystemParams,
    chart_to_cartesian,
    classify_fixed_points,
    momentum_map,
    system_params,
)
from .polygons import (
    Cut,
    WeightedPolygon,
    cut_shear,
    group_act,
    height_invariant,
    no_ff_polygon,
    shear,
    system_polygon,
)
from .reduced import (
    CurveType,
    ReducedLevel,
    classify_curve,
    quartic_coefficients,
    reduced_hamiltonian,
    reduced_level,
    separatrix_levels,
)
from .series import BivariateSeries, invert_second
from .taylor import (
    TaylorInvariant,
    desingularized_partials,
    normalize_representative,
    symmetry_transform,
    taylor_closed,
    taylor_numeric,
)
from .twisting import (
    ImageCloud,
    InvariantReport,
    MatchResult,
    down_cut_candidates,
    full_invariants,
    match_polygon,
    preferred_action,
    sample_privileged_image,
)
from .vanishing import (
    ContourSpec,
    birkhoff_normal_form,
    design_contour,
    imaginary_action,
    imaginary_period_rotation,
    j_series,
    z_closed_series,
)

__version__ = "0.1.0"
