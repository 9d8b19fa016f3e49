"""Discrete penalized elastic energy on planar curve networks."""

__version__ = "0.1.0"

from .bounds import (
    PiecewiseClosedCurve,
    amgm_energy_bound,
    drop_bound_check,
    gauss_bonnet_check,
    pair_bound_check,
    pair_loop,
    tangent_gap_bound,
    theta_lower_bound_check,
    total_abs_curvature,
    turning_cauchy_schwarz,
)
from .energy import (
    EnergyReport,
    elastic_energy,
    equipartition_defect,
    optimal_rescale,
    penalized_energy,
    scaling_identity_check,
)
from .geometry import (
    DiscreteCurve,
    VertexAngleSet,
    edge_tangents,
    external_angle,
    polyline_length,
    resample_uniform,
    vertex_curvature,
)
from .minimize import (
    OptimizationConfig,
    OptimizationResult,
    discrete_gradient,
    injectivity_report,
    minimize,
    minimize_multilevel,
    minimize_symmetric_double_drop,
    recovery_sequence,
)
from .networks import (
    Junction,
    Network,
    ValidationReport,
    deserialize,
    generalized_bubble_energy,
    load_json,
    make_circle,
    make_degenerate_figure_eight,
    make_ellipse,
    make_generalized_bubble,
    make_standard_double_bubble,
    make_symmetric_double_drop,
    make_teardrop,
    optimal_bubble_radius,
    save_json,
    serialize,
    validate,
)
from .stationarity import (
    ResidualReport,
    criticality_audit,
    el_residual,
    junction_residuals,
)
