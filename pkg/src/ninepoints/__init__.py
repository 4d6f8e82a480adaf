"""Exact computations with fat points in projective space and nine points on plane cubics."""

from ninepoints.linalg import GF, QQ, ExactMatrix, Field, Fp, nullspace, rank
from ninepoints.projective import (
    PointConfiguration,
    ProjectivePoint,
    apply_pgl,
    general_position,
    hasse_deriv_eval,
    monomials,
    normalize,
    pgl_standard_frame,
)
from ninepoints.fatpoints import (
    alpha_t,
    conditions_matrix,
    dim_symbolic_component,
    euler_char_nine,
    h1_nine,
    hilbert_table,
)
from ninepoints.cubic import (
    GroupContext,
    PlaneCubic,
    TorsionReport,
    divisor_class,
    enumerate_points,
    fit_cubic,
    gamma,
    generate_torsion_config,
    is_smooth,
    lclass,
    third_intersection,
    torsion_order,
)
from ninepoints.nineverify import predict_h0, support_experiment, verify_config

__version__ = "0.1.0"
