"""Dense numerical cross-checks for the closed-form calculators."""

from ..quadrature import QuadratureError, character, haar_class_quadrature
from .channels import (
    KrausChannel,
    MeasurePrepare,
    build_isometry_n2,
    cg_coefficient,
    clone_discard_channel,
    dicke_embedding,
    isometry_covariance_residual,
    isometry_fidelity_numeric,
    mp_channel_fidelity_numeric,
    single_copy_fidelity_numeric,
)
from .rotations import RotationParam, haar_euler_quadrature, spin_matrices, wigner_d
from .states import (
    DimensionCapError,
    OracleError,
    bell_matrix,
    bell_state,
    multiplicity_numeric,
    sector_weights_numeric,
)

__all__ = [
    "DimensionCapError",
    "KrausChannel",
    "MeasurePrepare",
    "OracleError",
    "QuadratureError",
    "RotationParam",
    "bell_matrix",
    "bell_state",
    "build_isometry_n2",
    "cg_coefficient",
    "character",
    "clone_discard_channel",
    "dicke_embedding",
    "haar_class_quadrature",
    "haar_euler_quadrature",
    "isometry_covariance_residual",
    "isometry_fidelity_numeric",
    "mp_channel_fidelity_numeric",
    "multiplicity_numeric",
    "sector_weights_numeric",
    "single_copy_fidelity_numeric",
    "spin_matrices",
    "wigner_d",
]
