"""Solvable crypto-Hermitian chain models near an exceptional point."""
from .errors import (
    ConsistencyFailure,
    ConvergenceFailure,
    DimensionFailure,
    DivisionResidue,
    DomainError,
    InvariantBreach,
    MissingBounds,
    NotPositiveDefinite,
    PatternFailure,
    QcatError,
    ResidualR,
)
from .metric import (
    coefficient_matrices,
    dyson_hermitize,
    inner_product_s,
    ketkets,
    metric_at,
    metric_poly,
)
from .model import (
    EnergyList,
    ModelParams,
    MultiParamCoeffs,
    analytic_spectrum,
    build_chain,
    build_multiparam,
    build_qc_limit,
)
from .observables import reality_check, solve_at, solve_z_independent
from .oracle import char_poly, dense_eigen, matrix_power_norm

__version__ = "0.1.0"
