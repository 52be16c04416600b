"""Curvature of curves and tensor-product surfaces built from linear ODE solutions."""

from .errors import (
    ContractViolation,
    DegenerateMetric,
    DegenerateWedge,
    HypothesisViolation,
    NonFiniteSample,
    NonPositiveImaginary,
    OdeSurfaceError,
    PreconditionViolation,
    RepeatedRoot,
    TooSmall,
    ZeroVelocity,
)
from .exterior import (
    ScaledScalar,
    ScaledVector,
    dot,
    gram_inner_pair,
    gram_inner_triple,
    wedge2_norm,
    wedge3_norm,
)
from .functionals import (
    BoundCheckReport,
    BoundaryLimitRow,
    DecayProfile,
    GaussBonnetReport,
    LpDiagnostic,
    abs_theta_total,
    boundary_limit_check,
    check_kappa_bound,
    check_total_gauss_bound,
    decay_profile,
    gauss_bonnet_check,
    gauss_total,
    kappa_total,
    mean_curvature_lp,
    partial_volume,
    theta_total,
    volume_total,
)
from .odecurve import (
    CurveJet,
    DominanceReport,
    LiteralCurve,
    RootSpectrum,
    classify_dominance,
    eval_jet,
    kappa_at,
    kappa_integrand,
    theta_at,
    theta_integrand,
    validate_spectrum,
)
from .quadrature import IntegralResult, QuadConfig, integrate_line, integrate_plane
from .surface import (
    SurfaceJet,
    SurfaceSpec,
    eval_surface_jet,
    gauss_curvature_at,
    gauss_density_at,
    geodesic_curvature_edge,
    h_ratio_diagnostic,
    mean_curvature_norm_at,
)

__version__ = "0.1.0"
