"""Power means, convex bodies, kernel convolutions, and concavity checks."""

__version__ = "0.1.0"

from .bbl import BBLInstance, sup_convolution, verify_bbl
from .concavity import (
    CheckConfig,
    ConcavityReport,
    check_p_concavity,
    check_parabolic_p_concavity,
    check_quasi_concavity_superlevel,
    classify_equality,
)
from .convolve import (
    ConvolutionField,
    ConvolutionResult,
    HeatIndicatorField,
    PoissonIndicatorField,
    QuadratureSpec,
    convolve_at,
    gauss_weierstrass_integral,
    oracle_P_interval,
    oracle_W_interval,
    poisson_integral,
)
from .fields import (
    GaussWeierstrassKernel,
    GaussWeierstrassSlice,
    IndicatorField,
    KappaExpKernel,
    KappaPowerKernel,
    PoissonKernel,
    PoissonSlice,
    RadialProfile,
    TentField,
    conjugate0,
    conjugate0_inverse,
    field_from_json,
    lift,
    radialize,
    shifted,
    sigma_sphere,
)
from .geometry import (
    Ball,
    Box,
    ConvexBody,
    ConvexCone,
    CylinderRegion,
    HalfSpace,
    Interval,
    Polytope,
    SpaceTimeBox,
    body_from_json,
    check_parabolic_convexity,
    core_complement_witness,
    coupling_core,
    interior_witness_outside,
    minkowski_combine,
    straightening_chart,
    support_of_combination,
    time_scaled_region,
)
from .means import (
    INF,
    NEG_INF,
    as_exponent,
    bbl_exponent,
    check_product_inequality,
    holder_exponent,
    mean_p,
)
from .optimize import MaxProblem, MaxResult, maximize, regiomontanus

__all__ = [
    "__version__",
    "INF",
    "NEG_INF",
    "as_exponent",
    "bbl_exponent",
    "check_product_inequality",
    "holder_exponent",
    "mean_p",
    "ConvexBody",
    "Interval",
    "Box",
    "Ball",
    "Polytope",
    "HalfSpace",
    "ConvexCone",
    "SpaceTimeBox",
    "CylinderRegion",
    "minkowski_combine",
    "support_of_combination",
    "coupling_core",
    "core_complement_witness",
    "interior_witness_outside",
    "time_scaled_region",
    "straightening_chart",
    "check_parabolic_convexity",
    "body_from_json",
    "sigma_sphere",
    "IndicatorField",
    "TentField",
    "GaussWeierstrassSlice",
    "PoissonSlice",
    "GaussWeierstrassKernel",
    "PoissonKernel",
    "KappaExpKernel",
    "KappaPowerKernel",
    "RadialProfile",
    "radialize",
    "lift",
    "conjugate0",
    "conjugate0_inverse",
    "shifted",
    "field_from_json",
    "CheckConfig",
    "ConcavityReport",
    "check_p_concavity",
    "check_quasi_concavity_superlevel",
    "check_parabolic_p_concavity",
    "classify_equality",
    "QuadratureSpec",
    "ConvolutionResult",
    "ConvolutionField",
    "HeatIndicatorField",
    "PoissonIndicatorField",
    "convolve_at",
    "gauss_weierstrass_integral",
    "poisson_integral",
    "oracle_W_interval",
    "oracle_P_interval",
    "BBLInstance",
    "sup_convolution",
    "verify_bbl",
    "MaxProblem",
    "MaxResult",
    "maximize",
    "regiomontanus",
]
