"""Numerical perimeter and surface measures in finite-dimensional Gaussian spaces."""

__version__ = "0.1.0"

from .gaussian import GaussianSpace, CoordinateSplit, SampleBatch, gauss_density, derive_rng
from .fields import TestField
from .sets import (
    ImplicitSet,
    SectionSpec,
    complement,
    empty_set,
    full_set,
    intersection,
    make_ball,
    make_box,
    make_half_space,
    make_segment,
    section,
    union,
)
from .perimeter import (
    PerimeterEstimate,
    gauss_green_residual,
    maximize_perimeter,
    surface_perimeter_oracle,
)
from .hausdorff import (
    HausdorffEstimate,
    PointCloud,
    boundary_cloud,
    chart_cloud,
    hausdorff_gauss,
    spherical_hausdorff,
    unit_ball_volume,
)
from .boundary import BoundaryLabel, classify, density_profile, stabilized_boundary_test
from .slicing import monotonicity_report, rho_F, rho_limit, slice_perimeter_identity
from .wiener import (
    DomainSpec,
    PathDiscretization,
    brownian_from_coeffs,
    convex_boundary_audit,
    path_event_set,
    perimeter_growth,
)
from .config import ExperimentConfig, load_config
from .harness import ResultRecord, run, verify_suite

__all__ = [
    "GaussianSpace",
    "CoordinateSplit",
    "SampleBatch",
    "TestField",
    "gauss_density",
    "derive_rng",
    "ImplicitSet",
    "SectionSpec",
    "make_half_space",
    "make_ball",
    "make_box",
    "make_segment",
    "empty_set",
    "full_set",
    "complement",
    "union",
    "intersection",
    "section",
    "PerimeterEstimate",
    "maximize_perimeter",
    "surface_perimeter_oracle",
    "gauss_green_residual",
    "PointCloud",
    "HausdorffEstimate",
    "hausdorff_gauss",
    "boundary_cloud",
    "chart_cloud",
    "spherical_hausdorff",
    "unit_ball_volume",
    "BoundaryLabel",
    "classify",
    "density_profile",
    "stabilized_boundary_test",
    "rho_F",
    "rho_limit",
    "monotonicity_report",
    "slice_perimeter_identity",
    "DomainSpec",
    "PathDiscretization",
    "brownian_from_coeffs",
    "path_event_set",
    "perimeter_growth",
    "convex_boundary_audit",
    "ExperimentConfig",
    "load_config",
    "ResultRecord",
    "run",
    "verify_suite",
    "__version__",
]
