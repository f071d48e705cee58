"""Weighted Bergman kernels of planar domains: closed forms, quadrature-based
numeric kernels, and the boundary-asymptotics experiment suite."""

from ._core import (  # noqa: F401
    AdmissibilityReport,
    AffineMap,
    BasisSpec,
    ClosedKernel,
    Disc,
    Domain,
    MobiusMap,
    NumericKernel,
    NumericParams,
    PixelMidpoint,
    PolarGauss,
    Rect,
    __version__,
    assemble_gram,
    boundary_value,
    build_kernel,
    check_admissible_class,
    closed_unweighted_kernel,
    constant_weight_scale,
    contains,
    cor12_product,
    cor12_sum,
    corollary_lambda,
    delta_power_bound,
    disc_defining_function,
    distance_to_boundary,
    dpower_asymptotic,
    evaluate_weight,
    extremal_value,
    fitted_intercept,
    hausdorff_convergence_check,
    localization_experiment,
    pixel_region,
    ramadanov_experiment,
    rectangle_grid,
    reproducing_check,
    riemann_convergence,
    riemann_map_to_H,
    run_config,
    scaling_experiment,
    scaling_map,
    thm11_ratio,
    transport,
    Weight,
)
