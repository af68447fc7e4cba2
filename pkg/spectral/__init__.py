from .spharm import (
    GaussGrid,
    SpectralScalar,
    GridScalar,
    build_grid,
    analyze,
    synthesize,
    analyze_values,
    synthesize_coeffs,
    synthesize_gradient,
    analyze_divcurl,
    laplace_beltrami,
    inverse_laplace_beltrami,
    fractional_laplacian,
    scalar_sobolev_norm,
    sobolev_weights,
    sobolev_interpolation_gap,
    l2_inner,
    grid_integral,
    real_harmonic,
    random_scalar,
    hermitian_symmetrize,
    degree_index,
    order_index,
    triangular_mask,
)
from .sphere_ops import (
    GridTangent,
    TangentField,
    surface_grad,
    surface_divcurl,
    hodge_decompose,
    synthesize_tangent,
    leray_project,
    zonal_project,
    zonal_project_spectral,
    apply_Lh,
    vector_sobolev_norm,
    hodge_laplacian,
    tangent_inner,
    product_grid,
)

__all__ = [
    "GaussGrid",
    "SpectralScalar",
    "GridScalar",
    "build_grid",
    "analyze",
    "synthesize",
    "analyze_values",
    "synthesize_coeffs",
    "synthesize_gradient",
    "analyze_divcurl",
    "laplace_beltrami",
    "inverse_laplace_beltrami",
    "fractional_laplacian",
    "scalar_sobolev_norm",
    "sobolev_weights",
    "sobolev_interpolation_gap",
    "l2_inner",
    "grid_integral",
    "real_harmonic",
    "random_scalar",
    "hermitian_symmetrize",
    "degree_index",
    "order_index",
    "triangular_mask",
    "GridTangent",
    "TangentField",
    "surface_grad",
    "surface_divcurl",
    "hodge_decompose",
    "synthesize_tangent",
    "leray_project",
    "zonal_project",
    "zonal_project_spectral",
    "apply_Lh",
    "vector_sobolev_norm",
    "hodge_laplacian",
    "tangent_inner",
    "product_grid",
]
