from .geometry import Side, ShellGeometry, ShellScalar, ShellField, chebyshev_lobatto
from .operators import (
    EnergyReport,
    barotropic_average,
    barotropic_average_scalar,
    shell_vector_calculus,
    cartesian_gradient,
    vector_laplacian,
    neumann_potential,
    shell_leray_project,
    energy_report,
    averaging_commutation_residual,
    averaged_viscosity_residual,
    curlcurl_average_residual,
    averaged_divergence_norm,
)
from .navier import (
    BoundaryData,
    TractionForms,
    navier_traction,
    lifting_matrix,
    lift_boundary_data,
    lifted_field,
    navier_residual,
    boundary_condition_residuals,
)
from .fields import (
    manufactured_rotational,
    manufactured_navier_field,
    rigid_rotation,
    random_rotational_tangent,
    random_shell_field,
)

__all__ = [
    "Side",
    "ShellGeometry",
    "ShellScalar",
    "ShellField",
    "chebyshev_lobatto",
    "EnergyReport",
    "barotropic_average",
    "barotropic_average_scalar",
    "shell_vector_calculus",
    "cartesian_gradient",
    "vector_laplacian",
    "neumann_potential",
    "shell_leray_project",
    "energy_report",
    "averaging_commutation_residual",
    "averaged_viscosity_residual",
    "curlcurl_average_residual",
    "averaged_divergence_norm",
    "BoundaryData",
    "TractionForms",
    "navier_traction",
    "lifting_matrix",
    "lift_boundary_data",
    "lifted_field",
    "navier_residual",
    "boundary_condition_residuals",
    "manufactured_rotational",
    "manufactured_navier_field",
    "rigid_rotation",
    "random_rotational_tangent",
    "random_shell_field",
]
