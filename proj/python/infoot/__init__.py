from ._core import (
    Error,
    ValidationError,
    __version__,
    barycentric_project,
    conditional_project,
    exact_assignment,
    importance_weights,
    mi_gradient,
    mutual_information,
    pairwise_distances,
    run_cli,
    sinkhorn,
    solve_fused_infoot,
    solve_infoot,
)

__all__ = [
    "Error",
    "ValidationError",
    "__version__",
    "barycentric_project",
    "conditional_project",
    "exact_assignment",
    "importance_weights",
    "mi_gradient",
    "mutual_information",
    "pairwise_distances",
    "run_cli",
    "sinkhorn",
    "solve_fused_infoot",
    "solve_infoot",
]
