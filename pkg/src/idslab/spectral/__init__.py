"""Eigenvalues, counting functions and heat kernels."""

from .boundary_table import BoundaryTable, boundary_sensitivity_table, heat_diagonal_at
from .chebyshev import (
    ChebyshevEstimate,
    chebyshev_coefficients,
    chebyshev_degree,
    chebyshev_heat_action,
    chebyshev_heat_trace,
    truncation_bound,
)
from .counting import (
    DistributionFunction,
    HeatTraceCurve,
    count_below,
    counting_function,
    heat_kernel_diagonal,
    heat_kernel_diagonals,
    heat_trace,
)
from .eigensolver import Method, Spectrum, Tridiagonal, eigenvalues, sturm_count, tridiagonalize

__all__ = [
    "BoundaryTable",
    "boundary_sensitivity_table",
    "heat_diagonal_at",
    "ChebyshevEstimate",
    "chebyshev_coefficients",
    "chebyshev_degree",
    "chebyshev_heat_action",
    "chebyshev_heat_trace",
    "truncation_bound",
    "DistributionFunction",
    "HeatTraceCurve",
    "count_below",
    "counting_function",
    "heat_kernel_diagonal",
    "heat_kernel_diagonals",
    "heat_trace",
    "Method",
    "Spectrum",
    "Tridiagonal",
    "eigenvalues",
    "sturm_count",
    "tridiagonalize",
]
