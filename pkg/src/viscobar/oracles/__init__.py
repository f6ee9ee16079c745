"""Independent verification solvers: finite elements and numerical
Laplace inversion.  Both are deliberately built from different formulas and
different numerics than the traveling-wave engine they check."""

from .fem import FemModel, build_fem, fem_solve
from .laplace import greens_laplace, laplace_invert_G, laplace_invert_U

__all__ = [
    "FemModel", "build_fem", "fem_solve",
    "greens_laplace", "laplace_invert_G", "laplace_invert_U",
]
