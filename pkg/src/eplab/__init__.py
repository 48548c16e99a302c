"""Numerical laboratory for a pseudo-Hermitian impurity integrable structure.

Submodules
----------
numerics     dense complex linear-algebra substrate
impurity     2x2 pseudo-Hermitian block, spectral and defectiveness data
tl_algebra   contact algebra, Baxterized R-matrices, transfer hierarchy
bethe        Breit-Wigner Bethe system, Gaudin diagnostics, monodromy
schur        Hermitian block models and the emergent driven block
cli          scenario runner with machine-readable reports and figures
"""

from . import bethe, impurity, numerics, schur, tl_algebra

__version__ = "0.1.0"

__all__ = ["numerics", "impurity", "tl_algebra", "bethe", "schur",
           "__version__"]
