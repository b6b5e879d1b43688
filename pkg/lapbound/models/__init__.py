"""lapbound - immutable domain models"""

from .complex import (
    EMPTY_FACE,
    Graph,
    SigmaPartition,
    Simplex,
    SimplicialComplex,
    make_simplex,
)
from .matrix import (
    BoundaryMatrix,
    IntegerMatrix,
    LaplacianBundle,
    Spectrum,
    SymmetricMatrix,
)

__all__ = [
    "EMPTY_FACE",
    "BoundaryMatrix",
    "Graph",
    "IntegerMatrix",
    "LaplacianBundle",
    "SigmaPartition",
    "Simplex",
    "SimplicialComplex",
    "Spectrum",
    "SymmetricMatrix",
    "make_simplex",
]
