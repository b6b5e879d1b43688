"""
lapbound - Matrix Models

Dense matrix wrappers with their invariants checked at construction.
Arrays are copied and frozen (read-only) so instances can be shared
between threads and processes.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from lapbound.core.exceptions import IdentityViolationError, ValidationError
from lapbound.models.complex import Simplex


def _frozen(array: np.ndarray, dtype: type) -> np.ndarray:
    frozen = np.array(array, dtype=dtype, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Dense real symmetric matrix; symmetry is exact, not approximate."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = _frozen(self.entries, np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValidationError(f"matrix of shape {entries.shape} is not square")
        if not np.array_equal(entries, entries.T):
            raise ValidationError("matrix is not exactly symmetric")
        object.__setattr__(self, "entries", entries)

    @property
    def order(self) -> int:
        return int(self.entries.shape[0])

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries)) if self.order else 0.0

    def principal_submatrix(self, rows: np.ndarray) -> "SymmetricMatrix":
        return SymmetricMatrix(self.entries[np.ix_(rows, rows)])

    def equals(self, other: "SymmetricMatrix") -> bool:
        return np.array_equal(self.entries, other.entries)


@dataclass(frozen=True, eq=False)
class IntegerMatrix:
    """Dense integer matrix (boundary maps, integer Laplacians)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        raw = np.asarray(self.entries)
        if raw.ndim != 2:
            raise ValidationError(f"integer matrix must be 2-dimensional, got {raw.ndim}")
        if raw.size and raw.dtype.kind == "f" and not np.array_equal(raw, np.round(raw)):
            raise ValidationError("integer matrix has non-integral entries")
        object.__setattr__(self, "entries", _frozen(raw, np.int64))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def to_symmetric(self) -> SymmetricMatrix:
        return SymmetricMatrix(self.entries.astype(np.float64))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and the certified relative residual."""

    eigenvalues: np.ndarray
    residual_tol: float

    def __post_init__(self) -> None:
        values = _frozen(self.eigenvalues, np.float64)
        if values.size > 1 and np.any(np.diff(values) < 0):
            raise ValidationError("spectrum is not in ascending order")
        object.__setattr__(self, "eigenvalues", values)

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    def __getitem__(self, i: int) -> float:
        return float(self.eigenvalues[i])

    def nullity(self, scale: float, tol: float) -> int:
        """Count of eigenvalues below ``tol * scale`` in absolute value."""
        return int(np.sum(np.abs(self.eigenvalues) < tol * max(scale, 1.0)))


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Signed incidence matrix from X(k) (columns) to X(k-1) (rows)."""

    k: int
    matrix: IntegerMatrix
    row_faces: Tuple[Simplex, ...]
    col_faces: Tuple[Simplex, ...]

    def __post_init__(self) -> None:
        entries = self.matrix.entries
        if entries.shape != (len(self.row_faces), len(self.col_faces)):
            raise ValidationError("boundary matrix shape does not match its face lists")
        if entries.size and not np.all(np.isin(entries, (-1, 0, 1))):
            raise ValidationError("boundary entries must lie in {-1, 0, 1}")
        if entries.size and np.any(np.count_nonzero(entries, axis=0) != self.k + 1):
            raise ValidationError(f"every column of the {self.k}-boundary needs {self.k + 1} nonzeros")


@dataclass(frozen=True, eq=False)
class LaplacianBundle:
    """L_k together with its decomposition L_k = Q - P."""

    k: int
    L: SymmetricMatrix
    P: SymmetricMatrix
    Q: SymmetricMatrix
    built_from: str

    def __post_init__(self) -> None:
        if not np.array_equal(self.Q.entries - self.P.entries, self.L.entries):
            raise IdentityViolationError(
                "L_k = Q - P", {"k": self.k, "built_from": self.built_from}
            )
