"""
lapbound - Dense Linear Algebra Service

Symmetric eigenvalues with a residual certificate, exact integer rank,
additive compound matrices, Gershgorin bounds and the k-subset eigenvalue
sum statistics S_{k,i}.
"""

import heapq
from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from lapbound.core.config import get_settings
from lapbound.core.exceptions import CapacityExceededError, NumericalError, ValidationError
from lapbound.core.logging import get_logger
from lapbound.models.matrix import IntegerMatrix, Spectrum, SymmetricMatrix

logger = get_logger(__name__)


def sym_eigenvalues(M: SymmetricMatrix, tol: Optional[float] = None) -> Spectrum:
    """
    All eigenvalues of ``M`` in ascending order.

    Args:
        M: Dense symmetric matrix
        tol: Relative residual tolerance (default ``EIGEN_TOL``)

    Returns:
        Spectrum whose ``residual_tol`` is max_i ||M v_i - l_i v_i|| / ||M||_F

    Raises:
        NumericalError: Non-finite entries or a residual above ``tol``
        CapacityExceededError: Order above ``MAX_DENSE_ORDER``
    """
    settings = get_settings()
    tol = settings.EIGEN_TOL if tol is None else tol
    if tol <= 0:
        raise ValidationError("eigen tolerance must be positive", field="tol")
    n = M.order
    if n < 1:
        raise ValidationError("cannot take the spectrum of an empty matrix")
    if n > settings.MAX_DENSE_ORDER:
        raise CapacityExceededError(
            "too large for dense eigensolve: matrix order", n, settings.MAX_DENSE_ORDER
        )
    if not np.all(np.isfinite(M.entries)):
        raise NumericalError("matrix has non-finite entries")

    values, vectors = np.linalg.eigh(M.entries)
    norm = M.frobenius_norm
    if norm == 0.0:
        return Spectrum(eigenvalues=values, residual_tol=0.0)

    residuals = np.linalg.norm(M.entries @ vectors - vectors * values, axis=0)
    relative = float(residuals.max()) / norm
    if relative > tol:
        raise NumericalError(
            "eigen-residual above tolerance",
            {"residual": relative, "tol": tol, "order": n},
        )
    return Spectrum(eigenvalues=values, residual_tol=relative)


def _rank_mod_p(entries: np.ndarray, p: int) -> int:
    """Gaussian elimination over F_p on int64 (p < 2^31 keeps products exact)."""
    A = np.mod(entries, p).astype(np.int64)
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nonzero = np.nonzero(A[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = np.nonzero(A[r + 1 :, c])[0] + r + 1
        if below.size:
            factors = A[below, c][:, None]
            A[np.ix_(below, np.arange(c, n))] = (
                A[np.ix_(below, np.arange(c, n))] - factors * A[r, c:]
            ) % p
        r += 1
    return r


def _rank_fraction_free(entries: np.ndarray) -> int:
    """Exact rank over Q by Bareiss fraction-free elimination on Python ints."""
    A = [[int(x) for x in row] for row in entries.tolist()]
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                A[i][j] = (A[r][c] * A[i][j] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
    return r


def integer_rank(M: IntegerMatrix) -> int:
    """
    Exact rank over the rationals.

    Computed modulo the first configured prime and re-verified modulo the
    second; a mismatch falls back to fraction-free elimination.
    """
    if M.rows == 0 or M.cols == 0:
        return 0
    p, q = get_settings().RANK_PRIMES
    first = _rank_mod_p(M.entries, p)
    second = _rank_mod_p(M.entries, q)
    if first == second:
        return first
    logger.warning("modular ranks disagree, using exact elimination", rank_p=first, rank_q=second)
    return _rank_fraction_free(M.entries)


def subsets_index(n: int, k: int) -> List[Tuple[int, ...]]:
    """Lexicographically sorted k-subsets of range(n)."""
    return list(combinations(range(n), k))


def transfer_sign(sigma: Tuple[int, ...], removed: int) -> int:
    """(sigma : sigma - {removed}) = (-1)^{|{v in sigma : v < removed}|}"""
    return -1 if sum(1 for v in sigma if v < removed) % 2 else 1


def additive_compound(M: SymmetricMatrix, k: int) -> SymmetricMatrix:
    """
    k-th additive compound M^[k] indexed by sorted k-subsets of [n].

    Diagonal entries are sums of diagonal entries of M; two subsets sharing
    k - 1 elements, differing by i in sigma and j in tau, carry
    (sigma:sigma&tau)(tau:sigma&tau) M(i, j).
    """
    n = M.order
    if not 1 <= k <= n:
        raise ValidationError(f"compound order must satisfy 1 <= k <= {n}, got {k}", field="k")
    cap = get_settings().MAX_COMPOUND_ORDER
    size = comb(n, k)
    if size > cap:
        raise CapacityExceededError("additive compound order", size, cap)

    subsets = subsets_index(n, k)
    position = {s: i for i, s in enumerate(subsets)}
    diag = np.diag(M.entries)
    C = np.zeros((size, size), dtype=np.float64)
    for a, sigma in enumerate(subsets):
        C[a, a] = float(diag[list(sigma)].sum())
        members = set(sigma)
        for i in sigma:
            rest = tuple(v for v in sigma if v != i)
            sign_sigma = transfer_sign(sigma, i)
            for j in range(n):
                if j in members:
                    continue
                tau = tuple(sorted(rest + (j,)))
                b = position[tau]
                if b <= a:
                    continue
                value = sign_sigma * transfer_sign(tau, j) * M.entries[i, j]
                C[a, b] = value
                C[b, a] = value
    return SymmetricMatrix(C)


def gershgorin_upper(M: SymmetricMatrix) -> float:
    """max_i (M(i,i) + sum_{j != i} |M(i,j)|), an upper bound on lambda_max."""
    if M.order == 0:
        return float("-inf")
    A = M.entries
    off = np.abs(A).sum(axis=1) - np.abs(np.diag(A))
    return float((np.diag(A) + off).max())


def _validate_subset_args(eigs: Sequence[float], k: int) -> np.ndarray:
    values = np.asarray(eigs, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("eigenvalue list must be a nonempty sequence")
    if not 1 <= k <= values.size:
        raise ValidationError(f"subset size must satisfy 1 <= k <= {values.size}, got {k}", field="k")
    return np.sort(values)


def iter_subset_sums(eigs: Sequence[float], k: int) -> Iterator[float]:
    """
    k-subset sums of ``eigs`` in nondecreasing order, as a multiset.

    Best-first search over index tuples seeded with the k smallest values;
    a successor advances one index by one position without colliding with
    the next index. Sums never decrease along successors, and every
    subset is reachable, so the heap pops subsets in sorted order.
    """
    values = _validate_subset_args(eigs, k)
    n = values.size
    start = tuple(range(k))
    heap: List[Tuple[float, Tuple[int, ...]]] = [(float(values[:k].sum()), start)]
    seen = {start}
    while heap:
        total, idx = heapq.heappop(heap)
        yield total
        for pos in range(k):
            nxt = idx[pos] + 1
            limit = idx[pos + 1] if pos + 1 < k else n
            if nxt >= limit:
                continue
            succ = idx[:pos] + (nxt,) + idx[pos + 1 :]
            if succ in seen:
                continue
            seen.add(succ)
            heapq.heappush(heap, (float(values[list(succ)].sum()), succ))


def enumerate_subset_sums(eigs: Sequence[float], k: int) -> np.ndarray:
    """All C(n, k) subset sums, sorted; the full-enumeration path."""
    values = _validate_subset_args(eigs, k)
    sums = np.fromiter(
        (values[list(s)].sum() for s in combinations(range(values.size), k)),
        dtype=np.float64,
        count=comb(values.size, k),
    )
    return np.sort(sums)


def smallest_subset_sums(
    eigs: Sequence[float], k: int, count: int, method: str = "auto"
) -> np.ndarray:
    """
    The ``count`` smallest k-subset sums, ascending.

    ``method`` is ``heap``, ``enumerate`` or ``auto`` (full enumeration while
    C(n, k) <= ENUMERATION_LIMIT, heap otherwise).
    """
    values = _validate_subset_args(eigs, k)
    total = comb(values.size, k)
    if not 0 <= count <= total:
        raise ValidationError(f"requested {count} sums out of {total}", field="count")
    if method == "auto":
        method = "enumerate" if total <= get_settings().ENUMERATION_LIMIT else "heap"
    if method == "enumerate":
        return enumerate_subset_sums(values, k)[:count]
    if method == "heap":
        stream = iter_subset_sums(values, k)
        return np.fromiter((next(stream) for _ in range(count)), dtype=np.float64, count=count)
    raise ValidationError(f"unknown subset-sum method {method!r}", field="method")


def s_stat(eigs: Sequence[float], k: int, i: int, method: str = "auto") -> float:
    """S_{k,i}: the i-th smallest k-subset sum (1-based, multiset semantics)."""
    values = _validate_subset_args(eigs, k)
    total = comb(values.size, k)
    if not 1 <= i <= total:
        raise ValidationError(f"rank i must satisfy 1 <= i <= {total}, got {i}", field="i")
    return float(smallest_subset_sums(values, k, i, method=method)[i - 1])


def count_subset_sums_at_most(
    eigs: Sequence[float], k: int, threshold: float, cushion: Optional[float] = None
) -> int:
    """
    |{A in C([n], k) : sum_{i in A} eigs_i <= threshold}|.

    The enumeration stops at the first sum above
    ``threshold + cushion * max(1, |threshold|)``.
    """
    count, _ = count_subset_sums_with_ties(eigs, k, threshold, cushion)
    return count


def count_subset_sums_with_ties(
    eigs: Sequence[float], k: int, threshold: float, cushion: Optional[float] = None
) -> Tuple[int, int]:
    """Count as above, plus how many counted sums lie within the cushion of the threshold."""
    cushion = get_settings().SUM_CUSHION if cushion is None else cushion
    values = _validate_subset_args(eigs, k)
    margin = cushion * max(1.0, abs(threshold))
    count = 0
    near = 0
    for total in iter_subset_sums(values, k):
        if total > threshold + margin:
            break
        count += 1
        if abs(total - threshold) <= margin:
            near += 1
    return min(count, comb(values.size, k)), near
