"""
lapbound - Laplacian Service

Signed boundary matrices, the combinatorial Laplacian built two independent
ways (from boundaries and from the explicit entry formula), its splitting
L_k = Q - P, graph Laplacians and reduced real Betti numbers.
"""

from enum import Enum
from typing import Dict, Iterator, List, NamedTuple

import numpy as np

from lapbound.core.exceptions import IdentityViolationError, ValidationError
from lapbound.core.logging import get_logger
from lapbound.models.complex import Graph, Simplex, SimplicialComplex, facets_of
from lapbound.models.matrix import (
    BoundaryMatrix,
    IntegerMatrix,
    LaplacianBundle,
    SymmetricMatrix,
)
from lapbound.services.complex_service import underlying_graph
from lapbound.services.linalg_service import integer_rank, subsets_index, transfer_sign

logger = get_logger(__name__)


class Adjacency(str, Enum):
    """How two k-faces sharing k vertices relate."""

    COFACE = "coface"  # sigma | tau is a (k+1)-face
    SIM1 = "sim1"  # not a coface, symmetric difference is a face
    SIM2 = "sim2"  # not a coface, symmetric difference is not a face


class FacePair(NamedTuple):
    sigma: Simplex
    tau: Simplex
    sign: int
    kind: Adjacency


def _check_dim(k: int) -> None:
    if k < 0:
        raise ValidationError(f"dimension must be >= 0, got {k}", field="k")


def lower_adjacent_pairs(X: SimplicialComplex, k: int) -> Iterator[FacePair]:
    """
    Ordered pairs (sigma, tau) of k-faces with |sigma & tau| = k.

    ``sign`` is (sigma : sigma&tau)(tau : sigma&tau); ``kind`` classifies
    the pair by face membership of sigma | tau and of the symmetric
    difference.
    """
    members_of = X.index(k)
    for sigma in X.faces(k):
        members = set(sigma)
        for w, rho in facets_of(sigma):
            sign_sigma = transfer_sign(sigma, w)
            for u in X.vertices:
                if u in members:
                    continue
                tau = tuple(sorted(rho + (u,)))
                if tau not in members_of:
                    continue
                sign = sign_sigma * transfer_sign(tau, u)
                if tuple(sorted(sigma + (u,))) in X:
                    kind = Adjacency.COFACE
                elif (min(w, u), max(w, u)) in X:
                    kind = Adjacency.SIM1
                else:
                    kind = Adjacency.SIM2
                yield FacePair(sigma, tau, sign, kind)


def boundary_matrix(X: SimplicialComplex, k: int) -> BoundaryMatrix:
    """
    d_k(X) with rows X(k-1) and columns X(k).

    Entry (sigma, tau) is (tau:sigma) = (-1)^{|{v in tau : v < u}|} for
    the vertex u of tau missing from sigma; for k = 0 the single row is the
    empty face and every entry is +1.
    """
    _check_dim(k)
    rows = X.faces(k - 1)
    cols = X.faces(k)
    row_index = X.index(k - 1)
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, tau in enumerate(cols):
        for u, sigma in facets_of(tau):
            D[row_index[sigma], j] = transfer_sign(tau, u)
    return BoundaryMatrix(k=k, matrix=IntegerMatrix(D), row_faces=rows, col_faces=cols)


def integer_laplacian(X: SimplicialComplex, k: int) -> IntegerMatrix:
    """L_k = d_{k+1} d_{k+1}^T + d_k^T d_k as an exact integer matrix."""
    down = boundary_matrix(X, k).matrix.entries
    up = boundary_matrix(X, k + 1).matrix.entries
    return IntegerMatrix(up @ up.T + down.T @ down)


def laplacian_from_boundaries(X: SimplicialComplex, k: int) -> SymmetricMatrix:
    return integer_laplacian(X, k).to_symmetric()


def laplacian_explicit(X: SimplicialComplex, k: int) -> SymmetricMatrix:
    """
    L_k from the entry formula: deg_X(sigma) + k + 1 on the diagonal,
    the sign product on pairs whose union is not a face, 0 elsewhere.
    """
    _check_dim(k)
    index = X.index(k)
    L = np.zeros((len(index), len(index)), dtype=np.float64)
    for sigma, i in index.items():
        L[i, i] = X.degree(sigma) + k + 1
    for pair in lower_adjacent_pairs(X, k):
        if pair.kind is not Adjacency.COFACE:
            L[index[pair.sigma], index[pair.tau]] = pair.sign
    return SymmetricMatrix(L)


def pq_decomposition(X: SimplicialComplex, k: int) -> LaplacianBundle:
    """
    Split L_k(X) = Q - P.

    P carries sum_v deg_G(v) - deg_X(sigma) on the diagonal and minus the
    sign product on sim1 pairs; Q carries sum_v deg_G(v) + k + 1 and the
    sign product on sim2 pairs. The bundle constructor checks Q - P = L_k.
    """
    _check_dim(k)
    G = underlying_graph(X)
    index = X.index(k)
    size = len(index)
    P = np.zeros((size, size), dtype=np.float64)
    Q = np.zeros((size, size), dtype=np.float64)
    for sigma, i in index.items():
        vertex_degrees = sum(G.degree(v) for v in sigma)
        P[i, i] = vertex_degrees - X.degree(sigma)
        Q[i, i] = vertex_degrees + k + 1
    for pair in lower_adjacent_pairs(X, k):
        a, b = index[pair.sigma], index[pair.tau]
        if pair.kind is Adjacency.SIM1:
            P[a, b] = -pair.sign
        elif pair.kind is Adjacency.SIM2:
            Q[a, b] = pair.sign
    return LaplacianBundle(
        k=k,
        L=laplacian_from_boundaries(X, k),
        P=SymmetricMatrix(P),
        Q=SymmetricMatrix(Q),
        built_from="boundaries",
    )


def sim1_counts(X: SimplicialComplex, k: int) -> Dict[Simplex, int]:
    """|{tau in X(k) : sigma sim1 tau}| for every k-face sigma."""
    counts = {sigma: 0 for sigma in X.faces(k)}
    for pair in lower_adjacent_pairs(X, k):
        if pair.kind is Adjacency.SIM1:
            counts[pair.sigma] += 1
    return counts


def graph_laplacian(G: Graph) -> SymmetricMatrix:
    """L(G) indexed by the sorted vertex list of G."""
    position = {v: i for i, v in enumerate(G.vertices)}
    L = np.zeros((G.n, G.n), dtype=np.float64)
    for v in G.vertices:
        L[position[v], position[v]] = G.degree(v)
    for u, v in G.edges:
        L[position[u], position[v]] = -1.0
        L[position[v], position[u]] = -1.0
    return SymmetricMatrix(L)


def graph_laplacian_plus_J(G: Graph) -> SymmetricMatrix:
    """L(G) + J: degree + 1 on the diagonal, 1 on non-edges, 0 on edges."""
    return SymmetricMatrix(graph_laplacian(G).entries + np.ones((G.n, G.n)))


def compound_rows(X: SimplicialComplex, k: int) -> List[int]:
    """Row of every k-face in the (k+1)-th additive compound indexed by vertex positions."""
    position = {v: i for i, v in enumerate(X.vertices)}
    lookup = {s: i for i, s in enumerate(subsets_index(X.n, k + 1))}
    return [lookup[tuple(position[v] for v in sigma)] for sigma in X.faces(k)]


def betti_numbers(
    X: SimplicialComplex, kmax: int, cross_check: bool = True
) -> List[int]:
    """
    Reduced real Betti numbers b_0..b_kmax.

    b_k = f_k - rank d_k - rank d_{k+1}, with d_0 the all-ones row. With
    ``cross_check`` each value is compared with the exact nullity of the
    integer Laplacian L_k.
    """
    _check_dim(kmax)
    ranks = [integer_rank(boundary_matrix(X, k).matrix) for k in range(kmax + 2)]
    betti = []
    for k in range(kmax + 1):
        value = X.f(k) - ranks[k] - ranks[k + 1]
        if cross_check and X.f(k):
            nullity = X.f(k) - integer_rank(integer_laplacian(X, k))
            if nullity != value:
                raise IdentityViolationError(
                    "nullity(L_k) = reduced Betti number",
                    {"k": k, "nullity": nullity, "betti": value},
                )
        betti.append(value)
    logger.debug("betti numbers computed", f_vector=X.f_vector, betti=betti)
    return betti
