"""
lapbound - Complex Construction Service

Builds simplicial complexes (downward closure, links, skeletons, flag and
neighborhood complexes) and evaluates the purely combinatorial quantities
that measure how far a complex is from being flag: the partition
sigma[0..k+1], its weighted maximum Delta(k), D_k(X, j) and missing-face
counts.
"""

from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from lapbound.core.exceptions import (
    CapacityExceededError,
    FaceNotFoundError,
    VacuousError,
    ValidationError,
)
from lapbound.core.logging import get_logger
from lapbound.models.complex import (
    EMPTY_FACE,
    Graph,
    SigmaPartition,
    Simplex,
    SimplicialComplex,
    VertexId,
    facets_of,
    make_simplex,
)

logger = get_logger(__name__)


def _with_vertex(sigma: Simplex, u: VertexId) -> Simplex:
    return tuple(sorted(sigma + (u,)))


def _check_vertices(vertices: Sequence[VertexId]) -> Tuple[VertexId, ...]:
    labels = [int(v) for v in vertices]
    if len(set(labels)) != len(labels):
        raise ValidationError("duplicate vertex labels", field="vertices")
    make_simplex(labels)
    return tuple(sorted(labels))


def close_downward(
    vertices: Sequence[VertexId],
    faces: Iterable[Iterable[VertexId]],
    max_dim: Optional[int] = None,
    face_budget: Optional[int] = None,
) -> SimplicialComplex:
    """
    Smallest complex on ``vertices`` containing ``faces``.

    Args:
        vertices: Vertex set; isolated vertices are allowed
        faces: Generating faces (any subset of a face is added)
        max_dim: Materialize only faces of dimension <= max_dim
        face_budget: Raise CapacityExceededError past this many faces

    Returns:
        SimplicialComplex on ``vertices``
    """
    vertex_set = _check_vertices(vertices)
    known = set(vertex_set)
    generators = []
    for face in faces:
        sigma = make_simplex(int(v) for v in face)
        unknown = [v for v in sigma if v not in known]
        if unknown:
            raise ValidationError(
                f"face {list(sigma)} references unknown vertices {unknown}", field="faces"
            )
        if sigma:
            generators.append(sigma)

    top = max((len(s) - 1 for s in generators), default=0)
    if max_dim is not None:
        top = min(top, max_dim)

    layers: List[Set[Simplex]] = [set() for _ in range(top + 1)]
    layers[0] = {(v,) for v in vertex_set}
    total = len(vertex_set) + 1
    for sigma in generators:
        for d in range(1, min(len(sigma) - 1, top) + 1):
            layer = layers[d]
            before = len(layer)
            layer.update(combinations(sigma, d + 1))
            total += len(layer) - before
            if face_budget is not None and total > face_budget:
                raise CapacityExceededError("materialized face count", total, face_budget)

    return SimplicialComplex(
        vertices=vertex_set,
        faces_by_dim=((EMPTY_FACE,),) + tuple(tuple(layer) for layer in layers),
    )


def from_maximal_faces(
    vertices: Sequence[VertexId], maximal: Sequence[Sequence[VertexId]]
) -> SimplicialComplex:
    """Smallest simplicial complex on ``vertices`` containing every given face."""
    return close_downward(vertices, maximal)


def link(X: SimplicialComplex, sigma: Simplex) -> SimplicialComplex:
    """lk_X(sigma) = {tau in X : sigma | tau in X, sigma & tau empty}."""
    sigma = make_simplex(sigma)
    if sigma not in X:
        raise FaceNotFoundError(sigma)
    members = set(sigma)
    link_faces = []
    for d in range(len(sigma) - 1, X.dimension + 1):
        for eta in X.faces(d):
            if members.issubset(eta):
                link_faces.append(tuple(v for v in eta if v not in members))
    link_vertices = sorted({tau[0] for tau in link_faces if len(tau) == 1})
    return close_downward(link_vertices, [tau for tau in link_faces if tau])


def skeleton(X: SimplicialComplex, k: int) -> SimplicialComplex:
    """Subcomplex of faces of dimension <= k."""
    if k < 0:
        raise ValidationError(f"skeleton dimension must be >= 0, got {k}", field="k")
    return SimplicialComplex(vertices=X.vertices, faces_by_dim=X.faces_by_dim[: k + 2])


def underlying_graph(X: SimplicialComplex) -> Graph:
    """G_X: the 1-skeleton viewed as a graph."""
    return Graph(vertices=X.vertices, edges=frozenset(X.faces(1)))


def flag_complex(G: Graph, max_dim: Optional[int] = None) -> SimplicialComplex:
    """
    Clique complex of ``G``.

    Cliques are enumerated by ordered extension: a clique is only extended
    by common neighbours larger than its last vertex, so each clique is
    produced once.
    """
    cliques: List[Simplex] = []
    limit = max_dim + 1 if max_dim is not None else None

    def extend(clique: Simplex, candidates: List[VertexId]) -> None:
        cliques.append(clique)
        if limit is not None and len(clique) >= limit:
            return
        for i, v in enumerate(candidates):
            later = [u for u in candidates[i + 1 :] if G.has_edge(u, v)]
            extend(clique + (v,), later)

    for i, v in enumerate(G.vertices):
        extend((v,), [u for u in G.vertices[i + 1 :] if G.has_edge(u, v)])

    return close_downward(G.vertices, cliques, max_dim=max_dim)


def neighborhood_complex(
    G: Graph, max_dim: Optional[int] = None, face_budget: Optional[int] = None
) -> SimplicialComplex:
    """
    N[G]: vertex subsets with a common neighbour.

    The vertex set is the set of vertices lying in some neighbourhood, i.e.
    the non-isolated vertices of ``G``. ``max_dim`` truncates the closure,
    which is the only affordable option for large neighbourhoods.
    """
    neighborhoods = [tuple(sorted(G.neighbors(v))) for v in G.vertices]
    neighborhoods = [nbhd for nbhd in neighborhoods if nbhd]
    vertices = sorted({u for nbhd in neighborhoods for u in nbhd})
    complex_ = close_downward(vertices, neighborhoods, max_dim=max_dim, face_budget=face_budget)
    logger.debug(
        "neighborhood complex built",
        n=G.n,
        edges=len(G.edges),
        f_vector=complex_.f_vector,
    )
    return complex_


def _require_face(X: SimplicialComplex, sigma: Simplex) -> Simplex:
    sigma = make_simplex(sigma)
    if sigma not in X:
        raise FaceNotFoundError(sigma)
    if not sigma:
        raise ValidationError("sigma must have dimension >= 0", field="sigma")
    return sigma


def _facet_completions(X: SimplicialComplex, sigma: Simplex, u: VertexId) -> int:
    """|{w in sigma : u in lk_X(sigma - w)}|"""
    return sum(1 for _, facet in facets_of(sigma) if _with_vertex(facet, u) in X)


def sigma_partition(X: SimplicialComplex, sigma: Simplex) -> SigmaPartition:
    """
    The partition sigma[0..k+1] evaluated literally.

    A vertex u outside sigma lands in sigma[j] when sigma | {u} is not a
    face, {u, v} is an edge for every v in sigma, and exactly j facets of
    sigma extend by u to a face. The edge clause is evaluated for every j,
    including j >= 2 where it is implied by the others.
    """
    sigma = _require_face(X, sigma)
    k = len(sigma) - 1
    witnesses: List[Set[VertexId]] = [set() for _ in range(k + 2)]
    members = set(sigma)
    for u in X.vertices:
        if u in members or _with_vertex(sigma, u) in X:
            continue
        if not all(_with_vertex((v,), u) in X for v in sigma):
            continue
        witnesses[_facet_completions(X, sigma, u)].add(u)
    return SigmaPartition(
        sigma=sigma,
        counts=tuple(len(w) for w in witnesses),
        witnesses=tuple(frozenset(w) for w in witnesses),
    )


def max_weighted_sigma_defect(X: SimplicialComplex, k: int) -> int:
    """Delta(k) = max over X(k) of sum_j (j + 1) |sigma[j]|."""
    faces = X.faces(k) if k >= 0 else ()
    if not faces:
        raise VacuousError(k)
    return max(sigma_partition(X, sigma).weighted for sigma in faces)


def max_sigma_total(X: SimplicialComplex, k: int) -> int:
    """max over X(k) of sum_j |sigma[j]|."""
    faces = X.faces(k) if k >= 0 else ()
    if not faces:
        raise VacuousError(k)
    return max(sigma_partition(X, sigma).total for sigma in faces)


def dk_parameter(X: SimplicialComplex, k: int, j: int) -> int:
    """
    D_k(X, j): the sigma[j] count with the edge clause dropped.

    Only vertices outside sigma are counted; a vertex of sigma would
    trivially complete one facet.
    """
    if k < 1 or j < 1 or j > k + 1:
        raise ValidationError(f"D_k(X, j) needs k >= 1 and 1 <= j <= k + 1, got k={k}, j={j}")
    best = 0
    for sigma in X.faces(k):
        members = set(sigma)
        count = sum(
            1
            for u in X.vertices
            if u not in members
            and _with_vertex(sigma, u) not in X
            and _facet_completions(X, sigma, u) == j
        )
        best = max(best, count)
    return best


def missing_face_count(
    X: SimplicialComplex, universe: Optional[Iterable[VertexId]], k: int
) -> int:
    """
    |(V choose k+1) - X(k)| for the vertex universe V.

    ``X`` must be materialized through dimension k for the count to be
    meaningful; truncated complexes report every higher set as missing.
    """
    vertices = tuple(sorted(set(universe))) if universe is not None else X.vertices
    stray = set(X.vertices) - set(vertices)
    if stray:
        raise ValidationError(f"vertices {sorted(stray)} are outside the universe", field="universe")
    if k < -1:
        raise ValidationError(f"dimension must be >= -1, got {k}", field="k")
    if vertices == X.vertices:
        return comb(len(vertices), k + 1) - X.f(k)
    return sum(1 for s in combinations(vertices, k + 1) if s not in X)


def is_subcomplex(X: SimplicialComplex, Xsub: SimplicialComplex) -> Optional[Simplex]:
    """First face of ``Xsub`` missing from ``X``, or None when Xsub is a subcomplex."""
    for sigma in Xsub.all_faces():
        if sigma not in X:
            return sigma
    return None


def skeleton_matches_flag(X: SimplicialComplex, k: int) -> bool:
    """Whether the k-skeleton of X equals the k-skeleton of flag_complex(G_X)."""
    Y = flag_complex(underlying_graph(X), max_dim=k)
    return all(X.faces(d) == Y.faces(d) for d in range(k + 1))


def subcomplex_defect(X: SimplicialComplex, Xsub: SimplicialComplex, k: int) -> int:
    """max over Xsub(k) of deg_X(sigma) - deg_Xsub(sigma)."""
    faces = Xsub.faces(k)
    if not faces:
        raise VacuousError(k)
    return max(X.degree(sigma) - Xsub.degree(sigma) for sigma in faces)


def flag_degree_gaps(X: SimplicialComplex, k: int) -> Dict[Simplex, int]:
    """deg_Y(sigma) - deg_X(sigma) per k-face, Y the flag complex of G_X."""
    Y = flag_complex(underlying_graph(X), max_dim=k + 1)
    return {sigma: Y.degree(sigma) - X.degree(sigma) for sigma in X.faces(k)}
