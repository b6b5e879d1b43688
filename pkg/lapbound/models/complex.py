"""
lapbound - Combinatorial Models

Immutable simplices, graphs and simplicial complexes. Faces are stored per
dimension in lexicographic order; that order is the row/column index of
every matrix built from a complex.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple

from lapbound.core.exceptions import ValidationError

VertexId = int
Simplex = Tuple[VertexId, ...]
Edge = Tuple[VertexId, VertexId]

EMPTY_FACE: Simplex = ()


def make_simplex(vertices: Iterable[VertexId]) -> Simplex:
    """Canonical sorted, duplicate-free simplex from any vertex iterable."""
    labels = list(vertices)
    simplex = tuple(sorted(set(labels)))
    if len(simplex) != len(labels):
        raise ValidationError(f"simplex {labels} repeats a vertex", field="simplex")
    for v in simplex:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValidationError(f"vertex label {v!r} is not an integer >= 0", field="vertex")
    return simplex


def dimension_of(sigma: Simplex) -> int:
    return len(sigma) - 1


def facets_of(sigma: Simplex) -> Iterator[Tuple[VertexId, Simplex]]:
    """Yield (removed vertex, facet) pairs in vertex order."""
    for i, w in enumerate(sigma):
        yield w, sigma[:i] + sigma[i + 1 :]


@dataclass(frozen=True)
class Graph:
    """Finite simple graph with an explicit, ordered vertex list."""

    vertices: Tuple[VertexId, ...]
    edges: FrozenSet[Edge]
    _adjacency: Dict[VertexId, FrozenSet[VertexId]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        vertices = tuple(sorted(self.vertices))
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex labels", field="vertices")
        known = set(vertices)
        adjacency: Dict[VertexId, set] = {v: set() for v in vertices}
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"loop at vertex {u}", field="edges")
            if u not in known or v not in known:
                raise ValidationError(f"edge {(u, v)} uses an unknown vertex", field="edges")
            a, b = (u, v) if u < v else (v, u)
            normalized.add((a, b))
            adjacency[a].add(b)
            adjacency[b].add(a)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(
            self, "_adjacency", {v: frozenset(nbrs) for v, nbrs in adjacency.items()}
        )

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: VertexId) -> FrozenSet[VertexId]:
        return self._adjacency[v]

    def degree(self, v: VertexId) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return v in self._adjacency.get(u, frozenset())

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class SimplicialComplex:
    """
    Finite simplicial complex stored by dimension.

    ``faces_by_dim[d + 1]`` holds X(d) in lexicographic order, so
    ``faces_by_dim[0] == ((),)`` is X(-1). Construction checks the
    singleton axiom and downward closure.
    """

    vertices: Tuple[VertexId, ...]
    faces_by_dim: Tuple[Tuple[Simplex, ...], ...]
    _face_set: FrozenSet[Simplex] = field(init=False, repr=False, compare=False)
    _index: Tuple[Dict[Simplex, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vertices = tuple(sorted(self.vertices))
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex labels", field="vertices")

        layers: List[Tuple[Simplex, ...]] = [(EMPTY_FACE,)]
        for d, layer in enumerate(self.faces_by_dim[1:]):
            faces = tuple(sorted({make_simplex(s) for s in layer}))
            if any(len(s) != d + 1 for s in faces):
                raise ValidationError(f"layer {d} holds a face of the wrong size")
            layers.append(faces)
        while len(layers) > 2 and not layers[-1]:
            layers.pop()
        if len(layers) == 1:
            layers.append(())
        if layers[1] != tuple((v,) for v in vertices):
            raise ValidationError("vertex layer must equal the singletons of the vertex set")

        face_set = frozenset(s for layer in layers for s in layer)
        for layer in layers[2:]:
            for sigma in layer:
                for _, facet in facets_of(sigma):
                    if facet not in face_set:
                        raise ValidationError(
                            f"not downward closed: {list(facet)} missing below {list(sigma)}"
                        )

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces_by_dim", tuple(layers))
        object.__setattr__(self, "_face_set", face_set)
        object.__setattr__(
            self,
            "_index",
            tuple({s: i for i, s in enumerate(layer)} for layer in layers),
        )

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def dimension(self) -> int:
        """Largest d with X(d) nonempty (-1 for the void vertex set)."""
        return len(self.faces_by_dim) - 2 if self.faces_by_dim[-1] else -1

    def faces(self, k: int) -> Tuple[Simplex, ...]:
        """X(k) in lexicographic order; empty when k exceeds the dimension."""
        if k < -1 or k + 1 >= len(self.faces_by_dim):
            return ()
        return self.faces_by_dim[k + 1]

    def f(self, k: int) -> int:
        return len(self.faces(k))

    @property
    def f_vector(self) -> Tuple[int, ...]:
        """(f_{-1}, f_0, ..., f_dim, 0)."""
        return tuple(len(layer) for layer in self.faces_by_dim if layer) + (0,)

    def index(self, k: int) -> Dict[Simplex, int]:
        if k < -1 or k + 1 >= len(self._index):
            return {}
        return self._index[k + 1]

    def __contains__(self, sigma: object) -> bool:
        return sigma in self._face_set

    def all_faces(self) -> Iterator[Simplex]:
        for layer in self.faces_by_dim:
            yield from layer

    def degree(self, sigma: Simplex) -> int:
        """deg_X(sigma): number of faces of one dimension higher containing sigma."""
        members = set(sigma)
        return sum(
            1
            for u in self.vertices
            if u not in members and tuple(sorted(sigma + (u,))) in self._face_set
        )

    def maximal_faces(self) -> List[Simplex]:
        """Faces not contained in a face one dimension up, in (dim, lex) order."""
        maximal = []
        for layer in self.faces_by_dim[1:]:
            for sigma in layer:
                if self.degree(sigma) == 0:
                    maximal.append(sigma)
        return maximal


@dataclass(frozen=True)
class SigmaPartition:
    """
    Sizes of the sets sigma[0..k+1] for a k-face sigma.

    ``witnesses[j]`` is the vertex set sigma[j]; ``counts[j]`` its size.
    """

    sigma: Simplex
    counts: Tuple[int, ...]
    witnesses: Tuple[FrozenSet[VertexId], ...]

    @property
    def k(self) -> int:
        return len(self.sigma) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def weighted(self) -> int:
        """sum_j (j + 1) |sigma[j]|"""
        return sum((j + 1) * c for j, c in enumerate(self.counts))

    @property
    def facet_weighted(self) -> int:
        """sum_j j |sigma[j]|"""
        return sum(j * c for j, c in enumerate(self.counts))
