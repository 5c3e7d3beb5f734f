"""Finite simple graphs, indexed graph families and subgraph embedding enumeration.

Embeddings are non-induced: every edge of the target must land on an edge of
the host, non-edges of the target are unconstrained.  The set of all
embeddings of ``X`` into ``G`` is the isomorphism set ``G/X``; automorphic
copies are counted separately, so ``|K4/K3| == 24``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

__all__ = [
    "Graph",
    "EmbeddingMap",
    "GraphFamily",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "disjoint_union",
    "iter_embeddings",
    "enumerate_embeddings",
    "has_embedding",
    "embedding_edge_array",
    "is_constituent",
    "is_hereditary_prefix",
    "hereditary_violation",
    "complete_family",
    "path_family",
    "explicit_family",
]


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``.

    Edge ids are positions in ``edges``; they survive a JSON round trip.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()
    name: str = field(default="", compare=False)
    edge_index: dict = field(init=False, repr=False, compare=False, hash=False)
    neighbours: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = int(self.vertex_count)
        if n < 0:
            raise ValueError("vertex_count must be non-negative")
        normed = []
        index = {}
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            e = _norm(u, v)
            if e in index:
                raise ValueError(f"duplicate edge {e}")
            index[e] = len(normed)
            normed.append(e)
        nbrs = [set() for _ in range(n)]
        for u, v in normed:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "edges", tuple(normed))
        object.__setattr__(self, "edge_index", index)
        object.__setattr__(self, "neighbours", tuple(frozenset(s) for s in nbrs))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.neighbours[v])

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[_norm(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edge_index

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        extra = set(data) - {"vertices", "edges"}
        if extra:
            raise ValueError(f"unknown graph fields: {sorted(extra)}")
        return cls(int(data["vertices"]), tuple(tuple(e) for e in data.get("edges", [])))

    def label(self) -> str:
        return self.name or f"G(n={self.vertex_count}, m={self.edge_count})"


def complete_graph(n: int) -> Graph:
    """K_n with edges in colex order: (0,1), (0,2), (1,2), (0,3), ...

    Colex order keeps the edge ids of K_{n-1} as a prefix of those of K_n.
    """
    if n < 1:
        raise ValueError("complete_graph needs n >= 1")
    edges = tuple((u, v) for v in range(n) for u in range(v))
    return Graph(n, edges, name=f"K{n}")


def path_graph(t: int) -> Graph:
    """P_t: t edges on t+1 vertices, edge i joins vertices i and i+1."""
    if t < 1:
        raise ValueError("path_graph needs t >= 1")
    return Graph(t + 1, tuple((i, i + 1) for i in range(t)), name=f"P{t}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle_graph needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)), name=f"C{n}")


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.vertex_count
    return Graph(offset, tuple(edges), name="+".join(g.label() for g in graphs))


@dataclass(frozen=True)
class EmbeddingMap:
    """Injective edge-preserving vertex map from ``target`` into ``host``."""

    target: Graph
    host: Graph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        vm = tuple(int(v) for v in self.vertex_map)
        if len(vm) != self.target.vertex_count:
            raise ValueError("vertex_map length differs from target vertex count")
        if len(set(vm)) != len(vm):
            raise ValueError("vertex_map is not injective")
        if any(not 0 <= v < self.host.vertex_count for v in vm):
            raise ValueError("vertex_map leaves the host")
        emap = []
        for u, v in self.target.edges:
            key = _norm(vm[u], vm[v])
            if key not in self.host.edge_index:
                raise ValueError(f"target edge ({u}, {v}) maps to a host non-edge {key}")
            emap.append(self.host.edge_index[key])
        object.__setattr__(self, "vertex_map", vm)
        object.__setattr__(self, "edge_map", tuple(emap))

    def compose(self, inner: "EmbeddingMap") -> "EmbeddingMap":
        """``self ∘ inner``: inner embeds Y into self.target, result embeds Y into self.host."""
        if inner.host != self.target:
            raise ValueError("cannot compose: inner host differs from outer target")
        return EmbeddingMap(inner.target, self.host, tuple(self.vertex_map[v] for v in inner.vertex_map))

    def image_edges(self) -> frozenset:
        return frozenset(self.edge_map)


def iter_embeddings(X: Graph, G: Graph) -> Iterator[tuple[int, ...]]:
    """Yield vertex maps X -> G in lexicographic order.

    Target vertices are assigned in index order, host candidates in
    increasing order, so the output is sorted.  Candidates are pruned by
    degree and by adjacency to already-placed neighbours.
    """
    n, N = X.vertex_count, G.vertex_count
    if n > N or X.edge_count > G.edge_count:
        return
    if n == 0:
        yield ()
        return
    xdeg = [X.degree(v) for v in range(n)]
    gdeg = [G.degree(v) for v in range(N)]
    # neighbours of v among earlier target vertices
    back = [sorted(u for u in X.neighbours[v] if u < v) for v in range(n)]
    gn = G.neighbours
    assign = [0] * n
    used = [False] * N

    def extend(v):
        if v == n:
            yield tuple(assign)
            return
        need = xdeg[v]
        prev = back[v]
        for w in range(N):
            if used[w] or gdeg[w] < need:
                continue
            nb = gn[w]
            if any(assign[u] not in nb for u in prev):
                continue
            assign[v] = w
            used[w] = True
            yield from extend(v + 1)
            used[w] = False

    yield from extend(0)


@lru_cache(maxsize=4096)
def enumerate_embeddings(X: Graph, G: Graph) -> tuple[EmbeddingMap, ...]:
    """All of G/X as EmbeddingMaps, lexicographic on the vertex map."""
    return tuple(EmbeddingMap(X, G, vm) for vm in iter_embeddings(X, G))


@lru_cache(maxsize=4096)
def has_embedding(X: Graph, G: Graph) -> bool:
    return next(iter_embeddings(X, G), None) is not None


@lru_cache(maxsize=1024)
def embedding_edge_array(X: Graph, G: Graph) -> np.ndarray:
    """(|G/X|, |E(X)|) array; row r lists the host edge ids hit by embedding r."""
    rows = []
    ei = G.edge_index
    xe = X.edges
    for vm in iter_embeddings(X, G):
        rows.append([ei[_norm(vm[u], vm[v])] for u, v in xe])
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(xe))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GraphFamily:
    """Indexed family ``i -> G_i`` for ``first_index <= i (<= last_index)``.

    ``index_offset`` records the naming convention: for the complete family
    ``G_i = K_{i + index_offset}``.
    """

    generator: Callable[[int], Graph] = field(compare=False)
    kind: str = "custom"
    index_offset: int = 0
    first_index: int = 0
    last_index: Optional[int] = None
    name: str = ""

    def __call__(self, i: int) -> Graph:
        if i < self.first_index or (self.last_index is not None and i > self.last_index):
            raise IndexError(f"index {i} outside family range")
        return self.generator(i)

    def indices(self, horizon: int) -> range:
        stop = horizon if self.last_index is None else min(horizon, self.last_index)
        return range(self.first_index, stop + 1)

    def truncated(self, k: int) -> "GraphFamily":
        """The subfamily G_{>=k}, keeping the original indices."""
        return GraphFamily(
            self.generator, self.kind, self.index_offset, max(k, self.first_index), self.last_index, self.name
        )

    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "index_offset": self.index_offset,
            "first_index": self.first_index,
            "last_index": self.last_index,
        }


@lru_cache(maxsize=None)
def _cached_complete(n: int) -> Graph:
    return complete_graph(n)


@lru_cache(maxsize=None)
def _cached_path(t: int) -> Graph:
    return path_graph(t)


def complete_family(index_offset: int = 0) -> GraphFamily:
    """{K_{i+offset}}: offset 0 gives G_n = K_n, offset 1 gives G_i = K_{i+1}."""
    return GraphFamily(
        lambda i: _cached_complete(i + index_offset), "K", index_offset, max(0, 1 - index_offset), None, "complete"
    )


def path_family(index_offset: int = 0) -> GraphFamily:
    return GraphFamily(
        lambda i: _cached_path(i + index_offset), "P", index_offset, max(0, 1 - index_offset), None, "path"
    )


def explicit_family(graphs: Sequence[Graph], first_index: int = 0) -> GraphFamily:
    graphs = tuple(graphs)
    if not graphs:
        raise ValueError("explicit family needs at least one graph")
    return GraphFamily(
        lambda i: graphs[i - first_index], "explicit", 0, first_index, first_index + len(graphs) - 1, "explicit"
    )


def is_constituent(targets: Iterable[Graph], family: GraphFamily, index_range: Iterable[int]) -> bool:
    """True iff every target embeds in every family member over the range."""
    members = [family(i) for i in index_range]
    return all(has_embedding(X, G) for X in targets for G in members)


def hereditary_violation(family: GraphFamily, index_range: Iterable[int]) -> Optional[tuple[int, int]]:
    """First pair (a, b), a < b, with G_a not embedding in G_b; None if hereditary."""
    idx = list(index_range)
    members = {i: family(i) for i in idx}
    for pos, a in enumerate(idx):
        for b in idx[pos + 1:]:
            if not has_embedding(members[a], members[b]):
                return a, b
    return None


def is_hereditary_prefix(family: GraphFamily, index_range: Iterable[int]) -> bool:
    return hereditary_violation(family, index_range) is None
