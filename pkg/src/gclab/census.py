"""Component statistics, rooted neighborhoods, and local property counts.

A "local property" is a predicate of a rooted graph that only looks at the
ball of some finite radius around the root; the built-in kinds below cover
component-size predicates, the root-degree predicate, and the bounded-degree
ball predicate used by the concentration machinery. Counting vertices with a
property runs in one vectorized pass (census or frontier expansion), never
one BFS per vertex, except inside ``neighborhood`` itself.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .configuration import MultiGraph
from .errors import InsufficientRadius, UnboundedRadius


class ComponentCensus:
    """Component decomposition: sizes sorted descending plus a vertex labeling.

    Ties between equal-sized components are broken by the smallest vertex
    index they contain, so component 0 is always *the* largest component.
    """

    __slots__ = ("sizes", "component_id")

    def __init__(self, sizes: np.ndarray, component_id: np.ndarray):
        self.sizes = sizes
        self.component_id = component_id

    @property
    def n(self) -> int:
        return int(self.component_id.size)

    @property
    def largest(self) -> int:
        """L1: number of vertices in the largest component."""
        return int(self.sizes[0])

    @property
    def second_largest(self) -> int:
        """L2, or 0 when there is a single component."""
        return int(self.sizes[1]) if self.sizes.size > 1 else 0

    def vertices_in_components_of_size(self, k: int) -> int:
        """N_k: number of vertices lying in components with exactly k vertices."""
        return int(k * np.count_nonzero(self.sizes == k))

    def vertices_in_components_of_size_at_least(self, k: int) -> int:
        """N_{>=k}: number of vertices in components with at least k vertices."""
        return int(self.sizes[self.sizes >= k].sum())

    def giant_mask(self) -> np.ndarray:
        return self.component_id == 0

    def size_counts(self) -> dict[int, int]:
        values, counts = np.unique(self.sizes, return_counts=True)
        return {int(v): int(v * c) for v, c in zip(values, counts)}

    def to_json_dict(self) -> dict:
        return {
            "sizes": self.sizes.tolist(),
            "N_k": {str(k): v for k, v in sorted(self.size_counts().items())},
            "L1": self.largest,
            "L2": self.second_largest,
        }


def components(graph: MultiGraph) -> ComponentCensus:
    """Exact component decomposition; loops are ignored for connectivity."""
    n = graph.n
    e = graph.edges[graph.edges[:, 0] != graph.edges[:, 1]]
    if e.shape[0]:
        data = np.ones(e.shape[0], dtype=np.int8)
        adj = coo_matrix((data, (e[:, 0], e[:, 1])), shape=(n, n))
        _, labels = connected_components(adj, directed=False)
    else:
        labels = np.arange(n)
    label_sizes = np.bincount(labels)
    # First occurrence in vertex order = smallest vertex of each component.
    _, first_vertex = np.unique(labels, return_index=True)
    order = np.lexsort((first_vertex, -label_sizes))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return ComponentCensus(label_sizes[order], rank[labels])


@dataclass(eq=False)
class RootedNeighborhood:
    """Induced subgraph within distance ``depth`` of ``root``, with distances.

    ``vertices`` lists original ids in BFS order (root first); ``distances``
    is parallel to it. ``edges`` holds every edge of the host graph between
    included vertices, loops included, each once.
    """

    root: int
    depth: int
    vertices: np.ndarray
    distances: np.ndarray
    edges: np.ndarray
    is_tree: bool

    @property
    def size(self) -> int:
        return int(self.vertices.size)

    def degree_of(self, vertex: int) -> int:
        counter = self._degree_counter()
        return counter.get(int(vertex), 0)

    def _degree_counter(self) -> Counter:
        cached = getattr(self, "_degrees", None)
        if cached is None:
            cached = Counter(int(x) for x in np.asarray(self.edges).ravel())
            self._degrees = cached
        return cached


def neighborhood(graph: MultiGraph, root: int, t: int) -> RootedNeighborhood:
    """BFS ball of radius t around root, as an induced rooted subgraph."""
    if not (0 <= root < graph.n):
        raise ValueError("root outside vertex range")
    if t < 0:
        raise ValueError("radius must be >= 0")
    indptr, nbrs = graph.adjacency_csr()
    dist = {int(root): 0}
    order = [int(root)]
    frontier = [int(root)]
    for d in range(1, t + 1):
        nxt = []
        for u in frontier:
            for w in nbrs[indptr[u] : indptr[u + 1]]:
                w = int(w)
                if w not in dist:
                    dist[w] = d
                    order.append(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    inc_ptr, inc_eid = graph.incidence_csr()
    eids = set()
    for u in order:
        for eid in inc_eid[inc_ptr[u] : inc_ptr[u + 1]]:
            eids.add(int(eid))
    kept = []
    for eid in eids:
        u, v = graph.edges[eid]
        if int(u) in dist and int(v) in dist:
            kept.append((int(u), int(v)))
    kept.sort()
    edges = np.array(kept, dtype=np.int64).reshape(-1, 2)
    vertices = np.array(order, dtype=np.int64)
    distances = np.array([dist[u] for u in order], dtype=np.int64)
    is_tree = edges.shape[0] == vertices.size - 1 and not any(u == v for u, v in kept)
    return RootedNeighborhood(int(root), int(t), vertices, distances, edges, bool(is_tree))


class LocalProperty:
    """Rooted-graph predicate decided by a finite-radius ball around the root."""

    @property
    def radius(self) -> int:
        raise UnboundedRadius(f"{type(self).__name__} declares no finite radius")


@dataclass(frozen=True)
class ComponentSizeExactly(LocalProperty):
    k: int

    @property
    def radius(self) -> int:
        return self.k


@dataclass(frozen=True)
class ComponentSizeAtLeast(LocalProperty):
    k: int

    @property
    def radius(self) -> int:
        return max(self.k - 1, 0)


@dataclass(frozen=True)
class RootDegree(LocalProperty):
    d: int

    @property
    def radius(self) -> int:
        return 1


@dataclass(frozen=True)
class MaxDegreeBall(LocalProperty):
    """No vertex within distance t of the root has degree above delta."""

    delta: int
    t: int

    @property
    def radius(self) -> int:
        return self.t + 1


@dataclass(frozen=True)
class Conjunction(LocalProperty):
    parts: tuple[LocalProperty, ...]

    @property
    def radius(self) -> int:
        return max((p.radius for p in self.parts), default=0)


def evaluate_property(
    nbhd: RootedNeighborhood,
    prop: LocalProperty,
    census_hint: ComponentCensus | None = None,
) -> bool:
    """Decide ``prop`` for the root of ``nbhd``.

    The neighborhood must be at least as deep as the property's radius; the
    component-size kinds alternatively accept a whole-graph census, which is
    equivalent by definition and lets callers skip deep BFS balls.
    """
    if isinstance(prop, Conjunction):
        return all(evaluate_property(nbhd, part, census_hint) for part in prop.parts)
    if isinstance(prop, (ComponentSizeExactly, ComponentSizeAtLeast)):
        if census_hint is not None:
            size = int(census_hint.sizes[census_hint.component_id[nbhd.root]])
            if isinstance(prop, ComponentSizeExactly):
                return size == prop.k
            return size >= prop.k
        _require_depth(nbhd, prop)
        # With radius >= k (resp. k-1), the ball determines the component:
        # a ball with every vertex strictly inside is the whole component.
        if isinstance(prop, ComponentSizeExactly):
            return nbhd.size == prop.k
        return nbhd.size >= prop.k
    _require_depth(nbhd, prop)
    if isinstance(prop, RootDegree):
        return nbhd.degree_of(nbhd.root) == prop.d
    if isinstance(prop, MaxDegreeBall):
        degrees = nbhd._degree_counter()
        for vertex, dist in zip(nbhd.vertices, nbhd.distances):
            if dist <= prop.t and degrees.get(int(vertex), 0) > prop.delta:
                return False
        return True
    raise TypeError(f"unknown property kind {type(prop).__name__}")


def _require_depth(nbhd: RootedNeighborhood, prop: LocalProperty) -> None:
    if nbhd.depth < prop.radius:
        raise InsufficientRadius(
            f"property needs radius {prop.radius}, neighborhood has depth {nbhd.depth}"
        )


def property_mask(
    graph: MultiGraph,
    prop: LocalProperty,
    census: ComponentCensus | None = None,
) -> np.ndarray:
    """Boolean vector: entry v says whether the graph rooted at v has prop."""
    if isinstance(prop, Conjunction):
        mask = np.ones(graph.n, dtype=bool)
        for part in prop.parts:
            mask &= property_mask(graph, part, census)
        return mask
    if isinstance(prop, (ComponentSizeExactly, ComponentSizeAtLeast)):
        census = census if census is not None else components(graph)
        sizes = census.sizes[census.component_id]
        if isinstance(prop, ComponentSizeExactly):
            return sizes == prop.k
        return sizes >= prop.k
    if isinstance(prop, RootDegree):
        return graph.degrees() == prop.d
    if isinstance(prop, MaxDegreeBall):
        heavy = graph.degrees() > prop.delta
        return ~_within_distance(graph, heavy, prop.t)
    raise TypeError(f"unknown property kind {type(prop).__name__}")


def count_property(graph: MultiGraph, prop: LocalProperty) -> int:
    """Number of vertices whose rooted view satisfies prop."""
    return int(property_mask(graph, prop).sum())


def count_property_in_giant(graph: MultiGraph, prop: LocalProperty) -> int:
    """Number of vertices of the largest component satisfying prop."""
    census = components(graph)
    mask = property_mask(graph, prop, census)
    return int((mask & census.giant_mask()).sum())


def _within_distance(graph: MultiGraph, sources: np.ndarray, t: int) -> np.ndarray:
    """Vertices within graph distance <= t of any source (multi-source BFS)."""
    visited = sources.copy()
    frontier = np.flatnonzero(sources)
    indptr, nbrs = graph.adjacency_csr()
    for _ in range(t):
        if frontier.size == 0:
            break
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        take = np.repeat(starts - np.concatenate(([0], np.cumsum(lens)[:-1])), lens)
        flat = np.arange(total) + take
        neigh = nbrs[flat]
        fresh = neigh[~visited[neigh]]
        if fresh.size == 0:
            break
        frontier = np.unique(fresh)
        visited[frontier] = True
    return visited
