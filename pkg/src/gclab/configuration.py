"""Degree sequences, uniform stub pairings, and the induced multigraph.

The sampling pipeline is: degree sequence -> uniform perfect matching on
stubs -> multigraph (loops and parallel edges allowed). Conditioning on the
multigraph being simple recovers the uniform simple graph with the same
degrees, which is what ``sample_simple`` implements by rejection.
"""

from __future__ import annotations

import json

import numpy as np

from .distributions import Distribution, sample
from .errors import Exhausted, SamePair


class DegreeSequence:
    """Finite list of vertex degrees with even sum."""

    __slots__ = ("degrees",)

    def __init__(self, degrees):
        arr = np.asarray(degrees, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("degree sequence must be a non-empty 1-d sequence")
        if (arr < 0).any():
            raise ValueError("degrees must be non-negative")
        if int(arr.sum()) % 2 != 0:
            raise ValueError("degree sum must be even")
        arr.setflags(write=False)
        self.degrees = arr

    def __len__(self):
        return int(self.degrees.size)

    def __iter__(self):
        return iter(self.degrees.tolist())

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return self.degrees.shape == other.degrees.shape and bool(
            np.all(self.degrees == other.degrees)
        )

    def __hash__(self):
        return hash(self.degrees.tobytes())

    def __repr__(self):
        shown = self.degrees.tolist() if len(self) <= 12 else "..."
        return f"DegreeSequence(n={len(self)}, m={self.size}, degrees={shown})"

    @property
    def size(self) -> int:
        """Number of edges m = (sum of degrees) / 2."""
        return int(self.degrees.sum()) // 2

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())


class Pairing:
    """Perfect matching on the stub set {0, ..., 2m-1}.

    Stub blocks are consecutive: vertex i owns the d_i stubs following the
    stubs of vertices 0..i-1, so ``owner`` is a direct lookup table. Pairs
    keep their construction order (each row is an ordered (a, b)); switchings
    rely on that stored orientation.
    """

    __slots__ = ("stub_count", "pairs", "owner", "n_vertices")

    def __init__(self, stub_count: int, pairs: np.ndarray, owner: np.ndarray, n_vertices: int):
        self.stub_count = int(stub_count)
        self.pairs = pairs
        self.owner = owner
        self.n_vertices = int(n_vertices)
        self.pairs.setflags(write=False)

    def __repr__(self):
        return f"Pairing(2m={self.stub_count}, n={self.n_vertices})"


class MultiGraph:
    """Multigraph as a vertex count plus an edge multiset.

    Rows of ``edges`` are unordered vertex pairs stored as (min, max); loops
    appear as (v, v) and count twice toward the degree of v. The edge array
    is never mutated; derived adjacency structures are cached lazily.
    """

    __slots__ = ("n", "edges", "_adj", "_inc")

    def __init__(self, n: int, edges):
        self.n = int(n)
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= self.n):
            raise ValueError("edge endpoint outside vertex range")
        arr = np.sort(arr, axis=1)
        arr.setflags(write=False)
        self.edges = arr
        self._adj = None
        self._inc = None

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        """Vertex degrees; each loop contributes 2 to its endpoint."""
        if self.num_edges == 0:
            return np.zeros(self.n, dtype=np.int64)
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def degree_sequence(self) -> DegreeSequence:
        return DegreeSequence(self.degrees())

    def adjacency_csr(self):
        """(indptr, neighbors) over non-loop edges; loops are invisible to distance."""
        if self._adj is None:
            e = self.edges[self.edges[:, 0] != self.edges[:, 1]]
            src = np.concatenate([e[:, 0], e[:, 1]])
            dst = np.concatenate([e[:, 1], e[:, 0]])
            order = np.argsort(src, kind="stable")
            counts = np.bincount(src, minlength=self.n)
            indptr = np.concatenate([[0], np.cumsum(counts)])
            self._adj = (indptr.astype(np.int64), dst[order])
        return self._adj

    def incidence_csr(self):
        """(indptr, edge ids) per vertex; a loop's id appears twice in its row."""
        if self._inc is None:
            m = self.num_edges
            src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            eid = np.concatenate([np.arange(m), np.arange(m)])
            order = np.argsort(src, kind="stable")
            counts = np.bincount(src, minlength=self.n)
            indptr = np.concatenate([[0], np.cumsum(counts)])
            self._inc = (indptr.astype(np.int64), eid[order])
        return self._inc

    def __repr__(self):
        return f"MultiGraph(n={self.n}, m={self.num_edges})"


def degree_counts(ds: DegreeSequence) -> dict[int, int]:
    """Map degree -> number of vertices with that degree."""
    values, counts = np.unique(ds.degrees, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def conf_distance(ds: DegreeSequence, dist: Distribution) -> float:
    """Edge-weighted l1 distance between the empirical degree law and dist.

    Computed as max( sum_i |i*n_i/n - i*r_i| , 1/n ); the 1/n floor makes the
    distance vanish only along growing sequences.
    """
    n = len(ds)
    width = max(int(ds.max_degree), dist.max_support) + 1
    empirical = np.bincount(ds.degrees, minlength=width).astype(np.float64) / n
    target = dist.dense(width)
    i = np.arange(width, dtype=np.float64)
    d0 = float(np.abs(i * empirical - i * target).sum())
    return max(d0, 1.0 / n)


def tail_mass(ds: DegreeSequence, cutoff: int) -> float:
    """Per-vertex stub mass sitting on degrees >= cutoff: sum_{i>=C} i*n_i / n."""
    degs = ds.degrees
    return float(degs[degs >= cutoff].sum()) / len(ds)


def sample_degree_sequence(dist: Distribution, n: int, rng: np.random.Generator) -> DegreeSequence:
    """n i.i.d. draws; an odd sum is fixed by bumping the last entry by one."""
    if n < 1:
        raise ValueError("need n >= 1")
    draws = sample(dist, rng, size=n).copy()
    if int(draws.sum()) % 2 != 0:
        draws[-1] += 1
    return DegreeSequence(draws)


def sample_pairing(ds: DegreeSequence, rng: np.random.Generator) -> Pairing:
    """Uniform perfect matching on the stubs of ds.

    A uniform shuffle of the 2m stubs paired off consecutively hits every
    matching with equal probability (each matching corresponds to exactly
    m! * 2^m shuffle outcomes).
    """
    two_m = 2 * ds.size
    stubs = rng.permutation(two_m)
    pairs = stubs.reshape(-1, 2)
    owner = np.repeat(np.arange(len(ds), dtype=np.int64), ds.degrees)
    return Pairing(two_m, pairs, owner, len(ds))


def to_multigraph(pairing: Pairing) -> MultiGraph:
    """Contract each stub pair to an edge between the owning vertices."""
    u = pairing.owner[pairing.pairs[:, 0]]
    v = pairing.owner[pairing.pairs[:, 1]]
    return MultiGraph(pairing.n_vertices, np.column_stack([u, v]))


def apply_switching(pairing: Pairing, pair1_index: int, pair2_index: int) -> Pairing:
    """Replace pairs (a,b),(c,d) by (a,c),(b,d); returns a new Pairing.

    The stored pair orientation fixes which endpoints play a/b and c/d, so
    the operation is deterministic.
    """
    if pair1_index == pair2_index:
        raise SamePair("switching needs two distinct pair indices")
    m = pairing.pairs.shape[0]
    if not (0 <= pair1_index < m and 0 <= pair2_index < m):
        raise IndexError("pair index out of range")
    pairs = pairing.pairs.copy()
    a, b = pairs[pair1_index]
    c, d = pairs[pair2_index]
    pairs[pair1_index] = (a, c)
    pairs[pair2_index] = (b, d)
    return Pairing(pairing.stub_count, pairs, pairing.owner, pairing.n_vertices)


def is_simple(graph: MultiGraph) -> bool:
    """True iff the multigraph has no loops and no repeated vertex pair."""
    e = graph.edges
    if e.shape[0] == 0:
        return True
    if (e[:, 0] == e[:, 1]).any():
        return False
    view = e[np.lexsort((e[:, 1], e[:, 0]))]
    dup = np.all(view[1:] == view[:-1], axis=1)
    return not bool(dup.any())


def sample_simple(ds: DegreeSequence, rng: np.random.Generator, max_attempts: int) -> MultiGraph:
    """Rejection-sample a uniform simple graph with the given degrees.

    Conditioning the pairing construction on simplicity yields exactly the
    uniform law over simple graphs, so resampling until simple is exact.
    Raises Exhausted (carrying the attempt count) when the cap is hit, which
    signals either a low simplicity probability or a non-graphical sequence.
    """
    if max_attempts < 1:
        raise ValueError("need max_attempts >= 1")
    for _ in range(max_attempts):
        graph = to_multigraph(sample_pairing(ds, rng))
        if is_simple(graph):
            return graph
    raise Exhausted(max_attempts)


def load_degree_sequence(path) -> DegreeSequence:
    """Read a degree sequence: JSON array, or one integer per line."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        return DegreeSequence(json.loads(stripped))
    return DegreeSequence([int(line) for line in text.split()])


def save_degree_sequence(ds: DegreeSequence, path, fmt: str = "text") -> None:
    """Write a degree sequence as text (one integer per line) or a JSON array."""
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "json":
            fh.write(json.dumps(ds.degrees.tolist()))
        elif fmt == "text":
            fh.write("\n".join(str(d) for d in ds.degrees.tolist()) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")


def save_edge_list(graph: MultiGraph, path) -> None:
    """Export edges as ``u v`` lines; a loop at v appears as ``v v``."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in graph.edges.tolist():
            fh.write(f"{u} {v}\n")
