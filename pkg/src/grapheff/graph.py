"""Simple undirected graphs and the eight per-graph statistics.

Every dataset in this package is a sequence of :class:`Graph` objects. The
statistics are node count, edge count, average degree, average clustering
coefficient and the number of simple cycles of length 3, 4, 5 and 6.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numba
import numpy as np

PROPERTY_NAMES = (
    "nodes",
    "edges",
    "avg_degree",
    "avg_cc",
    "cyc3",
    "cyc4",
    "cyc5",
    "cyc6",
)

CYCLE_LENGTHS = (3, 4, 5, 6)


class GraphError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable simple undirected graph on nodes ``0..node_count-1``.

    ``edges`` is normalised to a sorted tuple of ``(u, v)`` pairs with
    ``u < v``. Two graphs compare equal iff they have the same node count
    and edge set.
    """

    node_count: int
    edges: tuple

    def __init__(self, node_count: int, edges: Iterable = ()):
        node_count = int(node_count)
        if node_count < 1:
            raise GraphError(f"node_count must be >= 1, got {node_count}")
        seen = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(
                    f"edge ({u}, {v}) out of range for {node_count} nodes")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.asarray(adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError("adjacency matrix must be square")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip(iu.tolist(), ju.tolist()))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        if self.edges:
            e = np.asarray(self.edges, dtype=np.int64)
            np.add.at(deg, e[:, 0], 1)
            np.add.at(deg, e[:, 1], 1)
        return deg

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) with each neighbour list sorted by node id."""
        n = self.node_count
        if not self.edges:
            return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
        e = np.asarray(self.edges, dtype=np.int64)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return indptr, dst[order]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.node_count, self.node_count), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def neighbors(self, u: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[u]:indptr[u + 1]]

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


class PropertyVector(NamedTuple):
    nodes: int
    edges: int
    avg_degree: float
    avg_cc: float
    cyc3: int
    cyc4: int
    cyc5: int
    cyc6: int


@numba.njit(cache=True)
def _local_triangles(indptr, indices):
    n = indptr.shape[0] - 1
    tri = np.zeros(n, dtype=np.int64)
    mark = np.zeros(n, dtype=np.bool_)
    for u in range(n):
        for a in range(indptr[u], indptr[u + 1]):
            mark[indices[a]] = True
        for a in range(indptr[u], indptr[u + 1]):
            v = indices[a]
            for b in range(indptr[v], indptr[v + 1]):
                if mark[indices[b]]:
                    tri[u] += 1
        for a in range(indptr[u], indptr[u + 1]):
            mark[indices[a]] = False
    # each triangle at u was seen once from each of its two other corners
    return tri // 2


@numba.njit(cache=True)
def _cycle_counts(indptr, indices, max_len):
    # Canonical enumeration: the cycle's smallest node s is the start, every
    # other node is > s, and of the two directions only the one whose
    # second node is smaller than its last node is kept.
    n = indptr.shape[0] - 1
    counts = np.zeros(max_len + 1, dtype=np.int64)
    path = np.zeros(max_len, dtype=np.int64)
    ptr = np.zeros(max_len, dtype=np.int64)
    on_path = np.zeros(n, dtype=np.bool_)
    adj_s = np.zeros(n, dtype=np.bool_)
    for s in range(n):
        for a in range(indptr[s], indptr[s + 1]):
            adj_s[indices[a]] = True
        path[0] = s
        on_path[s] = True
        depth = 1
        ptr[1] = indptr[s]
        while depth > 0:
            prev = path[depth - 1]
            if ptr[depth] < indptr[prev + 1]:
                v = indices[ptr[depth]]
                ptr[depth] += 1
                if v <= s or on_path[v]:
                    continue
                # depth counts nodes already on the path, v is node depth+1
                length = depth + 1
                if length >= 3 and adj_s[v] and path[1] < v:
                    counts[length] += 1
                if length < max_len:
                    path[depth] = v
                    on_path[v] = True
                    depth += 1
                    ptr[depth] = indptr[v]
            else:
                depth -= 1
                on_path[path[depth]] = False
        on_path[s] = False
        for a in range(indptr[s], indptr[s + 1]):
            adj_s[indices[a]] = False
    return counts


def local_clustering(g: Graph) -> np.ndarray:
    """Per-node clustering coefficient; nodes of degree < 2 get 0."""
    indptr, indices = g.csr
    tri = _local_triangles(indptr, indices)
    d = g.degrees
    wedges = d * (d - 1) / 2
    out = np.zeros(g.node_count)
    ok = d >= 2
    out[ok] = tri[ok] / wedges[ok]
    return out


def average_clustering(g: Graph) -> float:
    return float(local_clustering(g).mean())


def cycle_counts(g: Graph) -> dict[int, int]:
    """Number of simple cycles of each length 3..6 in one pass."""
    indptr, indices = g.csr
    c = _cycle_counts(indptr, indices, 6)
    return {k: int(c[k]) for k in CYCLE_LENGTHS}


def count_cycles(g: Graph, k: int) -> int:
    if k not in CYCLE_LENGTHS:
        raise GraphError(f"cycle length must be one of {CYCLE_LENGTHS}, got {k}")
    indptr, indices = g.csr
    return int(_cycle_counts(indptr, indices, int(k))[k])


def extract_properties(g: Graph) -> PropertyVector:
    cyc = cycle_counts(g)
    return PropertyVector(
        nodes=g.node_count,
        edges=g.edge_count,
        avg_degree=2.0 * g.edge_count / g.node_count,
        avg_cc=average_clustering(g),
        cyc3=cyc[3], cyc4=cyc[4], cyc5=cyc[5], cyc6=cyc[6],
    )


def property_matrix(graphs: Sequence[Graph]) -> np.ndarray:
    """N x 8 array of property vectors, columns in ``PROPERTY_NAMES`` order."""
    if len(graphs) == 0:
        raise GraphError("empty dataset")
    return np.array([extract_properties(g) for g in graphs], dtype=float)


def property_sequences(graphs: Sequence[Graph]) -> dict[str, np.ndarray]:
    """Map each property name to its per-graph sequence, in dataset order."""
    m = property_matrix(graphs)
    return {name: m[:, j] for j, name in enumerate(PROPERTY_NAMES)}
