"""Graph kernels (Weisfeiler-Lehman subtree, shortest path) and a kernel
ridge classifier on top of them."""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.linalg import solve
from scipy.sparse.csgraph import shortest_path

from .graph import Graph


def wl_features(graphs: Sequence[Graph], iterations: int) -> list:
    """Sparse color-count matrices, one per refinement round 0..iterations.

    Round 0 colors every node by its degree. Each later round relabels a
    node by (own color, sorted multiset of neighbour colors); the relabel
    table is shared by all graphs so equal colors mean equal subtrees.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    colors = [g.degrees.tolist() for g in graphs]
    blocks = []
    for it in range(iterations + 1):
        if it > 0:
            table = {}
            new = []
            for g, col in zip(graphs, colors):
                indptr, indices = g.csr
                sig = [(col[u], tuple(sorted(col[v] for v in indices[indptr[u]:indptr[u + 1]])))
                       for u in range(g.node_count)]
                new.append([table.setdefault(s, len(table)) for s in sig])
            colors = new
        else:
            # compress degrees to 0..k-1 so every block is indexed from 0
            table = {}
            colors = [[table.setdefault(c, len(table)) for c in col] for col in colors]
        rows = np.repeat(np.arange(len(graphs)), [len(c) for c in colors])
        cols = np.concatenate([np.asarray(c, dtype=np.int64) for c in colors])
        blocks.append(sparse.csr_matrix((np.ones_like(cols, dtype=float), (rows, cols)),
                                        shape=(len(graphs), len(table))))
    return blocks


def wl_kernel(graphs: Sequence[Graph], iterations: int = 3) -> np.ndarray:
    """WL subtree kernel summed over rounds 0..iterations."""
    return wl_kernels(graphs, [iterations])[iterations]


def wl_kernels(graphs: Sequence[Graph], iterations: Sequence[int]) -> dict:
    """Kernels for several iteration counts from one refinement pass."""
    hmax = max(iterations)
    blocks = wl_features(graphs, hmax)
    out = {}
    k = np.zeros((len(graphs), len(graphs)))
    for h, b in enumerate(blocks):
        k = k + (b @ b.T).toarray()
        if h in iterations:
            out[h] = k.copy()
    return out


def sp_histograms(graphs: Sequence[Graph]) -> np.ndarray:
    """Row i counts the unordered node pairs of graph i at each finite
    shortest-path distance 1, 2, ...; unreachable pairs are skipped."""
    hists = []
    for g in graphs:
        n = g.node_count
        if g.edge_count == 0:
            hists.append(np.zeros(1, dtype=np.int64))
            continue
        e = np.asarray(g.edges)
        a = sparse.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        d = shortest_path(a.tocsr(), directed=False, unweighted=True)
        iu = np.triu_indices(n, 1)
        dist = d[iu]
        dist = dist[np.isfinite(dist)].astype(np.int64)
        hists.append(np.bincount(dist))
    width = max(len(h) for h in hists)
    out = np.zeros((len(graphs), width), dtype=np.int64)
    for i, h in enumerate(hists):
        out[i, :len(h)] = h
    # distance 0 never occurs between distinct nodes
    return out[:, 1:] if width > 1 else np.zeros((len(graphs), 1), dtype=np.int64)


def sp_kernel(graphs: Sequence[Graph]) -> np.ndarray:
    h = sp_histograms(graphs).astype(float)
    return h @ h.T


def normalize_kernel(k: np.ndarray) -> np.ndarray:
    """Cosine normalisation; rows with zero self-similarity stay zero."""
    d = np.sqrt(np.clip(np.diag(k), 0, None))
    inv = np.where(d > 0, 1.0 / np.where(d > 0, d, 1.0), 0.0)
    return k * inv[:, None] * inv[None, :]


class KernelRidgeClassifier:
    """One-vs-all kernel ridge on centred one-hot targets.

    Solves (K + alpha I) C = Y - mean(Y) and predicts the class with the
    largest K_cross C + mean(Y).
    """

    def __init__(self, alpha=1.0):
        if not alpha > 0:
            raise ValueError(f"alpha must be > 0, got {alpha}")
        self.alpha = alpha

    def fit(self, k_train, y):
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        onehot = (y[:, None] == self.classes_[None, :]).astype(float)
        self.offset_ = onehot.mean(axis=0)
        n = k_train.shape[0]
        self.dual_coef_ = solve(k_train + self.alpha * np.eye(n), onehot - self.offset_,
                                assume_a="pos")
        return self

    def decision_function(self, k_cross):
        return k_cross @ self.dual_coef_ + self.offset_

    def predict(self, k_cross):
        return self.classes_[np.argmax(self.decision_function(k_cross), axis=1)]
