"""Classifiers compared by the evaluation harness.

Each roster entry is a :class:`ModelSpec`: it precomputes dataset-level
inputs once (feature matrix or kernel matrices) and then fits and predicts
on index subsets, so cross-validation never recomputes features.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import PROPERTY_NAMES, property_matrix
from .kernels import KernelRidgeClassifier, normalize_kernel, sp_kernel, wl_kernels


class DegenerateFeatureWarning(UserWarning):
    pass


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


class LogisticClassifier:
    """Full-batch gradient-descent logistic regression on z-scored inputs.

    Binary problems fit a single model; with more classes one model per
    class (one-vs-rest). ``hidden > 0`` switches to a one-hidden-layer tanh
    network with a softmax output.
    """

    def __init__(self, lr=0.1, epochs=500, hidden=0, l2=1e-4, seed=0):
        self.lr = lr
        self.epochs = epochs
        self.hidden = hidden
        self.l2 = l2
        self.seed = seed

    def _scale(self, x):
        return (x - self.mu_) / self.sd_

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        self.mu_ = x.mean(axis=0)
        sd = x.std(axis=0)
        if np.any(sd == 0):
            warnings.warn("constant input feature; it carries no signal",
                          DegenerateFeatureWarning, stacklevel=2)
        self.sd_ = np.where(sd > 0, sd, 1.0)
        z = self._scale(x)
        onehot = (y[:, None] == self.classes_[None, :]).astype(float)
        if self.hidden:
            self._fit_mlp(z, onehot)
        else:
            targets = onehot[:, 1:] if len(self.classes_) == 2 else onehot
            self._fit_logistic(z, targets)
        return self

    def _fit_logistic(self, z, t):
        n, d = z.shape
        w = np.zeros((d, t.shape[1]))
        b = np.zeros(t.shape[1])
        for _ in range(self.epochs):
            p = _sigmoid(z @ w + b)
            g = p - t
            w -= self.lr * (z.T @ g / n + self.l2 * w)
            b -= self.lr * g.mean(axis=0)
        self.w_, self.b_ = w, b

    def _fit_mlp(self, z, onehot):
        rng = np.random.default_rng(self.seed)
        n, d = z.shape
        h, c = self.hidden, onehot.shape[1]
        w1 = rng.normal(0, 1 / np.sqrt(d), (d, h))
        b1 = np.zeros(h)
        w2 = rng.normal(0, 1 / np.sqrt(h), (h, c))
        b2 = np.zeros(c)
        for _ in range(self.epochs):
            a = np.tanh(z @ w1 + b1)
            logits = a @ w2 + b2
            logits -= logits.max(axis=1, keepdims=True)
            p = np.exp(logits)
            p /= p.sum(axis=1, keepdims=True)
            g2 = (p - onehot) / n
            ga = (g2 @ w2.T) * (1 - a ** 2)
            w2 -= self.lr * (a.T @ g2 + self.l2 * w2)
            b2 -= self.lr * g2.sum(axis=0)
            w1 -= self.lr * (z.T @ ga + self.l2 * w1)
            b1 -= self.lr * ga.sum(axis=0)
        self.params_ = (w1, b1, w2, b2)

    def decision_function(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        z = self._scale(x)
        if self.hidden:
            w1, b1, w2, b2 = self.params_
            s = np.tanh(z @ w1 + b1) @ w2 + b2
            return s[:, 1] - s[:, 0] if len(self.classes_) == 2 else s
        s = z @ self.w_ + self.b_
        return s[:, 0] if len(self.classes_) == 2 else s

    def predict(self, x):
        s = self.decision_function(x)
        if s.ndim == 1:
            return self.classes_[(s > 0).astype(int)]
        return self.classes_[np.argmax(s, axis=1)]


@dataclass
class ModelSpec:
    """A roster entry. Subclasses define ``prepare``, ``fit`` and
    ``decision``."""

    name: str
    role: str = "graph"
    info_type: str = "S"
    grid: dict = field(default_factory=dict)

    def prepare(self, graphs, props=None):
        """Dataset-level inputs; ``props`` is an optional precomputed
        property matrix (rows in ``PROPERTY_NAMES`` order)."""
        raise NotImplementedError

    def grid_points(self):
        keys = sorted(self.grid)
        points = [{}]
        for k in keys:
            points = [dict(p, **{k: v}) for p in points for v in self.grid[k]]
        return points


class _FeatureLogistic(ModelSpec):
    def fit(self, data, idx, y, params, seed):
        clf = LogisticClassifier(lr=params.get("lr", 0.1), epochs=params.get("epochs", 500),
                                 hidden=params.get("hidden", 0), seed=seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateFeatureWarning)
            return clf.fit(data[idx], y)

    def decision(self, fitted, data, idx, train_idx):
        return fitted.predict(data[idx]), fitted.decision_function(data[idx])


class DegreeBaseline(_FeatureLogistic):
    """Structure-only baseline: the average degree of each graph."""

    def prepare(self, graphs, props=None):
        if props is not None:
            return props[:, PROPERTY_NAMES.index("avg_degree")][:, None]
        return np.array([[2.0 * g.edge_count / g.node_count] for g in graphs])


class PropertyFeatures(_FeatureLogistic):
    """All eight graph properties as a feature vector."""

    def prepare(self, graphs, props=None):
        return property_matrix(graphs) if props is None else props


class _KernelRidge(ModelSpec):
    def fit(self, data, idx, y, params, seed):
        k = data[params.get("h")] if isinstance(data, dict) else data
        return (KernelRidgeClassifier(params.get("alpha", 1.0)).fit(k[np.ix_(idx, idx)], y),
                params.get("h"))

    def decision(self, fitted, data, idx, train_idx):
        clf, h = fitted
        k = data[h] if isinstance(data, dict) else data
        s = clf.decision_function(k[np.ix_(idx, train_idx)])
        pred = clf.classes_[np.argmax(s, axis=1)]
        return pred, (s[:, 1] - s[:, 0]) if s.shape[1] == 2 else s


class WLKernel(_KernelRidge):
    def prepare(self, graphs, props=None):
        hs = list(self.grid.get("h", [3]))
        return {h: normalize_kernel(k) for h, k in wl_kernels(graphs, hs).items()}


class SPKernel(_KernelRidge):
    def prepare(self, graphs, props=None):
        return normalize_kernel(sp_kernel(graphs))


LR_GRID = {"lr": [0.1, 0.01], "epochs": [500]}
ALPHA_GRID = [1e-3, 1e-1, 10.0]

REGISTRY = {
    "degree": lambda: DegreeBaseline("degree_baseline", "baseline", "S", dict(LR_GRID)),
    "degree_mlp": lambda: DegreeBaseline("degree_mlp_baseline", "baseline", "S",
                                         dict(LR_GRID, hidden=[8])),
    "properties": lambda: PropertyFeatures("property_features", "graph", "S", dict(LR_GRID)),
    "wl": lambda: WLKernel("wl_kernel", "graph", "S", {"h": [1, 2, 3], "alpha": ALPHA_GRID}),
    "sp": lambda: SPKernel("sp_kernel", "graph", "S", {"alpha": ALPHA_GRID}),
}

FAST_ROSTER = ("degree", "properties")
DEFAULT_ROSTER = ("degree", "properties", "wl", "sp")


class RosterError(ValueError):
    pass


def build_roster(entries) -> list[ModelSpec]:
    """Entries are registry names or dicts ``{"model": name, "grid": {...},
    "name": ..., "role": ..., "info_type": ...}``."""
    out = []
    for e in entries:
        if isinstance(e, str):
            e = {"model": e}
        if not isinstance(e, dict) or "model" not in e:
            raise RosterError(f"bad roster entry {e!r}")
        key = e["model"]
        if key not in REGISTRY:
            raise RosterError(f"unknown model {key!r}; known: {sorted(REGISTRY)}")
        spec = REGISTRY[key]()
        for attr in ("name", "role", "info_type"):
            if attr in e:
                setattr(spec, attr, e[attr])
        if "grid" in e:
            spec.grid = {k: list(v) for k, v in e["grid"].items()}
        if spec.role not in ("baseline", "graph"):
            raise RosterError(f"{spec.name}: role must be 'baseline' or 'graph'")
        if not spec.grid_points() or any(len(v) == 0 for v in spec.grid.values()):
            raise RosterError(f"{spec.name}: empty hyperparameter grid")
        out.append(spec)
    return out
