"""Predicting dataset effectiveness from cheap statistics.

Each dataset is split into 10 stratified subsets. Every subset gets a
26-entry feature vector and a measured effectiveness (degree baseline vs.
property-feature classifier, 10-fold CV). A ridge regressor is trained on
the subsets of 70% of the datasets and scored on the subsets of the rest.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import PROPERTY_NAMES, property_matrix
from .harness import measure_gaps
from .metrics import pearson, spearman
from .models import FAST_ROSTER

log = logging.getLogger(__name__)

FEATURE_NAMES = tuple(
    [f"{p}_mean" for p in PROPERTY_NAMES]
    + [f"{p}_std" for p in PROPERTY_NAMES]
    + [f"{p}_label_corr" for p in PROPERTY_NAMES]
    + ["log10_graph_count", "class_count"]
)
assert len(FEATURE_NAMES) == 26

MIN_SUBSET = 50


class RegressionError(ValueError):
    pass


def split_into_subsets(labels, parts=10, seed=0) -> list[np.ndarray]:
    """Disjoint stratified subsets of near-equal size (index arrays)."""
    labels = np.asarray(labels)
    n = labels.shape[0]
    if n < parts * MIN_SUBSET:
        raise RegressionError(f"{n} samples cannot make {parts} subsets of >= {MIN_SUBSET}")
    rng = np.random.default_rng(seed)
    assign = np.empty(n, dtype=np.int64)
    start = 0
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        assign[idx] = (start + np.arange(idx.shape[0])) % parts
        start = (start + idx.shape[0]) % parts
    return [np.flatnonzero(assign == p) for p in range(parts)]


def dataset_features(props: np.ndarray, labels) -> tuple[np.ndarray, list]:
    """26 features and the names of properties whose label correlation was
    undefined (encoded as 0)."""
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size < 2:
        raise RegressionError("need at least two classes")
    props = np.asarray(props, dtype=float)
    corr, flagged = [], []
    for j, name in enumerate(PROPERTY_NAMES):
        r = pearson(props[:, j], labels, undefined=None)
        if r is None:
            flagged.append(name)
            r = 0.0
        corr.append(r)
    x = np.concatenate([props.mean(axis=0), props.std(axis=0), corr,
                        [math.log10(labels.shape[0]), classes.size]])
    return x, flagged


@dataclass
class RidgeModel:
    mean: np.ndarray
    scale: np.ndarray
    weights: np.ndarray
    intercept: float
    alpha: float


def ridge_fit(x, y, alpha=1.0) -> RidgeModel:
    """Closed-form ridge on z-scored features with an unpenalised intercept."""
    if not alpha > 0:
        raise RegressionError("alpha must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    z = (x - mu) / sd
    ybar = y.mean()
    w = np.linalg.solve(z.T @ z + alpha * np.eye(z.shape[1]), z.T @ (y - ybar))
    return RidgeModel(mu, sd, w, float(ybar), alpha)


def ridge_predict(model: RidgeModel, x) -> np.ndarray:
    z = (np.asarray(x, dtype=float) - model.mean) / model.scale
    return z @ model.weights + model.intercept


def permutation_pvalue(pred, target, n_perm=10_000, seed=0) -> float:
    """Two-sided permutation p-value for the Pearson correlation."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    r0 = abs(pearson(pred, target))
    rng = np.random.default_rng(seed)
    pc = pred - pred.mean()
    pc /= np.linalg.norm(pc)
    tc = target - target.mean()
    tc /= np.linalg.norm(tc)
    hits = 0
    for chunk in np.array_split(np.arange(n_perm), max(1, n_perm // 1000)):
        perms = np.argsort(rng.random((chunk.size, tc.size)), axis=1)
        r = np.abs(tc[perms] @ pc)
        hits += int(np.sum(r >= r0 - 1e-12))
    return (hits + 1) / (n_perm + 1)


@dataclass
class RegressionScore:
    pearson: float
    p_value: float
    spearman: float


def evaluate_regression(predictions, targets, n_perm=10_000, seed=0) -> RegressionScore:
    predictions = np.asarray(predictions, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if predictions.shape[0] < 3:
        raise RegressionError("need at least 3 test samples")
    return RegressionScore(pearson(predictions, targets),
                           permutation_pvalue(predictions, targets, n_perm, seed),
                           spearman(predictions, targets))


@dataclass
class RegressionSample:
    source: str
    subset: int
    features: np.ndarray
    target: float
    flagged: list = field(default_factory=list)


def subset_samples(name, graphs, labels, parts=10, seed=0, props=None, k=10,
                   roster=FAST_ROSTER, jobs=1) -> list[RegressionSample]:
    """Features and measured effectiveness for each subset of one dataset."""
    labels = np.asarray(labels)
    if props is None:
        props = property_matrix(graphs)
    out = []
    for i, idx in enumerate(split_into_subsets(labels, parts, seed)):
        sub_graphs = [graphs[j] for j in idx]
        m = measure_gaps(sub_graphs, labels[idx], roster, k=k, seed=seed,
                         dataset=f"{name}#{i}", props=props[idx], jobs=jobs)
        x, flagged = dataset_features(props[idx], labels[idx])
        if flagged:
            log.info("%s#%d: undefined label correlation for %s", name, i, flagged)
        out.append(RegressionSample(name, i, x, m.report.total_effectiveness, flagged))
    return out


@dataclass
class RegressionRun:
    samples: list
    repeats: list                     # RegressionScore per repeat
    predictions: list                 # per repeat: {(source, subset): prediction}
    test_sources: list

    def summary(self, regressor="Ridge") -> dict:
        pr = np.array([s.pearson for s in self.repeats])
        pv = np.array([s.p_value for s in self.repeats])
        sp = np.array([s.spearman for s in self.repeats])
        return {"regressor": regressor,
                "pearson_mean": float(pr.mean()), "pearson_std": float(pr.std()),
                "p_value_mean": float(pv.mean()), "p_value_max": float(pv.max()),
                "spearman_mean": float(sp.mean()), "spearman_std": float(sp.std()),
                "repeats": len(self.repeats), "samples": len(self.samples)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "subset", *FEATURE_NAMES, "target", "prediction"])
        last = self.predictions[-1] if self.predictions else {}
        for s in self.samples:
            pred = last.get((s.source, s.subset))
            w.writerow([s.source, s.subset, *(repr(float(v)) for v in s.features),
                        repr(float(s.target)), "" if pred is None else repr(float(pred))])
        return buf.getvalue()


def regress_effectiveness(samples: Sequence[RegressionSample], repeats=10, test_fraction=0.3,
                          alpha=1.0, seed=0, n_perm=10_000) -> RegressionRun:
    """Repeated dataset-level 70/30 splits: all subsets of a test dataset
    stay out of training."""
    sources = sorted({s.source for s in samples})
    if len(sources) < 2:
        raise RegressionError("need samples from at least two datasets")
    n_test = min(len(sources) - 1, max(1, int(round(test_fraction * len(sources)))))
    x = np.array([s.features for s in samples])
    y = np.array([s.target for s in samples])
    src = np.array([s.source for s in samples])
    rng = np.random.default_rng(seed)
    scores, preds, tests = [], [], []
    for rep in range(repeats):
        test_src = sorted(rng.choice(sources, n_test, replace=False).tolist())
        te = np.isin(src, test_src)
        model = ridge_fit(x[~te], y[~te], alpha)
        p = ridge_predict(model, x[te])
        scores.append(evaluate_regression(p, y[te], n_perm, seed + rep))
        preds.append({(s.source, s.subset): float(v)
                      for s, v in zip((s for s, t in zip(samples, te) if t), p)})
        tests.append(test_src)
    return RegressionRun(list(samples), scores, preds, tests)
