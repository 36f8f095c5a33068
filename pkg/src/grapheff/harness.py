"""Stratified k-fold risk assessment with inner hold-out model selection,
and gap measurement between graph-aware methods and baselines."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .dataio import ResultRecord
from .graph import property_matrix
from .metrics import (EffectivenessReport, GapRecord, MetricError, effectiveness,
                      select_best_gap)
from .models import FAST_ROSTER, ModelSpec, PropertyFeatures, RosterError, build_roster


class FoldError(ValueError):
    pass


@dataclass
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int

    def split(self, fold):
        test = np.flatnonzero(self.assignments == fold)
        train = np.flatnonzero(self.assignments != fold)
        return train, test


def stratified_kfold(labels, k=10, seed=0) -> FoldPlan:
    """Shuffle each class and deal its members round-robin over the folds.

    Successive classes continue the deal where the previous one stopped, so
    fold sizes differ by at most one overall and per class.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise FoldError(f"k must be >= 2, got {k}")
    classes, counts = np.unique(labels, return_counts=True)
    if np.any(counts < k):
        c = classes[np.argmin(counts)]
        raise FoldError(f"class {c} has {counts.min()} members, fewer than k={k}")
    rng = np.random.default_rng(seed)
    assign = np.empty(labels.shape[0], dtype=np.int64)
    start = 0
    for c in classes:
        idx = rng.permutation(np.flatnonzero(labels == c))
        assign[idx] = (start + np.arange(idx.shape[0])) % k
        start = (start + idx.shape[0]) % k
    return FoldPlan(k, assign, seed)


def holdout_split(labels, fraction=0.1, seed=0):
    """Stratified train/validation split of positions ``0..len(labels)-1``."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    val = []
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        n_val = int(round(fraction * idx.shape[0]))
        if idx.shape[0] >= 2:
            n_val = min(max(n_val, 1), idx.shape[0] - 1)
        else:
            n_val = 0
        val.append(idx[:n_val])
    val = np.sort(np.concatenate(val)) if val else np.zeros(0, dtype=np.int64)
    mask = np.ones(labels.shape[0], dtype=bool)
    mask[val] = False
    return np.flatnonzero(mask), val


def compute_auc(scores, labels) -> float:
    """Area under the ROC curve from ranks; tied scores count one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n1 = int(pos.sum())
    n0 = labels.shape[0] - n1
    if n1 == 0 or n0 == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n1 * (n1 + 1) / 2.0) / (n1 * n0))


@dataclass
class ModelResult:
    name: str
    fold_accuracy: np.ndarray
    fold_auc: Optional[np.ndarray]
    selected: list

    @property
    def mean(self):
        return float(np.mean(self.fold_accuracy))

    @property
    def std(self):
        # population std over folds
        return float(np.std(self.fold_accuracy))

    @property
    def auc_mean(self):
        return None if self.fold_auc is None else float(np.mean(self.fold_auc))

    @property
    def auc_std(self):
        return None if self.fold_auc is None else float(np.std(self.fold_auc))


def _fold_seed(seed, fold):
    return int(np.random.SeedSequence([int(seed), 17, int(fold)]).generate_state(1)[0])


def _run_fold(args):
    model, data, labels, plan, fold, seed = args
    train, test = plan.split(fold)
    fseed = _fold_seed(seed, fold)
    inner_tr, inner_val = holdout_split(labels[train], 0.1, fseed)
    inner_tr, inner_val = train[inner_tr], train[inner_val]
    points = model.grid_points()
    best, best_acc = points[0], -1.0
    if len(points) > 1 and inner_val.size:
        for p in points:
            fitted = model.fit(data, inner_tr, labels[inner_tr], p, fseed)
            pred, _ = model.decision(fitted, data, inner_val, inner_tr)
            acc = float(np.mean(pred == labels[inner_val]))
            # strict improvement: ties keep the earlier grid point
            if acc > best_acc:
                best, best_acc = p, acc
    fitted = model.fit(data, train, labels[train], best, fseed)
    pred, score = model.decision(fitted, data, test, train)
    acc = float(np.mean(pred == labels[test]))
    auc = None
    if np.unique(labels).size == 2 and np.unique(labels[test]).size == 2:
        auc = compute_auc(score, labels[test] == labels.max())
    return acc, auc, best


def run_risk_assessment(graphs, labels, model: ModelSpec, k=10, seed=0,
                        props=None, data=None, jobs=1) -> ModelResult:
    labels = np.asarray(labels)
    plan = stratified_kfold(labels, k, seed)
    if data is None:
        data = model.prepare(graphs, props)
    work = [(model, data, labels, plan, f, seed) for f in range(k)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            out = list(ex.map(_run_fold, work))
    else:
        out = [_run_fold(w) for w in work]
    accs = np.array([o[0] for o in out])
    aucs = [o[1] for o in out]
    fold_auc = None if any(a is None for a in aucs) else np.array(aucs)
    return ModelResult(model.name, accs, fold_auc, [o[2] for o in out])


@dataclass
class GapMeasurement:
    records: list
    gaps: list
    report: EffectivenessReport
    results: dict = field(default_factory=dict)

    def gap(self, info_type="S") -> GapRecord:
        return next(g for g in self.gaps if g.info_type == info_type)


def measure_gaps(graphs, labels, roster: Sequence = FAST_ROSTER, k=10, seed=0,
                 dataset="dataset", metric="accuracy", class_count=None,
                 props=None, jobs=1) -> GapMeasurement:
    """Risk-assess every roster model, pair the best graph method of each
    information type with that type's baseline and compute effectiveness."""
    labels = np.asarray(labels)
    specs = build_roster(roster) if roster and not isinstance(roster[0], ModelSpec) else list(roster)
    types = {m.info_type for m in specs}
    for t in types:
        nb = sum(m.role == "baseline" and m.info_type == t for m in specs)
        if nb != 1:
            raise RosterError(f"roster needs exactly one baseline for type {t}, has {nb}")
    if metric not in ("accuracy", "auc_roc"):
        raise MetricError(f"unknown metric {metric!r}")
    if metric == "auc_roc" and np.unique(labels).size != 2:
        raise MetricError("auc_roc is only defined for binary datasets")
    if props is None and any(isinstance(m, PropertyFeatures) for m in specs):
        props = property_matrix(graphs)
    results, records = {}, []
    for m in specs:
        res = run_risk_assessment(graphs, labels, m, k, seed, props=props, jobs=jobs)
        results[m.name] = res
        if metric == "auc_roc":
            mean, std = res.auc_mean, res.auc_std
        else:
            mean, std = res.mean, res.std
        records.append(ResultRecord(dataset, m.name, m.info_type, metric,
                                    float(mean), float(std), m.role))
    gaps = [select_best_gap(records, t) for t in ("S", "A") if t in types]
    if class_count is None:
        class_count = int(np.unique(labels).size)
    report = effectiveness(gaps, class_count, dataset)
    return GapMeasurement(records, gaps, report, results)
