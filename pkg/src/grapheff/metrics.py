"""Performance gaps, complexity factor and dataset effectiveness, plus the
correlation statistics used to relate graph properties to labels.

For a dataset with |Y| classes and, per information type (structural S,
attributed A), a graph-aware method and a baseline with scores R1, R2:

    delta  = R(graph) - R(baseline)
    R*     = min(R1, R2)
    lambda = (1 - R*) / (1 - 1/|Y|)
    E      = sum over types of |delta| / (R* (|Y| - 1)) * lambda
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .dataio import INFO_TYPES, ResultRecord


class MetricError(ValueError):
    pass


class UndefinedCorrelation(MetricError):
    """Correlation with a constant sequence."""


_RAISE = object()


# -- correlation ---------------------------------------------------------------

def pearson(x, y, undefined=_RAISE):
    """Sample Pearson correlation.

    A constant input has no correlation; by default that raises
    :class:`UndefinedCorrelation`, otherwise ``undefined`` is returned.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise MetricError(f"need two 1-d sequences of equal length, got {x.shape} and {y.shape}")
    if x.shape[0] < 2:
        raise MetricError("need at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.sqrt(xc @ xc)
    sy = np.sqrt(yc @ yc)
    # relative threshold: a sequence of identical floats can leave
    # rounding residue after centring
    if sx <= 1e-12 * max(1.0, np.abs(x).max()) * np.sqrt(x.shape[0]) or \
       sy <= 1e-12 * max(1.0, np.abs(y).max()) * np.sqrt(y.shape[0]):
        if undefined is _RAISE:
            raise UndefinedCorrelation("correlation undefined for a constant sequence")
        return undefined
    return float(np.clip((xc @ yc) / (sx * sy), -1.0, 1.0))


def spearman(x, y, undefined=_RAISE):
    """Pearson correlation of mid-ranks (ties share their average rank)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise MetricError("need two 1-d sequences of equal length")
    return pearson(rankdata(x), rankdata(y), undefined)


def property_label_correlations(graphs, labels) -> dict:
    """Pearson correlation between each of the 8 property sequences and the
    labels, taken as numbers 0..C-1. Constant properties map to ``None``."""
    from .graph import property_sequences
    seqs = property_sequences(graphs)
    return {name: pearson(seq, labels, undefined=None) for name, seq in seqs.items()}


# -- gaps and effectiveness -----------------------------------------------------

@dataclass
class GapRecord:
    info_type: str
    graph_method: ResultRecord
    baseline: ResultRecord
    delta: float
    r_star: float


def performance_gap(graph_result: ResultRecord, baseline_result: ResultRecord) -> GapRecord:
    g, b = graph_result, baseline_result
    if g.dataset != b.dataset:
        raise MetricError(f"records are for different datasets: {g.dataset!r} vs {b.dataset!r}")
    if g.info_type != b.info_type:
        raise MetricError(f"records have different info types: {g.info_type} vs {b.info_type}")
    if g.metric != b.metric:
        raise MetricError(f"records use different metrics: {g.metric} vs {b.metric}")
    return GapRecord(g.info_type, g, b, g.mean - b.mean, min(g.mean, b.mean))


def select_best_gap(records: Sequence[ResultRecord], info_type: Optional[str] = None) -> GapRecord:
    """Gap between the baseline and the best graph-aware method of one type.

    "Best" is the highest graph-method score, i.e. the largest signed gap;
    ties go to the lexicographically first method name.
    """
    recs = [r for r in records if info_type is None or r.info_type == info_type]
    base = [r for r in recs if r.is_baseline]
    graph = [r for r in recs if not r.is_baseline]
    if len(base) != 1:
        raise MetricError(f"expected exactly one baseline record, found {len(base)}")
    if not graph:
        raise MetricError("no graph-method records")
    best = min(graph, key=lambda r: (-r.mean, r.method))
    return performance_gap(best, base[0])


def complexity_factor(r_star: float, class_count: int) -> float:
    if int(class_count) != class_count or class_count < 2:
        raise MetricError(f"class count must be an integer >= 2, got {class_count}")
    if not 0.0 <= r_star <= 1.0:
        raise MetricError(f"r_star must be in [0, 1], got {r_star}")
    return (1.0 - r_star) / (1.0 - 1.0 / class_count)


def effectiveness_term(delta: float, r_star: float, class_count: int) -> float:
    if r_star <= 0:
        raise MetricError("r_star must be > 0 (division by zero)")
    lam = complexity_factor(r_star, class_count)
    return abs(delta) / (r_star * (class_count - 1)) * lam


@dataclass
class TypeTerm:
    delta: float
    r_star: float
    lam: float
    contribution: float
    graph_method: str = ""
    baseline: str = ""


@dataclass
class EffectivenessReport:
    dataset: str
    class_count: int
    per_type: dict
    total_effectiveness: float
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "dataset": self.dataset,
            "class_count": self.class_count,
            "per_type": {t: vars(v).copy() for t, v in self.per_type.items()},
            "total_effectiveness": self.total_effectiveness,
            "notes": list(self.notes),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def contribution(self, info_type):
        t = self.per_type.get(info_type)
        return 0.0 if t is None else t.contribution


def effectiveness(gaps: Sequence[GapRecord], class_count: int, dataset: str = "") -> EffectivenessReport:
    """Sum the per-type terms. A missing type (no attributed results)
    contributes nothing."""
    per_type = {}
    for gap in gaps:
        if gap.info_type in per_type:
            raise MetricError(f"more than one gap for type {gap.info_type}")
        lam = complexity_factor(gap.r_star, class_count)
        per_type[gap.info_type] = TypeTerm(
            gap.delta, gap.r_star, lam,
            effectiveness_term(gap.delta, gap.r_star, class_count),
            gap.graph_method.method, gap.baseline.method)
    if "S" not in per_type:
        raise MetricError("a structural (S) gap is required")
    notes = []
    if "A" not in per_type:
        notes.append("no attributed results; effectiveness is structural only")
    if not dataset and gaps:
        dataset = gaps[0].graph_method.dataset
    total = sum(per_type[t].contribution for t in INFO_TYPES if t in per_type)
    return EffectivenessReport(dataset, int(class_count), per_type, float(total), notes)


def effectiveness_pair(score_1: float, score_2: float, class_count: int) -> float:
    """Effectiveness of a single pair of methods (one information type)."""
    return effectiveness_term(score_1 - score_2, min(score_1, score_2), class_count)


def report_from_records(records: Sequence[ResultRecord], class_count: int) -> list[EffectivenessReport]:
    """One report per dataset, using the best graph method of each type."""
    by_ds = {}
    for r in records:
        by_ds.setdefault(r.dataset, []).append(r)
    reports = []
    for ds, recs in by_ds.items():
        metrics_used = {r.metric for r in recs}
        if len(metrics_used) != 1:
            raise MetricError(f"{ds}: mixed metrics {sorted(metrics_used)}")
        gaps = [select_best_gap(recs, t) for t in INFO_TYPES
                if any(r.info_type == t for r in recs)]
        reports.append(effectiveness(gaps, class_count, ds))
    return reports


def format_table(reports: Sequence[EffectivenessReport]) -> str:
    """Plain-text table: one row per dataset, attributed and structural
    contributions side by side."""
    head = ("dataset", "|Y|", "E_A", "E_S", "E")
    rows = [head]
    for rep in reports:
        a = rep.per_type.get("A")
        rows.append((rep.dataset, str(rep.class_count),
                     "NA" if a is None else f"{a.contribution:.4f}",
                     f"{rep.contribution('S'):.4f}",
                     f"{rep.total_effectiveness:.4f}"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
    lines = ["  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                       for i, (c, w) in enumerate(zip(r, widths))) for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
