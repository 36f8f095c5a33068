"""Syn-Degree and Syn-CC: graph datasets whose label correlation with one
property is set by construction.

A correlated table supplies one property target and one label per sample,
then a graph is generated to hit each target:

* average degree: Erdos-Renyi G(n, p) with p = d / (n - 1), resampled until
  the realised average degree is within tolerance;
* average clustering: a fixed number of edges m = round(d n / 2), of which
  ``t`` triangles are planted (each anchored at a currently lowest-degree
  node) and the rest are uniform random pairs. ``t`` is the knob, found by
  bisection.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import Graph, PROPERTY_NAMES, average_clustering, property_sequences
from .metrics import pearson
from .sampler import (CorrelationSpec, PropertySpec, SpecError, Uniform,
                      generate_correlated_table)

log = logging.getLogger(__name__)

SYN_DEGREE = "syn-degree"
SYN_CC = "syn-cc"
KINDS = (SYN_DEGREE, SYN_CC)

CONTROLLED_PROPERTY = {SYN_DEGREE: "avg_degree", SYN_CC: "avg_cc"}


class InfeasibleTarget(ValueError):
    pass


class UnreachableTarget(RuntimeError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class GeneratorConfig:
    node_count_range: tuple = (20, 60)
    tolerance: Optional[float] = None   # None: 0.5 for degree, 0.05 for CC
    max_retries: int = 10
    seed: int = 0
    degree_range: tuple = (2.0, 8.0)    # Syn-Degree target distribution
    cc_range: tuple = (0.2, 0.5)        # Syn-CC target distribution
    degree_level: float = 3.0           # fixed average degree of Syn-CC

    def __post_init__(self):
        lo, hi = self.node_count_range
        if not 3 <= lo <= hi:
            raise SpecError(f"bad node_count_range {self.node_count_range}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise SpecError("tolerance must be > 0")
        if self.max_retries < 1:
            raise SpecError("max_retries must be >= 1")

    def tol(self, kind):
        if self.tolerance is not None:
            return self.tolerance
        return 0.5 if kind == SYN_DEGREE else 0.05

    def to_dict(self):
        return {"node_count_range": list(self.node_count_range),
                "tolerance": self.tolerance, "max_retries": self.max_retries,
                "seed": self.seed, "degree_range": list(self.degree_range),
                "cc_range": list(self.cc_range),
                "degree_level": self.degree_level}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for k in ("node_count_range", "degree_range", "cc_range"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)


@dataclass
class SyntheticDataset:
    kind: str
    r: float
    graphs: list
    labels: np.ndarray
    target_properties: dict
    realized_properties: dict
    spec: CorrelationSpec
    config: GeneratorConfig
    misses: int = 0       # graphs whose target could not be met within tolerance
    name: str = ""

    def __len__(self):
        return len(self.graphs)

    @property
    def class_count(self):
        return self.spec.label_classes


def _rng(seed, *extra):
    return np.random.default_rng(np.random.SeedSequence([int(seed), *extra]))


def _er_graph(n, p, rng):
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def graph_for_degree_target(n, d_target, config: GeneratorConfig, seed) -> Graph:
    """Erdos-Renyi graph whose average degree is within tolerance of
    ``d_target``; the closest of ``max_retries`` draws otherwise."""
    if not 0 < d_target <= n - 1:
        raise InfeasibleTarget(
            f"average degree {d_target} not in (0, {n - 1}] for n={n}")
    eps = config.tol(SYN_DEGREE)
    p = min(1.0, d_target / (n - 1))
    best, best_err = None, np.inf
    for attempt in range(config.max_retries):
        g = _er_graph(n, p, _rng(seed, attempt))
        err = abs(2.0 * g.edge_count / n - d_target)
        if err < best_err:
            best, best_err = g, err
        if err <= eps:
            break
    return best


class _TriangleInjector:
    """Graph family indexed by the number of planted triangles.

    All randomness is drawn at construction so that graphs for different
    knob values share the same random stream; realised clustering is then
    close to monotone in the knob.
    """

    def __init__(self, n, degree_level, rng):
        self.n = n
        self.m = min(int(round(degree_level * n / 2.0)), n * (n - 1) // 2)
        self.t_max = self.m // 3
        self.tie = rng.random((self.t_max, n))
        self.others = rng.random((self.t_max, 2))
        iu, ju = np.triu_indices(n, 1)
        perm = rng.permutation(iu.shape[0])
        self.fill = list(zip(iu[perm].tolist(), ju[perm].tolist()))

    def build(self, t) -> Graph:
        n, m = self.n, self.m
        adj = [set() for _ in range(n)]
        deg = np.zeros(n)
        edges = []

        def add(u, v):
            if u != v and v not in adj[u] and len(edges) < m:
                adj[u].add(v)
                adj[v].add(u)
                deg[u] += 1
                deg[v] += 1
                edges.append((u, v))

        for i in range(t):
            x = int(np.argmin(deg + self.tie[i]))
            a = int(self.others[i, 0] * (n - 1))
            b = int(self.others[i, 1] * (n - 2))
            # map to two distinct nodes different from x
            y = a + (a >= x)
            lo, hi = min(x, y), max(x, y)
            z = b + (b >= lo)
            z += z >= hi
            add(x, y)
            add(y, z)
            add(x, z)
        for u, v in self.fill:
            if len(edges) >= m:
                break
            add(u, v)
        return Graph(n, edges)


def _tune_cc(cc_target, degree_level, n, rng):
    """Bisection over planted triangles; returns the closest (graph, cc)."""
    inj = _TriangleInjector(n, degree_level, rng)
    cache = {}

    def f(t):
        if t not in cache:
            g = inj.build(t)
            cache[t] = (g, average_clustering(g))
        return cache[t][1]

    lo, hi = 0, inj.t_max
    if f(lo) < cc_target < f(hi):
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if f(mid) < cc_target:
                lo = mid
            else:
                hi = mid
    g, cc = min(cache.values(), key=lambda gc: abs(gc[1] - cc_target))
    return g, cc


def _node_count(config, seed):
    lo, hi = config.node_count_range
    return int(_rng(seed, 7919).integers(lo, hi + 1))


def _realize_cc(cc_target, degree_level, config, seed):
    eps = config.tol(SYN_CC)
    n = _node_count(config, seed)
    best, best_err = None, np.inf
    for attempt in range(config.max_retries):
        g, cc = _tune_cc(cc_target, degree_level, n, _rng(seed, attempt))
        err = abs(cc - cc_target)
        if err < best_err:
            best, best_err = g, err
        if err <= eps:
            return best, True
    return best, False


def graph_for_cc_target(cc_target, degree_level, config: GeneratorConfig, seed) -> Graph:
    """Graph with average clustering within tolerance of ``cc_target`` and
    average degree fixed at ``degree_level``.

    Raises :class:`UnreachableTarget` (carrying the closest graph found) when
    no attempt gets within tolerance.
    """
    if not 0.0 <= cc_target <= 1.0:
        raise InfeasibleTarget(f"clustering target {cc_target} outside [0, 1]")
    g, ok = _realize_cc(cc_target, degree_level, config, seed)
    if not ok:
        raise UnreachableTarget(
            f"average clustering {cc_target} not reachable at degree "
            f"{degree_level} within {config.tol(SYN_CC)}", best=g)
    return g


def dataset_spec(kind, r, n, classes, config: GeneratorConfig) -> CorrelationSpec:
    if kind == SYN_DEGREE:
        fam = Uniform(*config.degree_range)
    elif kind == SYN_CC:
        fam = Uniform(*config.cc_range)
    else:
        raise SpecError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    return CorrelationSpec((PropertySpec(fam, float(r)),), classes, 1.0, n)


def _one_graph(args):
    kind, target, config, seed = args
    if kind == SYN_DEGREE:
        n = _node_count(config, seed)
        g = graph_for_degree_target(n, min(target, n - 1), config, seed)
        return g, abs(2.0 * g.edge_count / n - target) <= config.tol(kind)
    return _realize_cc(target, config.degree_level, config, seed)


def build_synthetic_dataset(kind, r, n, classes=2,
                            config: GeneratorConfig = GeneratorConfig(),
                            jobs: int = 1) -> SyntheticDataset:
    """Generate a labelled dataset whose controlled property has target
    Pearson correlation ``r`` with the continuous label.

    The latent table and the per-graph seeds depend only on ``config.seed``
    and ``n``, so datasets of one sweep share their random draws and differ
    only through ``r``.
    """
    spec = dataset_spec(kind, r, n, classes, config)
    table = generate_correlated_table(spec, _rng(config.seed, 0).integers(2**63))
    targets = table.property_targets[0]
    root = np.random.SeedSequence([int(config.seed), 1])
    seeds = [int(s.generate_state(1, np.uint64)[0]) for s in root.spawn(n)]
    work = [(kind, float(t), config, s) for t, s in zip(targets, seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            out = list(ex.map(_one_graph, work, chunksize=max(1, n // (4 * jobs))))
    else:
        out = [_one_graph(w) for w in work]
    graphs = [g for g, _ in out]
    misses = sum(not ok for _, ok in out)
    if misses:
        log.info("%s r=%.2f: %d of %d graphs missed their target", kind, r, misses, n)
    prop = CONTROLLED_PROPERTY[kind]
    tp = {prop: targets}
    if kind == SYN_CC:
        tp["avg_degree"] = np.full(n, config.degree_level)
    return SyntheticDataset(
        kind=kind, r=float(r), graphs=graphs, labels=table.labels,
        target_properties=tp, realized_properties=property_sequences(graphs),
        spec=spec, config=config, misses=misses,
        name=f"{kind}-r{r:.2f}")


@dataclass
class RealizedCorrelation:
    target_r: float
    realized_r: Optional[float]     # None when the property is constant
    attenuation: Optional[float]    # None when target is 0 or realized undefined

    @property
    def undefined(self):
        return self.realized_r is None


def verify_realized_correlation(ds: SyntheticDataset, property_name: str) -> RealizedCorrelation:
    if property_name not in PROPERTY_NAMES:
        raise KeyError(f"unknown property {property_name!r}")
    seq = ds.realized_properties[property_name]
    target = ds.r if property_name == CONTROLLED_PROPERTY[ds.kind] else 0.0
    realized = pearson(seq, ds.labels, undefined=None)
    att = None
    if realized is not None and target != 0:
        att = realized / target
    return RealizedCorrelation(target, realized, att)


def sweep(kind, r_values, n, classes=2, config=GeneratorConfig(), jobs=1):
    return [build_synthetic_dataset(kind, r, n, classes, config, jobs) for r in r_values]
