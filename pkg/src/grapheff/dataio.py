"""Reading and writing datasets (TU flat-file format), manifests and
method result records."""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .graph import Graph


class DataError(ValueError):
    """Malformed or inconsistent input data."""


class SchemaError(DataError):
    def __init__(self, field_name, msg):
        super().__init__(f"{field_name}: {msg}")
        self.field = field_name


INFO_TYPES = ("S", "A")
METRICS = ("accuracy", "auc_roc")


@dataclass
class DatasetManifest:
    name: str
    graph_count: int
    class_count: int
    has_attributes: bool = False
    source: str = "tu-file"
    generation_spec: Optional[dict] = None
    label_values: Optional[list] = None   # original label per internal class id

    def __post_init__(self):
        if self.graph_count < 1:
            raise SchemaError("graph_count", "must be >= 1")
        if self.class_count < 2:
            raise SchemaError("class_count", "must be >= 2")
        if self.source not in ("tu-file", "synthetic"):
            raise SchemaError("source", f"unknown source {self.source!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        return cls(**json.loads(text))


@dataclass
class TUDataset:
    graphs: list
    labels: np.ndarray
    manifest: DatasetManifest
    node_labels: Optional[list] = field(default=None, repr=False)

    def __iter__(self):
        # allows ``graphs, labels, manifest = read_tu(...)``
        return iter((self.graphs, self.labels, self.manifest))


def _prefix_of(path) -> tuple[Path, str]:
    p = Path(path)
    if p.is_dir():
        hits = sorted(p.glob("*_graph_indicator.txt"))
        if len(hits) != 1:
            raise DataError(f"expected exactly one *_graph_indicator.txt in {p}")
        return p, hits[0].name[: -len("_graph_indicator.txt")]
    return p.parent, p.name


def _read_ints(path: Path, width: int):
    if not path.exists():
        raise DataError(f"missing file: {path}")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            parts = [t.strip() for t in s.split(",")]
            if len(parts) != width:
                raise DataError(f"{path.name}:{lineno}: expected {width} "
                                f"comma-separated values, got {s!r}")
            try:
                rows.append([int(t) for t in parts])
            except ValueError:
                raise DataError(f"{path.name}:{lineno}: malformed line {s!r}") from None
    return rows


def read_tu(path) -> TUDataset:
    """Read ``<DS>_A.txt``, ``<DS>_graph_indicator.txt`` and
    ``<DS>_graph_labels.txt`` from a directory or ``dir/<DS>`` prefix.

    Node ids are made 0-based per graph, edges deduplicated and labels
    remapped to ``0..C-1`` in sorted order of the original values.
    """
    root, ds = _prefix_of(path)
    indicator = [r[0] for r in _read_ints(root / f"{ds}_graph_indicator.txt", 1)]
    raw_labels = [r[0] for r in _read_ints(root / f"{ds}_graph_labels.txt", 1)]
    edges = _read_ints(root / f"{ds}_A.txt", 2)

    n_graphs = len(raw_labels)
    if n_graphs == 0:
        raise DataError("no graphs in graph_labels file")
    ind = np.asarray(indicator, dtype=np.int64)
    if ind.size == 0:
        raise DataError("empty graph_indicator file")
    if ind.min() < 1 or ind.max() > n_graphs:
        raise DataError(f"graph_indicator refers to graph ids outside 1..{n_graphs}")
    if np.any(np.diff(ind) < 0):
        raise DataError("graph_indicator is not grouped by graph (ids decrease)")
    counts = np.bincount(ind, minlength=n_graphs + 1)[1:]
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0]) + 1
        raise DataError(f"graph {missing} has no nodes in graph_indicator")
    start = np.concatenate([[0], np.cumsum(counts)])   # global offset per graph

    per_graph = [set() for _ in range(n_graphs)]
    n_nodes = ind.size
    for lineno, (i, j) in enumerate(edges, 1):
        if not (1 <= i <= n_nodes and 1 <= j <= n_nodes):
            raise DataError(f"{ds}_A.txt:{lineno}: dangling node id in edge ({i}, {j})")
        gi, gj = ind[i - 1], ind[j - 1]
        if gi != gj:
            raise DataError(f"{ds}_A.txt:{lineno}: edge ({i}, {j}) joins graphs {gi} and {gj}")
        if i == j:
            continue
        off = start[gi - 1] + 1
        u, v = i - off, j - off
        per_graph[gi - 1].add((u, v) if u < v else (v, u))

    graphs = [Graph(int(counts[g]), per_graph[g]) for g in range(n_graphs)]
    values = sorted(set(raw_labels))
    if len(values) < 2:
        raise DataError(f"{ds}: a classification dataset needs at least 2 classes")
    remap = {v: k for k, v in enumerate(values)}
    labels = np.array([remap[v] for v in raw_labels], dtype=np.int64)

    node_labels = None
    nl_path = root / f"{ds}_node_labels.txt"
    if nl_path.exists():
        flat = [r[0] for r in _read_ints(nl_path, 1)]
        if len(flat) != n_nodes:
            raise DataError(f"{nl_path.name}: {len(flat)} lines for {n_nodes} nodes")
        node_labels = [flat[start[g]:start[g + 1]] for g in range(n_graphs)]

    has_attr = (root / f"{ds}_node_attributes.txt").exists()
    manifest = DatasetManifest(name=ds, graph_count=n_graphs,
                               class_count=len(values),
                               has_attributes=has_attr, source="tu-file",
                               label_values=values)
    mpath = root / f"{ds}_manifest.json"
    if mpath.exists():
        stored = DatasetManifest.from_json(mpath.read_text(encoding="utf-8"))
        manifest.source = stored.source
        manifest.generation_spec = stored.generation_spec
        manifest.has_attributes = stored.has_attributes or has_attr
    return TUDataset(graphs, labels, manifest, node_labels)


def write_tu(graphs: Sequence[Graph], labels, prefix, manifest: DatasetManifest | None = None,
             name: str | None = None) -> list[Path]:
    """Write the three TU files (plus a manifest) under ``prefix``.

    ``prefix`` is ``dir/<DS>``; the directory is created if needed.
    """
    labels = np.asarray(labels)
    if len(graphs) == 0:
        raise DataError("cannot write an empty dataset")
    if labels.shape[0] != len(graphs):
        raise DataError(f"{len(graphs)} graphs but {labels.shape[0]} labels")
    if len(set(labels.tolist())) < 2:
        raise DataError("a classification dataset needs at least 2 classes")
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ds = prefix.name
    a_lines, ind_lines = [], []
    offset = 0
    for gid, g in enumerate(graphs, 1):
        ind_lines.extend([f"{gid}\n"] * g.node_count)
        for u, v in g.edges:
            # both directions, as in the published TU files
            a_lines.append(f"{u + offset + 1}, {v + offset + 1}\n")
            a_lines.append(f"{v + offset + 1}, {u + offset + 1}\n")
        offset += g.node_count
    out = {
        prefix.parent / f"{ds}_A.txt": "".join(a_lines),
        prefix.parent / f"{ds}_graph_indicator.txt": "".join(ind_lines),
        prefix.parent / f"{ds}_graph_labels.txt": "".join(f"{int(y)}\n" for y in labels),
    }
    if manifest is None:
        values = sorted(set(int(y) for y in labels))
        manifest = DatasetManifest(name=name or ds, graph_count=len(graphs),
                                   class_count=len(values), label_values=values)
    out[prefix.parent / f"{ds}_manifest.json"] = manifest.to_json()
    for path, text in out.items():
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return list(out)


@dataclass
class ResultRecord:
    dataset: str
    method: str
    info_type: str
    metric: str
    mean: float
    std: float = 0.0
    role: Optional[str] = None   # "baseline" or "graph"; inferred from method name if absent

    def __post_init__(self):
        if self.info_type not in INFO_TYPES:
            raise SchemaError("info_type", f"must be one of {INFO_TYPES}, got {self.info_type!r}")
        if self.metric not in METRICS:
            raise SchemaError("metric", f"must be one of {METRICS}, got {self.metric!r}")
        for f in ("mean", "std"):
            v = getattr(self, f)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SchemaError(f, f"must be a finite number, got {v!r}")
        if not 0.0 <= self.mean <= 1.0:
            raise SchemaError("mean", f"must be in [0, 1], got {self.mean}")
        if self.std < 0:
            raise SchemaError("std", f"must be >= 0, got {self.std}")
        if self.role is None:
            self.role = "baseline" if "baseline" in self.method.lower() else "graph"
        if self.role not in ("baseline", "graph"):
            raise SchemaError("role", f"must be 'baseline' or 'graph', got {self.role!r}")
        if not self.dataset:
            raise SchemaError("dataset", "must be non-empty")
        if not self.method:
            raise SchemaError("method", "must be non-empty")

    @property
    def is_baseline(self):
        return self.role == "baseline"


_RECORD_FIELDS = ("dataset", "method", "info_type", "metric", "mean", "std")


def record_from_dict(d: dict, percent: bool = False) -> ResultRecord:
    if not isinstance(d, dict):
        raise SchemaError("record", "each record must be a JSON object")
    for f in _RECORD_FIELDS:
        if f not in d:
            raise SchemaError(f, "missing")
    mean, std = d["mean"], d["std"]
    if percent:
        for f, v in (("mean", mean), ("std", std)):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f, f"must be a number, got {v!r}")
        mean, std = mean / 100.0, std / 100.0
    return ResultRecord(d["dataset"], d["method"], d["info_type"], d["metric"],
                        mean, std, d.get("role"))


def read_results(path, percent: bool = False) -> list[ResultRecord]:
    """Read records from a JSON document: a list of objects, or
    ``{"records": [...]}``. JSON-lines files are accepted as well."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = [json.loads(line) for line in text.splitlines() if line.strip()]
    if isinstance(doc, dict):
        if "records" not in doc:
            raise SchemaError("records", "missing")
        doc = doc["records"]
    if not isinstance(doc, list):
        raise SchemaError("records", "must be a list")
    return [record_from_dict(d, percent) for d in doc]


def write_results(records: Sequence[ResultRecord], path) -> None:
    doc = {"records": [asdict(r) for r in records]}
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        # json writes floats via repr, which round-trips exactly
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


# Published MUTAG scores, percent scale.
MUTAG_PUBLISHED = [
    ("Baseline_A", "A", 83.7, 8.35),
    ("GIN_A", "A", 84.07, 6.26),
    ("GCN_A", "A", 70.7, 6.89),
    ("Baseline_S", "S", 79.18, 9.83),
    ("WL-GK_S", "S", 86.23, 8.50),
    ("GIN_S", "S", 86.71, 4.67),
    ("GCN_S", "S", 82.86, 10.43),
]


def mutag_published_records() -> list[ResultRecord]:
    return [ResultRecord("MUTAG", m, t, "accuracy", mean / 100.0, std / 100.0)
            for m, t, mean, std in MUTAG_PUBLISHED]
