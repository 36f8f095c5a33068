"""The eight graph properties and their correlation with labels on MUTAG."""
from pathlib import Path

import numpy as np

from grapheff.dataio import read_tu
from grapheff.graph import PROPERTY_NAMES, extract_properties, property_matrix
from grapheff.metrics import property_label_correlations

MUTAG = Path(__file__).resolve().parents[1] / "tests" / "data" / "MUTAG"

graphs, labels, manifest = read_tu(MUTAG)
print(f"{manifest.name}: {manifest.graph_count} graphs, {manifest.class_count} classes, "
      f"mean nodes {np.mean([g.node_count for g in graphs]):.1f}")

print("\nfirst graph:", extract_properties(graphs[0]))
props = property_matrix(graphs)
print("\nproperty      mean     std   corr")
corr = property_label_correlations(graphs, labels)
for j, name in enumerate(PROPERTY_NAMES):
    c = corr[name]
    print(f"{name:10s} {props[:, j].mean():7.2f} {props[:, j].std():7.2f}   "
          + ("undefined (constant)" if c is None else f"{c:+.3f}"))
# molecules here have no triangles or 4-cycles, so those rows are constant
