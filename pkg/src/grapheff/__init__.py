"""Effectiveness of graph information for graph classification."""
from .dataio import (DataError, DatasetManifest, ResultRecord, SchemaError, TUDataset,
                     read_results, read_tu, write_results, write_tu)
from .graph import (PROPERTY_NAMES, Graph, GraphError, PropertyVector, average_clustering,
                    count_cycles, cycle_counts, extract_properties, property_matrix,
                    property_sequences)
from .harness import measure_gaps, run_risk_assessment, stratified_kfold
from .metrics import (EffectivenessReport, GapRecord, effectiveness, pearson,
                      performance_gap, property_label_correlations, report_from_records,
                      select_best_gap)
from .regression import regress_effectiveness, subset_samples
from .sampler import (CorrelatedTable, CorrelationSpec, Gaussian, PropertySpec, SpecError,
                      Uniform, generate_correlated_table, validate_spec)
from .synth import (GeneratorConfig, InfeasibleTarget, SyntheticDataset, UnreachableTarget,
                    build_synthetic_dataset, graph_for_cc_target, graph_for_degree_target,
                    verify_realized_correlation)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "DatasetManifest",
    "ResultRecord",
    "SchemaError",
    "TUDataset",
    "read_results",
    "read_tu",
    "write_results",
    "write_tu",
    "PROPERTY_NAMES",
    "Graph",
    "GraphError",
    "PropertyVector",
    "average_clustering",
    "count_cycles",
    "cycle_counts",
    "extract_properties",
    "property_matrix",
    "property_sequences",
    "measure_gaps",
    "run_risk_assessment",
    "stratified_kfold",
    "EffectivenessReport",
    "GapRecord",
    "effectiveness",
    "pearson",
    "performance_gap",
    "property_label_correlations",
    "report_from_records",
    "select_best_gap",
    "regress_effectiveness",
    "subset_samples",
    "CorrelatedTable",
    "CorrelationSpec",
    "Gaussian",
    "PropertySpec",
    "SpecError",
    "Uniform",
    "generate_correlated_table",
    "validate_spec",
    "GeneratorConfig",
    "InfeasibleTarget",
    "SyntheticDataset",
    "UnreachableTarget",
    "build_synthetic_dataset",
    "graph_for_cc_target",
    "graph_for_degree_target",
    "verify_realized_correlation",
]
