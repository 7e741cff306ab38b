"""Link prediction on undirected graphs from breadth-depth neighborhood features."""

__version__ = "0.1.0"

from .centrality import (
    CentralityTable,
    Strategy,
    betweenness_centrality,
    centrality_table,
    closeness_centrality,
    degree_centrality,
    neighbor_orders,
    ordered_neighbors,
    table_for,
)
from .evaluate import (
    ConfusionCounts,
    MetricsReport,
    SweepCell,
    SweepResult,
    confusion,
    export_csv,
    metrics,
    render_heatmap,
    run_experiment,
    sweep,
)
from .featurize import (
    Dataset,
    FeatureConfig,
    PairRow,
    Split,
    balance,
    balanced_dataset,
    build_dataset,
    create_pair_features,
    export_dataset_csv,
    split,
)
from .graph import EdgeListParseError, Graph, GraphStats, load_edge_list, stats, write_edge_list
from .model import (
    Classifier,
    ModelFormatError,
    load_model,
    predict_label,
    predict_score,
    predict_scores,
    save_model,
    train,
)
from .predict import CompletionConfig, CompletionTrace, complete_iterative, complete_noniterative

__all__ = [
    "CentralityTable",
    "Classifier",
    "CompletionConfig",
    "CompletionTrace",
    "ConfusionCounts",
    "Dataset",
    "EdgeListParseError",
    "FeatureConfig",
    "Graph",
    "GraphStats",
    "MetricsReport",
    "ModelFormatError",
    "PairRow",
    "Split",
    "Strategy",
    "SweepCell",
    "SweepResult",
    "balance",
    "balanced_dataset",
    "betweenness_centrality",
    "build_dataset",
    "centrality_table",
    "closeness_centrality",
    "complete_iterative",
    "complete_noniterative",
    "confusion",
    "create_pair_features",
    "degree_centrality",
    "export_csv",
    "export_dataset_csv",
    "load_edge_list",
    "load_model",
    "metrics",
    "neighbor_orders",
    "ordered_neighbors",
    "predict_label",
    "predict_score",
    "predict_scores",
    "render_heatmap",
    "run_experiment",
    "save_model",
    "split",
    "stats",
    "sweep",
    "table_for",
    "train",
    "write_edge_list",
]
