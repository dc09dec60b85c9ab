"""Extreme learning machine and backpropagation land-cover classifiers."""

from ._elmlc import (
    ConfigError,
    DimensionError,
    ElmConfig,
    ElmModel,
    Error,
    IoError,
    LabeledDataset,
    MlpConfig,
    MlpModel,
    NumericalError,
    ParseError,
    benchmark,
    confusion,
    encode_targets,
    generate_synthetic,
    load_csv,
    load_model,
    min_norm_lstsq,
    pseudoinverse,
    save_csv,
    save_model,
    stratified_split,
    svd,
    sweep_hidden_nodes,
    train_elm,
    train_mlp,
    training_cost,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
