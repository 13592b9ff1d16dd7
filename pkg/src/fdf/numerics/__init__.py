from .dataset import DataError, Dataset, load_csv, save_csv
from .functions import (
    ArtifactError,
    FunctionError,
    FunctionValue,
    Provenance,
    Signature,
    apply,
    apply_matrix,
    compose,
    load_function,
    save_function,
)
from .standardize import fit_standardizer
from .pca import fit_pca
from .mlp import TrainConfig, TrainingError, train_mlp
from .score import ScoreReport, score

__all__ = [
    "ArtifactError",
    "DataError",
    "Dataset",
    "FunctionError",
    "FunctionValue",
    "Provenance",
    "ScoreReport",
    "Signature",
    "TrainConfig",
    "TrainingError",
    "apply",
    "apply_matrix",
    "compose",
    "fit_pca",
    "fit_standardizer",
    "load_csv",
    "load_function",
    "save_csv",
    "save_function",
    "score",
    "train_mlp",
]
