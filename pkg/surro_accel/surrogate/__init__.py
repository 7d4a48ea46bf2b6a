from surro_accel.surrogate.dataset import build_dataset
from surro_accel.surrogate.environment import SurrogateEnvironment, surrogate_environment
from surro_accel.surrogate.model import (
    clamp_prediction,
    holdout_rmse,
    surrogate_step,
    train_surrogate,
)
from surro_accel.surrogate.types import (
    Normalization,
    RmseReport,
    SurrogateConfig,
    SurrogateDataset,
    SurrogateLayout,
    SurrogateModel,
    SurrogateSplit,
)
from surro_accel.surrogate.utils import load_rmse, load_surrogate, save_surrogate

__all__ = [
    "Normalization",
    "RmseReport",
    "SurrogateConfig",
    "SurrogateDataset",
    "SurrogateEnvironment",
    "SurrogateLayout",
    "SurrogateModel",
    "SurrogateSplit",
    "build_dataset",
    "clamp_prediction",
    "holdout_rmse",
    "load_rmse",
    "load_surrogate",
    "save_surrogate",
    "surrogate_environment",
    "surrogate_step",
    "train_surrogate",
]
