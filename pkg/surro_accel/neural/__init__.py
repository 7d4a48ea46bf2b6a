from surro_accel.neural.mlp import Mlp, backward, forward, forward_batch
from surro_accel.neural.optimizer import init_optimizer, optimizer_step
from surro_accel.neural.types import Gradients, Minibatch, OptimizerState, WeightDocument
from surro_accel.neural.utils import load_weights, save_weights

__all__ = [
    "Gradients",
    "Minibatch",
    "Mlp",
    "OptimizerState",
    "WeightDocument",
    "backward",
    "forward",
    "forward_batch",
    "init_optimizer",
    "load_weights",
    "optimizer_step",
    "save_weights",
]
