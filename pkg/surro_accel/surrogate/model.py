"""Training of the transition surrogate and one-epoch sampling from it.

The network is deterministic at inference time. All randomness of a surrogate
step comes from the arrival counts drawn from the fitted input models.
"""

import logging
import math
from collections.abc import Sequence

import logfire
import numpy as np

from surro_accel.callcenter.simulation import compute_observation, init_state
from surro_accel.callcenter.types import CallCenterConfig, EpochKpis
from surro_accel.constants import FIT_STREAM
from surro_accel.errors import DivergenceError, InsufficientDataError, ShapeError
from surro_accel.neural.mlp import Mlp, backward, forward, forward_batch
from surro_accel.neural.optimizer import init_optimizer, optimizer_step
from surro_accel.neural.types import Minibatch
from surro_accel.stochastic.sampling import fit_input_models, sample_arrival_counts
from surro_accel.stochastic.types import RngStream
from surro_accel.surrogate.constants import (
    DROPOUT_SUBSTREAM,
    INIT_SUBSTREAM,
    SHUFFLE_SUBSTREAM,
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

logger = logging.getLogger(__name__)


def predict_raw(model: SurrogateModel, inputs: np.ndarray) -> np.ndarray:
    """De-standardized network outputs for a batch of raw input rows."""
    z = forward_batch(model.net, model.normalization.standardize_inputs(inputs))
    return model.normalization.destandardize_targets(z)


def holdout_rmse(model: SurrogateModel, holdout: SurrogateDataset) -> RmseReport:
    error = predict_raw(model, holdout.inputs) - holdout.targets
    per_column = np.sqrt(np.mean(error * error, axis=0))
    return RmseReport(
        **{
            name: per_column[columns].tolist()
            for name, columns in model.layout.target_slices().items()
        }
    )


def _check_layout(layout: SurrogateLayout, config: CallCenterConfig) -> None:
    if (layout.n_contact, layout.n_expert_groups, layout.n_experts) != (
        config.n_contact,
        config.n_expert_groups,
        config.n_experts,
    ):
        raise ShapeError("recorded trajectories do not match the call-center configuration")


@logfire.instrument("train_surrogate", extract_args=["seed"])
def train_surrogate(
    split: SurrogateSplit,
    config: CallCenterConfig,
    cfg: SurrogateConfig,
    seed: int,
) -> tuple[SurrogateModel, RmseReport]:
    """Fit the surrogate on split.train and report RMSE on split.holdout.

    Inputs and targets are standardized with statistics of the training split;
    the loss is the MSE on standardized targets. Arrival rates of the input
    models are fitted from the training split's recorded counts, the remaining
    input models are taken from config.

    Raises:
        InsufficientDataError: the training split is empty
        DivergenceError: the epoch loss stopped being finite
    """
    train = split.train
    if len(train) == 0:
        raise InsufficientDataError("the training split is empty")
    layout = split.layout
    _check_layout(layout, config)

    streams = RngStream(seed, FIT_STREAM)
    shuffle = streams.substream(SHUFFLE_SUBSTREAM)
    dropout = streams.substream(DROPOUT_SUBSTREAM)
    normalization = Normalization.fit(train.inputs, train.targets)
    inputs = normalization.standardize_inputs(train.inputs)
    targets = normalization.standardize_targets(train.targets)
    net = Mlp.initialize(
        [layout.input_size, *cfg.hidden, layout.target_size],
        streams.substream(INIT_SUBSTREAM),
        dropout_rate=cfg.dropout_rate,
    )
    opt = init_optimizer(net, cfg.learning_rate)

    for epoch in range(cfg.epochs):
        order = shuffle.generator.permutation(len(train))
        total = 0.0
        for start in range(0, len(order), cfg.minibatch):
            rows = order[start : start + cfg.minibatch]
            loss, grads = backward(
                net, Minibatch(inputs[rows], targets[rows]), stream=dropout, training=True
            )
            if not math.isfinite(loss):
                raise DivergenceError(epoch, loss)
            optimizer_step(net, grads, opt)
            total += loss * len(rows)
        epoch_loss = total / len(order)
        if (epoch + 1) % cfg.log_every == 0 or epoch + 1 == cfg.epochs:
            logfire.info("surrogate epoch", epoch=epoch, loss=epoch_loss)

    model = SurrogateModel(
        net=net,
        normalization=normalization,
        input_models=fit_input_models(
            train.arrival_counts.astype(int).tolist(),
            service=[g.service for g in config.contact_groups],
            patience=[g.patience for g in config.contact_groups],
            backoffice_duration=config.backoffice_duration,
        ),
        layout=layout,
        initial_observation=compute_observation(init_state(config)).tolist(),
        horizon=config.horizon_epochs,
        epochs_trained=cfg.epochs,
    )
    rmse = holdout_rmse(model, split.holdout)
    logger.info("surrogate trained", extra={"epochs": cfg.epochs, "rmse": rmse.worst()})
    return model, rmse


def clamp_prediction(
    layout: SurrogateLayout, raw: np.ndarray
) -> tuple[EpochKpis, np.ndarray]:
    """Project a raw prediction onto valid KPIs and observation features.

    A and U are clipped to [0, 1], W to [0, inf). Queue lengths and back-office
    counts are clipped at 0 and rounded, the busy count is clipped to
    [0, n_experts] and rounded, the time feature is clipped to [0, 1].
    """
    parts = {name: raw[columns] for name, columns in layout.target_slices().items()}
    obs = parts["next_state"].copy()
    counts = slice(0, layout.n_contact + layout.n_expert_groups)
    obs[counts] = np.rint(np.maximum(obs[counts], 0.0))
    busy = layout.n_contact + layout.n_expert_groups
    obs[busy] = np.rint(np.clip(obs[busy], 0.0, layout.n_experts))
    obs[-1] = np.clip(obs[-1], 0.0, 1.0)

    kpis = EpochKpis(
        W=np.maximum(parts["waiting"], 0.0).tolist(),
        A=np.clip(parts["abandonment"], 0.0, 1.0).tolist(),
        U=np.clip(parts["utilization"], 0.0, 1.0).tolist(),
        B=[int(b) for b in np.rint(np.maximum(parts["backoffice"], 0.0))],
    )
    return kpis, obs


def surrogate_step(
    model: SurrogateModel,
    state_features: Sequence[float],
    action: Sequence[int],
    stream: RngStream,
    arrivals: Sequence[int] | None = None,
) -> tuple[EpochKpis, np.ndarray]:
    """Sample one epoch transition from the surrogate.

    Args:
        model: trained surrogate
        state_features: current observation
        action: one bit per expert
        stream: source of the next epoch's arrival counts
        arrivals: explicit arrival counts; sampled from model.input_models when omitted

    Raises:
        ModelStateError: the model is untrained
        ShapeError: state or action of the wrong length
    """
    model.check_trained()
    layout = model.layout
    if len(state_features) != layout.observation_size or len(action) != layout.n_experts:
        raise ShapeError(
            f"surrogate expects {layout.observation_size} state features and "
            f"{layout.n_experts} action bits"
        )
    if arrivals is None:
        arrivals = sample_arrival_counts(model.input_models, stream)
    x = np.array([*state_features, *action, *arrivals], dtype=float)
    raw = model.normalization.destandardize_targets(
        forward(model.net, model.normalization.standardize_inputs(x))
    )
    return clamp_prediction(layout, raw)
