"""Surrogate files: one JSON document plus rmse.json beside it."""

import logging
from pathlib import Path

from pydantic import ValidationError

from surro_accel.constants import RMSE_FILE
from surro_accel.errors import WeightFormatError
from surro_accel.neural.utils import from_weight_document, to_weight_document
from surro_accel.surrogate.types import RmseReport, SurrogateDocument, SurrogateModel
from surro_accel.utils import write_atomic, write_json

logger = logging.getLogger(__name__)


def save_surrogate(path: Path, model: SurrogateModel, rmse: RmseReport | None = None) -> Path:
    document = SurrogateDocument(
        weights=to_weight_document(model.net),
        normalization=model.normalization,
        input_models=model.input_models,
        layout=model.layout,
        initial_observation=model.initial_observation,
        horizon=model.horizon,
        epochs_trained=model.epochs_trained,
    )
    write_atomic(path, document.model_dump_json() + "\n")
    if rmse is not None:
        write_json(path.parent / RMSE_FILE, rmse)
    logger.info("saved surrogate", extra={"path": str(path)})
    return path


def load_surrogate(path: Path) -> SurrogateModel:
    """Read a surrogate written by save_surrogate.

    Raises:
        WeightFormatError: the file is malformed, truncated or inconsistent
    """
    try:
        document = SurrogateDocument.model_validate_json(path.read_bytes())
    except ValidationError as e:
        raise WeightFormatError(f"{path}: {e.errors()[0]['msg']}") from e
    net = from_weight_document(document.weights)
    layout = document.layout
    if net.d_in != layout.input_size or net.d_out != layout.target_size:
        raise WeightFormatError(f"{path}: network dimensions do not match the row layout")
    return SurrogateModel(
        net=net,
        normalization=document.normalization,
        input_models=document.input_models,
        layout=layout,
        initial_observation=document.initial_observation,
        horizon=document.horizon,
        epochs_trained=document.epochs_trained,
    )


def load_rmse(path: Path) -> RmseReport | None:
    """The RMSE report stored beside a surrogate file, if any."""
    rmse_path = path.parent / RMSE_FILE
    if not rmse_path.exists():
        return None
    return RmseReport.model_validate_json(rmse_path.read_bytes())
