import numpy as np
from pydantic import ValidationError

from surro_accel.errors import ShapeError, WeightFormatError
from surro_accel.neural.mlp import Mlp
from surro_accel.neural.types import WeightDocument


def to_weight_document(net: Mlp) -> WeightDocument:
    return WeightDocument(
        layer_dims=list(net.layer_dims),
        weights=[w.tolist() for w in net.weights],
        biases=[b.tolist() for b in net.biases],
        dropout_rate=net.dropout_rate,
    )


def from_weight_document(document: WeightDocument) -> Mlp:
    try:
        return Mlp(
            layer_dims=list(document.layer_dims),
            weights=[np.array(w, dtype=float).reshape(len(w), -1) for w in document.weights],
            biases=[np.array(b, dtype=float) for b in document.biases],
            dropout_rate=document.dropout_rate,
        )
    except (ShapeError, ValueError) as e:
        raise WeightFormatError(f"inconsistent weight document: {e}") from e


def save_weights(net: Mlp) -> str:
    """Serialize a network to JSON; floats round-trip exactly."""
    return to_weight_document(net).model_dump_json()


def load_weights(document: str | bytes) -> Mlp:
    """Parse a document produced by save_weights.

    Raises:
        WeightFormatError: the document is malformed, truncated or inconsistent
    """
    try:
        parsed = WeightDocument.model_validate_json(document)
    except ValidationError as e:
        raise WeightFormatError(f"cannot parse weight document: {e.errors()[0]['msg']}") from e
    return from_weight_document(parsed)
