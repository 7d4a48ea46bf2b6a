"""Learning-curve CSV files."""

import io
from pathlib import Path

import pandas as pd

from surro_accel.dqn.constants import CURVE_COLUMNS
from surro_accel.dqn.types import CurveEntry, LearningCurve
from surro_accel.errors import SchemaError
from surro_accel.utils import write_atomic


def curve_to_frame(curve: LearningCurve) -> pd.DataFrame:
    return pd.DataFrame(
        [entry.model_dump(mode="json") for entry in curve.entries], columns=CURVE_COLUMNS
    )


def write_curve(path: Path, curve: LearningCurve) -> Path:
    buffer = io.StringIO()
    curve_to_frame(curve).to_csv(buffer, index=False)
    return write_atomic(path, buffer.getvalue())


def read_curve(path: Path) -> LearningCurve:
    frame = pd.read_csv(path)
    missing = set(CURVE_COLUMNS) - set(frame.columns)
    if missing:
        raise SchemaError(f"{path}: missing curve columns {sorted(missing)}")
    return LearningCurve(
        entries=[CurveEntry.model_validate(row) for row in frame[CURVE_COLUMNS].to_dict("records")]
    )
