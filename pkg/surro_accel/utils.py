"""Logging setup and output-file helpers shared by every command.

Training runs are traced with Pydantic Logfire when a LOGFIRE_TOKEN is
configured; otherwise records go to the console and spans stay in-process.
Output files are written through a temporary sibling and renamed into place,
so an interrupted run never leaves a truncated artifact.
"""

import json
import logging
import os
import tempfile
from logging.config import dictConfig
from pathlib import Path
from typing import Any

import logfire
from pydantic import BaseModel

from surro_accel import __version__
from surro_accel.constants import DEFAULT_NUM_WORKERS, THREADS_ENV_VAR


def setup_logging(service_name: str = "surro-accel", quiet: bool = False) -> None:
    """Route logging to Logfire or the console, depending on LOGFIRE_TOKEN.

    With a token the service reports under SERVICE_NAME (or service_name),
    tagged with the package version, exports process CPU, memory and thread
    metrics, and the root logger forwards to Logfire. Without one, Logfire is
    configured local-only and the root logger prints timestamped lines.

    Args:
        service_name: used when SERVICE_NAME is unset
        quiet: raise the level to WARNING
    """
    level = "WARNING" if quiet else "INFO"
    logfire_token = os.environ.get("LOGFIRE_TOKEN", "").strip()
    if logfire_token:
        logfire.configure(
            service_name=os.getenv("SERVICE_NAME", service_name),
            service_version=__version__,
        )
        logfire.instrument_system_metrics(
            {
                "process.cpu.time": ["user", "system"],
                "process.cpu.utilization": None,
                "process.memory.usage": None,
                "process.thread.count": None,
            }
        )

        dictConfig(
            {
                "version": 1,
                "disable_existing_loggers": False,
                "handlers": {
                    "logfire": {
                        "class": "logfire.LogfireLoggingHandler",
                    },
                },
                "root": {
                    "handlers": ["logfire"],
                    "level": level,
                },
            }
        )
    else:
        logfire.configure(send_to_logfire=False, console=False)
        logging.basicConfig(
            level=getattr(logging, level),
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )


def get_num_workers() -> int:
    """Worker cap for multi-seed experiments, from SURRO_ACCEL_THREADS.

    Read at call time so a `.env` file loaded by the CLI is honoured.
    """
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return DEFAULT_NUM_WORKERS
    value = int(raw)
    if value < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw}")
    return value


def write_atomic(path: Path, text: str) -> Path:
    """Write text to path via a temporary sibling file and an atomic rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", delete=False
    ) as tmp:
        tmp.write(text)
        tmp_path = Path(tmp.name)
    os.replace(tmp_path, path)
    return path


def dump_json(value: BaseModel | dict[str, Any] | list[Any]) -> str:
    """Deterministic JSON rendering (sorted keys, 2-space indent, trailing newline)."""
    if isinstance(value, BaseModel):
        value = value.model_dump(mode="json", by_alias=True)
    return json.dumps(value, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, value: BaseModel | dict[str, Any] | list[Any]) -> Path:
    return write_atomic(path, dump_json(value))
