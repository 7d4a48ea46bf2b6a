"""Loading and validating configuration documents.

Every problem is reported with the JSON path of the offending value, e.g.
``contact_groups.0.arrival_rate_per_epoch``.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from surro_accel.config.constants import CONFIG_DIR, CONFIG_PACKAGE, DEFAULT_CONFIG
from surro_accel.config.types import ExperimentDocument
from surro_accel.constants import RESOLVED_CONFIG_FILE
from surro_accel.errors import ConfigError
from surro_accel.utils import write_json

logger = logging.getLogger(__name__)


def validation_issues(error: ValidationError) -> list[tuple[str, str]]:
    """(json_path, message) for every pydantic error."""
    return [
        (".".join(str(part) for part in e["loc"]), e["msg"].removeprefix("Value error, "))
        for e in error.errors()
    ]


def validate_config(document: dict[str, Any]) -> ExperimentDocument:
    """Check every invariant of a parsed document and apply defaults.

    Raises:
        ConfigError: one issue per violated invariant
    """
    if not isinstance(document, dict):
        raise ConfigError("the configuration must be a JSON object")
    try:
        return ExperimentDocument.model_validate(document)
    except ValidationError as e:
        raise ConfigError(validation_issues(e)) from e


def packaged_config(name: str) -> Path | None:
    candidate = resources.files(CONFIG_PACKAGE) / CONFIG_DIR / name
    return Path(str(candidate)) if candidate.is_file() else None


def resolve_config_path(path: Path | None) -> Path:
    """A file on disk, else a configuration shipped with the package by that name."""
    if path is None:
        path = Path(DEFAULT_CONFIG)
    if path.is_file():
        return path
    shipped = packaged_config(path.name) if path.parent == Path(".") else None
    if shipped is None:
        raise ConfigError([("config", f"configuration file {str(path)!r} not found")])
    return shipped


def load_config(path: Path | None = None, **overrides: Any) -> ExperimentDocument:
    """Read, override and validate a configuration file.

    Args:
        path: JSON file, or the name of a shipped configuration; default.json when omitted
        overrides: see merge_overrides

    Raises:
        ConfigError: unreadable file, invalid JSON or violated invariants
    """
    path = resolve_config_path(path)
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError([("", f"{path}: invalid JSON at line {e.lineno}: {e.msg}")]) from e
    except OSError as e:
        raise ConfigError([("config", f"cannot read {path}: {e}")]) from e
    if isinstance(document, dict):
        merge_overrides(document, overrides)
    doc = validate_config(document)
    logger.debug("loaded configuration", extra={"path": str(path), "seed": doc.seed})
    return doc


def merge_overrides(document: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Apply top-level overrides in place; dict values are merged one level deep.

    None values are ignored.
    """
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(document.get(key), dict):
            document[key] = {**document[key], **value}
        else:
            document[key] = value
    return document


def with_overrides(doc: ExperimentDocument, **overrides: Any) -> ExperimentDocument:
    """Re-validate doc with overrides such as experiment={"max_episodes": 30}."""
    return validate_config(merge_overrides(doc.model_dump(mode="json"), overrides))


def write_resolved_config(out_dir: Path, doc: ExperimentDocument) -> Path:
    return write_json(out_dir / RESOLVED_CONFIG_FILE, doc.resolved())
