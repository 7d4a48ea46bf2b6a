from dataclasses import dataclass
from pathlib import Path

from surro_accel.config.types import ExperimentDocument


@dataclass
class RunContext:
    """Shared context handed to every CLI command.

    Attributes:
        doc: validated configuration, overrides applied
        out_dir: directory receiving every output file
        num_workers: worker cap for multi-seed work
        quiet: only warnings and errors are logged
    """

    doc: ExperimentDocument
    out_dir: Path
    num_workers: int = 1
    quiet: bool = False
