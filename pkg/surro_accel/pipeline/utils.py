"""Curve files of an experiment and the markdown rendering of its report."""

from pathlib import Path

import pandas as pd
from jinja2 import ChoiceLoader, Environment, FileSystemLoader, PackageLoader

from surro_accel.dqn.utils import curve_to_frame, read_curve, write_curve
from surro_accel.pipeline.constants import CURVES_DIR
from surro_accel.pipeline.types import ComparisonReport, ExperimentReport, SeedRun

REPORT_TEMPLATE = "report.md.j2"


def curve_path(label: str, seed: int, arm: str) -> str:
    """Curve file of one arm, relative to the output directory."""
    return f"{CURVES_DIR}/{label}_seed{seed}_{arm}.csv"


def write_seed_curves(out_dir: Path, label: str, run: SeedRun) -> list[str]:
    written = [curve_path(label, run.seed, "direct")]
    write_curve(out_dir / written[0], run.direct)
    if run.pretrain_finetune is not None:
        written.append(curve_path(label, run.seed, "pretrain_finetune"))
        write_curve(out_dir / written[1], run.pretrain_finetune)
    return written


def summarize_curves(report_dir: Path, paths: list[str], window: int) -> pd.DataFrame:
    """One row per (curve, phase): episodes, mean reward, final-window mean, replications."""
    frames = []
    for path in paths:
        frame = curve_to_frame(read_curve(report_dir / path))
        frame["curve"] = path
        frames.append(frame)
    if not frames:
        return pd.DataFrame(
            columns=["curve", "phase", "episodes", "mean_reward", "final_mean", "sim", "surrogate"]
        )
    curves = pd.concat(frames, ignore_index=True)
    return (
        curves.groupby(["curve", "phase"], sort=False)
        .agg(
            episodes=("episode", "size"),
            mean_reward=("total_reward", "mean"),
            final_mean=("total_reward", lambda s: s.tail(window).mean()),
            sim=("cumulative_sim_replications", "max"),
            surrogate=("cumulative_surrogate_replications", "max"),
        )
        .reset_index()
    )


def _curve_paths(comparison: ComparisonReport) -> list[str]:
    return [
        path
        for outcome in comparison.seeds
        for path in (outcome.direct_curve, outcome.pretrain_finetune_curve)
        if path is not None
    ]


def render_report(
    report: ExperimentReport,
    report_dir: Path,
    window: int,
    template_dir: Path | None = None,
) -> str:
    """Markdown summary of an experiment report.

    Templates in template_dir take precedence over the packaged ones.
    """
    loaders = []
    if template_dir is not None:
        loaders.append(FileSystemLoader(template_dir))
    loaders.append(PackageLoader("surro_accel", "templates"))
    env = Environment(loader=ChoiceLoader(loaders), trim_blocks=True, lstrip_blocks=True)

    comparisons = [c for c in (report.original, report.reward_change) if c is not None]
    summaries = {
        c.label: summarize_curves(report_dir, _curve_paths(c), window).to_dict("records")
        for c in comparisons
    }
    return env.get_template(REPORT_TEMPLATE).render(
        report=report, comparisons=comparisons, summaries=summaries, window=window
    )
