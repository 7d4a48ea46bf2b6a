import logging
from pathlib import Path

import click
import logfire
from dotenv import find_dotenv, load_dotenv

from surro_accel.callcenter.environment import SimulationEnvironment
from surro_accel.callcenter.policies import BASELINE_POLICIES, Policy, baseline_policy
from surro_accel.callcenter.utils import read_trajectories, write_trajectories
from surro_accel.config.types import ExperimentDocument
from surro_accel.config.utils import load_config, write_resolved_config
from surro_accel.constants import (
    BASELINE_POLICY_STREAM,
    CURVE_FILE,
    QNET_FILE,
    REPORT_FILE,
    REPORT_MARKDOWN_FILE,
    RESOLVED_CONFIG_FILE,
    SURROGATE_FILE,
    TRAJECTORY_FILE,
)
from surro_accel.dqn.agent import greedy_policy
from surro_accel.dqn.utils import write_curve
from surro_accel.errors import ConfigError, SurroAccelError
from surro_accel.neural.mlp import Mlp
from surro_accel.neural.utils import load_weights, save_weights
from surro_accel.pipeline.experiments import (
    collect,
    direct_agent,
    fit_surrogate,
    pretrain_finetune_agent,
    run_experiment,
)
from surro_accel.pipeline.harness import ExperimentHarness
from surro_accel.pipeline.types import ExperimentReport, StabilizationCriterion
from surro_accel.pipeline.utils import render_report
from surro_accel.stochastic.types import U64_MAX, RngStream
from surro_accel.surrogate.utils import load_surrogate, save_surrogate
from surro_accel.types import RunContext
from surro_accel.utils import get_num_workers, setup_logging, write_atomic

logger = logging.getLogger(__name__)


RUN_OPTIONS = [
    click.option(
        "--config",
        type=click.Path(path_type=Path),
        default=None,
        help="Configuration JSON, or the name of a shipped one (default.json, reward_change.json)",
    ),
    click.option(
        "--out",
        type=click.Path(file_okay=False, path_type=Path),
        default=Path("out"),
        show_default=True,
        help="Output directory",
    ),
    click.option(
        "--seed",
        type=click.IntRange(0, U64_MAX),
        default=None,
        help="Override the configuration's seed",
    ),
    click.option(
        "--env",
        type=click.Path(exists=True, path_type=Path),
        default=None,
        help="Path to environment file",
    ),
    click.option("--quiet", is_flag=True, help="Only log warnings and errors"),
]


def run_options(command):
    """Options shared by every command that runs from a configuration."""
    for option in reversed(RUN_OPTIONS):
        command = option(command)
    return command


def build_context(
    config: Path | None,
    out: Path,
    seed: int | None,
    env: Path | None,
    quiet: bool,
    **overrides,
) -> RunContext:
    """Load .env, configure logging, validate the configuration, snapshot it into out."""
    load_dotenv(dotenv_path=env if env else find_dotenv(usecwd=True))
    setup_logging(quiet=quiet)
    doc = load_config(config, seed=seed, **overrides)
    out.mkdir(parents=True, exist_ok=True)
    write_resolved_config(out, doc)
    return RunContext(doc=doc, out_dir=out, num_workers=get_num_workers(), quiet=quiet)


def _experiment_overrides(doc_section: str, **values) -> dict:
    values = {k: v for k, v in values.items() if v is not None}
    return {doc_section: values} if values else {}


def save_qnet(out_dir: Path, qnet: Mlp) -> Path:
    return write_atomic(out_dir / QNET_FILE, save_weights(qnet) + "\n")


def qnet_policy(path: Path, doc: ExperimentDocument) -> Policy:
    """Epsilon-greedy policy of a saved network, epsilon from the configuration."""
    qnet = load_weights(path.read_bytes())
    return greedy_policy(qnet, doc.dqn.epsilon, RngStream(doc.seed, BASELINE_POLICY_STREAM))


@click.group()
@click.version_option(package_name="surro-accel")
def cli():
    pass


@cli.command()
@run_options
@click.option("--replications", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--policy",
    type=click.Choice(BASELINE_POLICIES),
    default="random",
    show_default=True,
    help="Baseline staffing policy",
)
@click.option(
    "--qnet",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Use a trained Q-network (epsilon-greedy) instead of a baseline policy",
)
def simulate(config, out, seed, env, quiet, replications, policy, qnet):
    """Record replications of the call center under a fixed policy"""
    ctx = build_context(config, out, seed, env, quiet)
    doc = ctx.doc
    config_ = doc.call_center()
    if qnet is not None:
        chosen = qnet_policy(qnet, doc)
    else:
        chosen = baseline_policy(
            policy, config_.n_experts, RngStream(doc.seed, BASELINE_POLICY_STREAM)
        )
    with logfire.span("simulate", replications=replications):
        trajectories = collect(config_, doc.reward_spec(), chosen, replications, doc.seed)
    write_trajectories(out / TRAJECTORY_FILE, trajectories)


@cli.command("train-direct")
@run_options
@click.option("--episodes", type=click.IntRange(min=0), default=None, help="Training episodes")
def train_direct(config, out, seed, env, quiet, episodes):
    """Train a DQN agent against the simulation only"""
    ctx = build_context(config, out, seed, env, quiet, **_experiment_overrides("dqn", episodes=episodes))
    doc = ctx.doc
    with logfire.span("train-direct", seed=doc.seed):
        agent, curve = direct_agent(doc.call_center(), doc.reward_spec(), doc.dqn, doc.seed)
    save_qnet(out, agent.qnet)
    write_curve(out / CURVE_FILE, curve)


@cli.command("collect")
@run_options
@click.option(
    "--replications",
    type=click.IntRange(min=1),
    default=None,
    help="Replications to record (experiment.collect_replications by default)",
)
@click.option(
    "--episodes",
    type=click.IntRange(min=0),
    default=None,
    help="Direct training episodes before recording (experiment.max_episodes by default)",
)
@click.option(
    "--qnet",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Record with this trained network instead of training one first",
)
def collect_command(config, out, seed, env, quiet, replications, episodes, qnet):
    """Record trajectories with the epsilon-greedy policy of a trained agent"""
    ctx = build_context(
        config,
        out,
        seed,
        env,
        quiet,
        **_experiment_overrides(
            "experiment", collect_replications=replications, max_episodes=episodes
        ),
    )
    doc = ctx.doc
    call_center = doc.call_center()
    reward = doc.reward_spec()
    if qnet is not None:
        policy = qnet_policy(qnet, doc)
    else:
        agent, curve = direct_agent(
            call_center, reward, doc.dqn, doc.seed, doc.experiment.max_episodes
        )
        save_qnet(out, agent.qnet)
        write_curve(out / CURVE_FILE, curve)
        policy = agent.policy()
    trajectories = collect(
        call_center, reward, policy, doc.experiment.collect_replications, doc.seed
    )
    write_trajectories(out / TRAJECTORY_FILE, trajectories)


@cli.command("fit-surrogate")
@run_options
@click.option(
    "--trajectories",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Trajectory JSONL file from simulate or collect",
)
def fit_surrogate_command(config, out, seed, env, quiet, trajectories):
    """Fit the transition surrogate on recorded trajectories"""
    ctx = build_context(config, out, seed, env, quiet)
    doc = ctx.doc
    model, rmse = fit_surrogate(
        read_trajectories(trajectories), doc.call_center(), doc.surrogate, doc.seed
    )
    save_surrogate(out / SURROGATE_FILE, model, rmse)
    logfire.info("surrogate fitted", rmse=rmse.worst())


@cli.command("pretrain-finetune")
@run_options
@click.option(
    "--surrogate",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Surrogate file from fit-surrogate or experiment",
)
@click.option(
    "--pretrain-episodes",
    type=click.IntRange(min=0),
    default=None,
    help="Surrogate episodes (experiment.pretrain_surrogate_episodes by default)",
)
@click.option(
    "--episodes",
    type=click.IntRange(min=0),
    default=None,
    help="Simulation fine-tuning episodes (experiment.max_episodes by default)",
)
def pretrain_finetune_command(config, out, seed, env, quiet, surrogate, pretrain_episodes, episodes):
    """Pretrain on a surrogate, then fine-tune on the simulation"""
    ctx = build_context(
        config,
        out,
        seed,
        env,
        quiet,
        **_experiment_overrides(
            "experiment",
            pretrain_surrogate_episodes=pretrain_episodes,
            max_episodes=episodes,
        ),
    )
    doc = ctx.doc
    spec = doc.experiment
    agent, curve = pretrain_finetune_agent(
        doc.call_center(),
        doc.reward_spec(),
        load_surrogate(surrogate),
        doc.dqn,
        doc.seed,
        spec.pretrain_surrogate_episodes,
        spec.max_episodes,
        spec.finetune_reset_replay,
        spec.finetune_reset_optimizer,
    )
    save_qnet(out, agent.qnet)
    write_curve(out / CURVE_FILE, curve)


@cli.command()
@run_options
@click.option(
    "--episodes",
    type=click.IntRange(min=1),
    default=None,
    help="Simulation budget per run (experiment.max_episodes by default)",
)
@click.option(
    "--seeds",
    type=click.IntRange(min=1),
    default=None,
    help="Seeds per comparison (experiment.n_seeds by default)",
)
def experiment(config, out, seed, env, quiet, episodes, seeds):
    """Compare direct training with surrogate pretraining, before and after a reward change"""
    ctx = build_context(
        config,
        out,
        seed,
        env,
        quiet,
        **_experiment_overrides("experiment", max_episodes=episodes, n_seeds=seeds),
    )
    report = run_experiment(ctx.doc, out, ExperimentHarness(ctx.num_workers))
    for comparison in (report.original, report.reward_change):
        if comparison is not None:
            click.echo(
                f"{comparison.label}: median direct {comparison.median_direct}, "
                f"pretrain+finetune {comparison.median_pretrain_finetune}, "
                f"ratio {comparison.ratio}"
            )


@cli.command()
@click.option(
    "--report",
    "report_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=Path("out") / REPORT_FILE,
    show_default=True,
    help="Report JSON written by experiment",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory for report.md (the report's directory by default)",
)
@click.option(
    "--template-dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory with a report.md.j2 overriding the packaged template",
)
@click.option("--quiet", is_flag=True, help="Only log warnings and errors")
def report(report_path, out, template_dir, quiet):
    """Render the markdown summary of an experiment report"""
    setup_logging(quiet=quiet)
    report_dir = report_path.parent
    parsed = ExperimentReport.model_validate_json(report_path.read_bytes())
    window = StabilizationCriterion().window
    snapshot = report_dir / RESOLVED_CONFIG_FILE
    if snapshot.is_file():
        window = load_config(snapshot).stabilization.window
    markdown = render_report(parsed, report_dir, window, template_dir)
    write_atomic((out or report_dir) / REPORT_MARKDOWN_FILE, markdown)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and map failures to exit statuses.

    Returns:
        0 on success, 1 for configuration errors, the usage-error status for bad
        arguments and 2 for any other failure.
    """
    try:
        cli.main(args=argv, prog_name="surro-accel", standalone_mode=False)
    except ConfigError as e:
        click.echo(f"configuration error: {e}", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 2
    except SurroAccelError as e:
        logger.exception("command failed", extra={"error": type(e).__name__})
        return 2
    except Exception:
        logger.exception("unexpected failure")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
