"""
friendrun CLI - run the closed-laboratory experiment, settle the bet, sweep angles.
"""

import logging
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from friendrun.analysis import entropy_sweep, theta_grid
from friendrun.cli.logs import LogHandler
from friendrun.cli.report import (
    BetComparison,
    Report,
    render,
    report_schema,
    run_metrics,
    sweep_metrics,
    write_report,
)
from friendrun.cli.scenario import ScenarioConfig, parse_angle, resolve_fields, resolve_scenario, scenario_text
from friendrun.config import ExitCodes, get_config_manager
from friendrun.config.constants import ExceptionConstants
from friendrun.dynamics import (
    UnitaryOnly,
    distinguishing_power,
    exact_bet_report,
    run_trajectories,
    trajectory_rng,
)
from friendrun.errors import ScenarioConfigError
from friendrun.protocol import ProtocolScript, run_script
from friendrun.utils import ExceptionHandler

# Load environment variables from .env file
load_dotenv()

console = Console(stderr=True)


def configure_logging(scenario: str, debug: bool) -> LogHandler:
    logger = logging.getLogger("friendrun")
    logger.handlers = []

    handler = LogHandler(scenario, console=console)
    handler.setFormatter(
        logging.Formatter("%(levelname)s %(name)s %(message)s", "%H:%M:%S")
        if debug
        else logging.Formatter("%(message)s", "%H:%M:%S")
    )
    logger.addHandler(handler)

    manager = get_config_manager()
    level = manager.get_system_config().log_level.upper()
    logger.setLevel(logging.DEBUG if debug else getattr(logging, level, logging.INFO))
    logger.propagate = False
    logger.debug(manager.get_summary())
    return handler


def scenario_options(f):
    """Options shared by the scenario-driven commands."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Scenario file (flat key = value format)"),
        click.option("--scenario", type=click.Choice(["wigner", "necker"]), default=None,
                     help="Built-in experiment"),
        click.option("--theta", type=str, default=None, help="Decay angle in radians or pi/2, pi/3, pi/4, pi/6"),
        click.option("--omega-t", "omega_t", type=str, default=None, help="Rotation of the percept (necker)"),
        click.option("--model", type=click.Choice(["unitary", "collapse"]), default=None,
                     help="Dynamics model"),
        click.option("--query", type=click.Choice(["definite", "which"]), default=None,
                     help="Question written on the paper"),
        click.option("--collapse-step", "collapse_step", type=str, default=None,
                     help="Step after which the collapse happens (model=collapse)"),
        click.option("--collapse-subsystem", "collapse_subsystem", type=str, default=None,
                     help="Register that collapses (default: the register the step writes)"),
        click.option("--keep-record", "keep_record", is_flag=True, default=None,
                     help="Necker: leave the ancilla record in place"),
        click.option("--trajectories", "n_trajectories", type=int, default=None,
                     help="Number of Monte-Carlo trajectories"),
        click.option("--seed", "master_seed", type=int, default=None, help="Master seed"),
        click.option("--workers", type=int, default=None, help="Worker threads for trajectories"),
        click.option("--output", type=click.Choice(["json", "csv", "text"]), default=None,
                     help="Report format"),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to a file"),
        click.option("--debug", is_flag=True, default=False, help="Enable verbose debug logging"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def command_guard(context: str):
    """Run a command body and turn any failure into the matching exit code."""

    def decorator(f):
        @wraps(f)
        def wrapper(*args, **kwargs):
            debug = kwargs.get("debug", False)
            try:
                code = f(*args, **kwargs)
            except click.exceptions.Exit:
                raise
            except Exception as e:
                code = ExceptionHandler.handle_command_error(e, context, debug)
            click.get_current_context().exit(code or ExitCodes.SUCCESS)

        return wrapper

    return decorator


def _overrides(options: Dict[str, Any]) -> Dict[str, Any]:
    keys = (
        "scenario", "theta", "omega_t", "model", "query", "collapse_step", "collapse_subsystem", "keep_record",
        "n_trajectories", "master_seed", "workers", "output",
    )
    overrides = {key: options.get(key) for key in keys}
    # an unset flag arrives as False and must not mask the scenario file
    if not overrides["keep_record"]:
        overrides["keep_record"] = None
    return overrides


def _resolve(config_path: Optional[str], options: Dict[str, Any]) -> ScenarioConfig:
    return resolve_scenario(get_config_manager().config, config_path, _overrides(options))


def _emit(report: Report, config: ScenarioConfig, out: Optional[str]) -> None:
    indent = get_config_manager().get_report_config().json_indent
    out_dir = get_config_manager().get_report_config().out_dir
    if out is not None and out_dir and not Path(out).is_absolute():
        out = str(Path(out_dir) / out)
    write_report(render(report, config.output, indent), out)


def _show_dry_run(script: ProtocolScript, config: ScenarioConfig) -> None:
    """Show the steps that would run."""
    logger = logging.getLogger("friendrun")
    logger.info(f"📋 {script.name}: {len(script.steps)} steps over {', '.join(script.layout.names)}")

    table = Table(title="Steps to Execute")
    table.add_column("Step", style="cyan")
    table.add_column("Label", style="green")
    table.add_column("Kind", style="white")
    table.add_column("Reversible", style="magenta")
    table.add_column("Details", style="yellow")
    for i, step in enumerate(script.steps):
        details = step.describe()
        table.add_row(
            str(i), step.label, step.kind.value, "yes" if step.reversible else "",
            details[:60] + "..." if len(details) > 60 else details,
        )
    console.print(table)
    logger.info(f"🎲 Model: {config.dynamics_model(script).describe()}")


@click.group()
@click.version_option(package_name="friendrun")
def cli():
    """friendrun - Simulate a friend in a closed laboratory, and the bet on the undo."""
    pass


@cli.command()
@scenario_options
@click.option("--dry-run", is_flag=True, default=False, help="Show the steps without running them")
@click.option("--save-config", type=click.Path(dir_okay=False), default=None,
              help="Write the resolved scenario file")
@command_guard("Run")
def run(config_path: Optional[str], out: Optional[str], debug: bool, dry_run: bool,
        save_config: Optional[str], **options):
    """Run one scenario and report its step-by-step trace."""
    handler = configure_logging("run", debug)
    config = _resolve(config_path, options)
    handler.scenario = f"{config.scenario} angle={config.angle:.6g} model={config.model}"
    logger = logging.getLogger("friendrun")
    script = config.build_script()

    if save_config:
        try:
            Path(save_config).write_text(scenario_text(config), encoding="utf-8")
        except ExceptionConstants.FILE_OPERATION_EXCEPTIONS as e:
            raise ScenarioConfigError("save_config", f"cannot write {save_config}: {e}") from None
        logger.info(f"💾 Scenario saved to: {save_config}")

    if dry_run:
        _show_dry_run(script, config)
        return ExitCodes.SUCCESS

    model = config.dynamics_model(script)
    with handler.render():
        logger.info(f"🚀 Running {script.name} under {model.describe()}")
        handler.update_step("Running script...")
        trace = run_script(script, model, rng=trajectory_rng(config.master_seed, 0), on_event=handler.handle_event)
        handler.finish(True, f"Return fidelity {trace.final_fidelity:.6f}")
        logger.info(f"✅ Return fidelity {trace.final_fidelity:.12f}")

    report = Report(config=config, trace=trace.records, metrics=run_metrics(script, trace))
    _emit(report, config, out)
    return ExitCodes.SUCCESS


@cli.command()
@scenario_options
@command_guard("Bet")
def bet(config_path: Optional[str], out: Optional[str], debug: bool, **options):
    """Run both dynamics models on the same script and seed, and compare them."""
    handler = configure_logging("bet", debug)
    config = _resolve(config_path, options)
    handler.scenario = f"bet {config.scenario} angle={config.angle:.6g}"
    logger = logging.getLogger("friendrun")
    script = config.build_script()
    unitary, collapse = UnitaryOnly(), config.collapse_model(script)

    with handler.render():
        handler.update_step("Unitary trajectories...")
        unitary_report = run_trajectories(
            script, unitary, config.n_trajectories, config.master_seed, config.workers, handler.handle_event
        )
        handler.update_step("Collapse trajectories...")
        collapse_report = run_trajectories(
            script, collapse, config.n_trajectories, config.master_seed, config.workers, handler.handle_event
        )
        power = distinguishing_power(unitary_report, collapse_report)
        handler.finish(True, f"TV distance {power.tv_distance:.6f}")
        logger.info(f"🎯 TV distance {power.tv_distance:.6f}, runs to settle: {power.runs_to_settle}")

    exact_unitary, exact_collapse = exact_bet_report(script, unitary), exact_bet_report(script, collapse)
    exact_power = distinguishing_power(exact_unitary, exact_collapse)
    metrics = {
        "exact_tv_distance": exact_power.tv_distance,
        "exact_runs_to_settle": exact_power.runs_to_settle,
        "exact_mean_return_fidelity": {
            "unitary": exact_unitary.mean_return_fidelity,
            "collapse": exact_collapse.mean_return_fidelity,
        },
    }
    report = Report(
        config=config,
        metrics=metrics,
        bet=BetComparison(unitary=unitary_report, collapse=collapse_report, distinguishing_power=power),
    )
    _emit(report, config, out)
    return ExitCodes.SUCCESS


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Scenario file (flat key = value format)")
@click.option("--theta-min", type=str, default=None, help="Smallest angle")
@click.option("--theta-max", type=str, default=None, help="Largest angle")
@click.option("--steps", type=int, default=None, help="Number of angles, endpoints included")
@click.option("--query", type=click.Choice(["definite", "which"]), default=None, help="Question written on the paper")
@click.option("--output", type=click.Choice(["json", "csv", "text"]), default=None, help="Report format")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to a file")
@click.option("--debug", is_flag=True, default=False, help="Enable verbose debug logging")
@command_guard("Sweep")
def sweep(config_path: Optional[str], theta_min: Optional[str], theta_max: Optional[str], steps: Optional[int],
          query: Optional[str], output: Optional[str], out: Optional[str], debug: bool):
    """Tabulate Bob's entropy, the purity of the paper register and the return fidelity across angles."""
    configure_logging("entropy sweep", debug)
    # the sweep is always unitary, so only the query and the report format are read
    config = resolve_fields(
        get_config_manager().config, ("query", "output"), config_path, {"query": query, "output": output}
    )
    defaults = get_config_manager().get_sweep_config()
    try:
        low = parse_angle(theta_min if theta_min is not None else defaults.theta_min)
        high = parse_angle(theta_max if theta_max is not None else defaults.theta_max)
    except ValueError as e:
        raise ScenarioConfigError("theta_min/theta_max", str(e)) from None
    count = steps if steps is not None else defaults.steps

    rows = entropy_sweep(theta_grid(low, high, count), query=config.query)
    report = Report(config=config, metrics=sweep_metrics(rows))
    _emit(report, config, out)
    return ExitCodes.SUCCESS


@cli.command()
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the schema to a file")
@command_guard("Schema")
def schema(out: Optional[str]):
    """Print the JSON schema of reports."""
    write_report(report_schema(), out)
    return ExitCodes.SUCCESS


if __name__ == "__main__":
    cli()
