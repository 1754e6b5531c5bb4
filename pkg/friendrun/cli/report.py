"""
Machine-readable reports: JSON, CSV and rich text tables.

JSON top-level keys: ``config``, ``trace``, ``metrics``, ``bet`` (optional)
and ``version``. Reports carry no timestamps, so a fixed seed gives
byte-identical output.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import click
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from friendrun import __version__
from friendrun.analysis import SWEEP_COLUMNS, SweepRow, coherence_witness
from friendrun.cli.scenario import ScenarioConfig
from friendrun.config.constants import ExceptionConstants, Tolerances
from friendrun.dynamics import BetReport, DistinguishingPower
from friendrun.protocol import ProtocolScript, RunTrace, StepRecord, evolve
from friendrun.qstate import format_state, outcome_probabilities, partial_trace
from friendrun.utils import LoggingUtils

TRACE_COLUMNS = ("label", "kind", "norm", "fidelity_to_initial", "fidelity_to_target", "record_purity")
BET_COLUMNS = ("model", "n_trajectories", "mean_return_fidelity", "freq_cat_alive_final", "freq_atom_decayed_final")


class BetComparison(BaseModel):
    unitary: BetReport
    collapse: BetReport
    distinguishing_power: DistinguishingPower


class Report(BaseModel):
    config: ScenarioConfig
    trace: List[StepRecord] = []
    metrics: Dict[str, Any] = {}
    bet: Optional[BetComparison] = None
    version: str = __version__


def run_metrics(script: ProtocolScript, trace: RunTrace) -> Dict[str, Any]:
    """Headline numbers of one run."""
    final = trace.final_state
    metrics: Dict[str, Any] = {
        "scenario": script.name,
        "angle": script.theta,
        "final_fidelity": trace.final_fidelity,
        "restored": trace.final_fidelity >= 1.0 - Tolerances.NORM,
        "final_state": format_state(final),
        "excited_final": {
            name: float(1.0 - outcome_probabilities(final, name)[0]) for name in script.layout.names
        },
        "max_entropy_bits": {
            name: max(r.entropies[name] for r in trace.records) for name in script.layout.names
        },
        "collapse_events": [event.model_dump() for event in trace.collapse_events],
    }
    if script.record is not None:
        metrics["min_record_purity"] = min(r.record_purity for r in trace.records)
    verifications = {r.label: r.verification for r in trace.records if r.verification is not None}
    if verifications:
        metrics["verification"] = verifications

    if script.observation is not None and not trace.collapse_events:
        label, register = script.observation
        observed = evolve(script.steps[: script.step_index(label) + 1], script.initial_state())
        witness = coherence_witness(observed, register)
        metrics["observation_witness"] = witness.model_dump()
        metrics["observation_entropy_bits"] = trace.record_for(label).entropies[register]
    if script.readout:
        register = script.readout[0]
        reduced = partial_trace(final, [register]).matrix
        metrics["final_coherence"] = {register: float(abs(reduced[0, 1]))}
    return metrics


def sweep_metrics(rows: List[SweepRow]) -> Dict[str, Any]:
    return {"sweep": [row.model_dump() for row in rows]}


def render_json(report: Report, indent: int = 2) -> str:
    return report.model_dump_json(indent=indent) + "\n"


def _csv(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    return "" if value is None else value


def render_csv(report: Report) -> str:
    """One table per report kind: sweep rows, bet rows, or trace rows."""
    if "sweep" in report.metrics:
        return _csv(SWEEP_COLUMNS, ([row[c] for c in SWEEP_COLUMNS] for row in report.metrics["sweep"]))
    if report.bet is not None:
        rows = []
        for name, bet in (("unitary", report.bet.unitary), ("collapse", report.bet.collapse)):
            rows.append([
                name,
                bet.n_trajectories,
                bet.mean_return_fidelity,
                _cell(bet.freq_cat_alive_final),
                _cell(bet.freq_atom_decayed_final),
            ])
        return _csv(BET_COLUMNS, rows)
    registers = list(report.trace[0].entropies) if report.trace else []
    header = list(TRACE_COLUMNS) + [f"entropy_{name}" for name in registers]
    rows = (
        [r.label, r.kind, r.norm, r.fidelity_to_initial, r.fidelity_to_target, _cell(r.record_purity)]
        + [r.entropies[name] for name in registers]
        for r in report.trace
    )
    return _csv(header, rows)


def _trace_table(trace: List[StepRecord]) -> Table:
    registers = list(trace[0].entropies) if trace else []
    table = Table(title="Run Trace")
    table.add_column("#", style="cyan", justify="right")
    table.add_column("Step", style="green")
    table.add_column("Kind", style="white")
    table.add_column("F(initial)", justify="right")
    table.add_column("F(target)", justify="right")
    table.add_column("Record purity", justify="right", style="yellow")
    for name in registers:
        table.add_column(f"S({name})", justify="right")
    for r in trace:
        purity = "" if r.record_purity is None else f"{r.record_purity:.6f}"
        table.add_row(
            str(r.index), r.label, r.kind, f"{r.fidelity_to_initial:.6f}", f"{r.fidelity_to_target:.6f}", purity,
            *(f"{r.entropies[name]:.6f}" for name in registers),
        )
    return table


def _bet_table(bet: BetComparison) -> Table:
    table = Table(title="Bet")
    table.add_column("Model", style="cyan")
    table.add_column("Trajectories", justify="right")
    table.add_column("Return fidelity", justify="right", style="green")
    for name in bet.unitary.freq_excited_final:
        table.add_column(f"P({name} excited)", justify="right")
    for report in (bet.unitary, bet.collapse):
        table.add_row(
            report.model.describe(),
            "exact" if report.exact else str(report.n_trajectories),
            f"{report.mean_return_fidelity:.6f} ± {report.return_fidelity_stderr:.6f}",
            *(
                f"{report.freq_excited_final[name]:.6f} ± {report.freq_excited_stderr[name]:.6f}"
                for name in bet.unitary.freq_excited_final
            ),
        )
    return table


def _sweep_table(rows: List[Dict[str, float]]) -> Table:
    table = Table(title="Entropy Sweep")
    for column in SWEEP_COLUMNS:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(f"{row[c]:.9f}" for c in SWEEP_COLUMNS))
    return table


def render_text(report: Report, width: int = 120) -> str:
    buffer = io.StringIO()
    console = Console(file=buffer, width=width, color_system=None, force_terminal=False)
    if report.trace:
        console.print(_trace_table(report.trace))
    if "sweep" in report.metrics:
        console.print(_sweep_table(report.metrics["sweep"]))
    if report.bet is not None:
        console.print(_bet_table(report.bet))
        power = report.bet.distinguishing_power
        console.print(f"TV distance: {power.tv_distance:.6f}")
        if power.runs_to_settle is not None:
            console.print(f"Runs to settle ({power.most_discriminating}, 3σ): {power.runs_to_settle}")
    scalars = {k: v for k, v in report.metrics.items() if isinstance(v, (int, float, str)) and k != "sweep"}
    for key, value in scalars.items():
        console.print(f"{key}: {value:.12g}" if isinstance(value, float) else f"{key}: {value}")
    console.print(f"friendrun {report.version}")
    return buffer.getvalue()


def render(report: Report, output: str, indent: int = 2) -> str:
    if output == "json":
        return render_json(report, indent)
    if output == "csv":
        return render_csv(report)
    return render_text(report)


def write_report(text: str, out: Optional[Union[str, Path]] = None) -> None:
    """Write to ``out`` or stdout."""
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        path = Path(out)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except ExceptionConstants.FILE_OPERATION_EXCEPTIONS:
        LoggingUtils.log_error("Report", "Cannot write report to {out}", out=out)
        raise
    LoggingUtils.log_success("Report", "Report written to {out}", out=out)


def report_schema() -> str:
    return json.dumps(Report.model_json_schema(), indent=2) + "\n"
