import logging
import shutil
from contextlib import nullcontext
from typing import List, Optional

from rich.console import Console
from rich.layout import Layout
from rich.live import Live
from rich.panel import Panel
from rich.text import Text

from friendrun.dynamics import CollapseEvent, TrajectoryBatchEvent
from friendrun.protocol import StepRecord


class LogHandler(logging.Handler):
    """
    Renders friendrun logs on stderr.

    On a terminal the logs go to a live layout with an activity log, a
    scenario panel and a status panel; otherwise every record becomes one
    plain line, so reports on stdout stay clean.
    """

    def __init__(self, scenario: str, current_step: str = "Initializing...", console: Optional[Console] = None):
        super().__init__()

        self.scenario = scenario
        self.current_step = current_step
        self.is_completed = False
        self.is_success = False
        self.console = console or Console(stderr=True)
        self.live_enabled = self.console.is_terminal
        self.layout = self._create_layout()
        self.logs: List[str] = []

    def emit(self, record):
        msg = self.format(record)
        if not self.live_enabled:
            self.console.print(msg, markup=False, highlight=False, soft_wrap=True)
            return

        for line in msg.splitlines():
            self.logs.append(line)
            if len(self.logs) > 100:
                self.logs.pop(0)
        self.rerender()

    def render(self):
        if not self.live_enabled:
            return nullcontext()
        return Live(self.layout, refresh_per_second=4, console=self.console)

    def rerender(self):
        if self.live_enabled:
            self._update_layout()

    def update_step(self, step: str):
        self.current_step = step
        self.rerender()

    def finish(self, success: bool, step: str):
        self.is_completed = True
        self.is_success = success
        self.update_step(step)

    def _create_layout(self):
        layout = Layout()
        layout.split(
            Layout(name="logs"),
            Layout(name="scenario", size=3),
            Layout(name="status", size=3),
        )
        return layout

    def _update_layout(self):
        terminal_height = shutil.get_terminal_size(fallback=(80, 24)).lines
        # scenario panel + status panel + borders
        available_log_lines = max(8, terminal_height - 10)
        visible_logs = self.logs[-available_log_lines:] or ["Initializing..."]

        self.layout["logs"].update(
            Panel(
                "\n".join(visible_logs),
                title=f"Activity Log ({len(self.logs)} entries)",
                border_style="blue",
                title_align="left",
                padding=(0, 1),
                height=available_log_lines + 2,
            )
        )
        self.layout["scenario"].update(
            Panel(
                Text(self.scenario, style="bold"),
                title="Scenario",
                border_style="magenta",
                title_align="left",
                padding=(0, 1),
                height=3,
            )
        )

        step_display = Text()
        if self.is_completed:
            if self.is_success:
                step_display.append("✓ ", style="bold green")
                panel_title, panel_style = "Completed", "green"
            else:
                step_display.append("✗ ", style="bold red")
                panel_title, panel_style = "Failed", "red"
        else:
            step_display.append("⚡ ", style="bold yellow")
            panel_title, panel_style = "Status", "yellow"
        step_display.append(self.current_step)

        self.layout["status"].update(
            Panel(
                step_display,
                title=panel_title,
                border_style=panel_style,
                title_align="left",
                padding=(0, 1),
                height=3,
            )
        )

    def handle_event(self, event):
        """Handle events streamed by the runner and the trajectory sampler."""
        logger = logging.getLogger("friendrun")

        if isinstance(event, StepRecord):
            self.current_step = f"Step {event.index}: {event.label}"
            logger.debug(
                f"📍 {event.label} ({event.kind}): F(initial)={event.fidelity_to_initial:.6f} "
                f"F(target)={event.fidelity_to_target:.6f}"
            )

        elif isinstance(event, CollapseEvent):
            logger.info(
                f"💥 Collapse of {event.subsystem} after {event.step_label}: "
                f"outcome {event.outcome} (p={event.probability:.4f})"
            )

        elif isinstance(event, TrajectoryBatchEvent):
            self.current_step = f"Trajectories {event.completed}/{event.total}"
            logger.debug(f"🔄 {event.completed}/{event.total} trajectories")

        else:
            logger.debug(f"🔄 {event.__class__.__name__}")
        self.rerender()
