"""
Monte-Carlo trajectories and the bet statistics built from them.

Every trajectory runs the script from the prepared state, lets the dynamics
model collapse it, and ends with a computational-basis readout of the
script's readout registers. The laboratory before the collapse point is the
same for all trajectories, and after it depends only on the collapse outcome,
so both parts are computed once and shared; a trajectory only draws its
collapse outcome and its readout from its own random stream.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, computed_field

from friendrun.config.constants import Registers, Tolerances
from friendrun.dynamics.models import DynamicsModel
from friendrun.dynamics.rng import trajectory_rng
from friendrun.errors import DynamicsError
from friendrun.protocol.runner import evolve
from friendrun.protocol.steps import ProtocolScript
from friendrun.qstate import (
    DensityMatrix,
    PureState,
    fidelity,
    outcome_probabilities,
    project,
    sample_outcome,
)
from friendrun.utils import LoggingUtils, log_execution_time

# smallest trajectory count for which z-scores are reported
MIN_TRAJECTORIES_FOR_Z = 100
# sigma level used to size the number of runs that settle the bet
SETTLE_SIGMA = 3.0

NO_COLLAPSE = "none"
RETURN_FIDELITY = "return_fidelity"


class TrajectoryBatchEvent(BaseModel):
    """Progress of a trajectory batch."""

    completed: int
    total: int


class BetReport(BaseModel):
    """Final-state statistics of one dynamics model on one script."""

    model: DynamicsModel
    script: str
    script_signature: str
    theta: float
    n_trajectories: int
    master_seed: Optional[int] = None
    exact: bool = False
    mean_return_fidelity: float
    return_fidelity_stderr: float
    freq_excited_final: Dict[str, float]
    freq_excited_stderr: Dict[str, float]
    branch_counts: Dict[str, int]
    branch_frequencies: Dict[str, float]
    readout_counts: Dict[str, int]
    readout_frequencies: Dict[str, float]

    @computed_field
    @property
    def freq_cat_alive_final(self) -> Optional[float]:
        if Registers.CAT not in self.freq_excited_final:
            return None
        return 1.0 - self.freq_excited_final[Registers.CAT]

    @computed_field
    @property
    def freq_atom_decayed_final(self) -> Optional[float]:
        return self.freq_excited_final.get(Registers.ATOM)


class ObservableComparison(BaseModel):
    name: str
    p_a: float
    p_b: float
    difference: float
    z_score: Optional[float] = None


class DistinguishingPower(BaseModel):
    """How well the final readouts tell two dynamics models apart."""

    tv_distance: float
    observables: List[ObservableComparison]
    most_discriminating: Optional[str] = None
    runs_to_settle: Optional[int] = None

    def __float__(self) -> float:
        return self.tv_distance


@dataclass(frozen=True)
class _Branch:
    """Laboratory after the undo, given one collapse outcome."""

    label: str
    weight: float
    final_state: PureState
    return_fidelity: float
    readout_probabilities: np.ndarray


@dataclass(frozen=True)
class _Plan:
    branches: Tuple[_Branch, ...]
    readout_labels: Tuple[str, ...]
    readout_dims: Tuple[int, ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.branches])


def _readout_probabilities(state: PureState, readout: Sequence[str]) -> np.ndarray:
    layout = state.layout
    weights = np.abs(state.as_tensor()) ** 2
    keep = layout.axes_of(readout)
    other = tuple(a for a in range(len(layout)) if a not in keep)
    marginal = weights.sum(axis=other) if other else weights
    # sum() keeps the remaining axes in layout order
    return marginal.reshape(-1)


def _plan(script: ProtocolScript, model: DynamicsModel) -> _Plan:
    model.validate_for(script)
    readout = script.readout or script.layout.names
    sub = script.layout.subset(readout)
    labels = tuple(sub.label(i) for i in range(sub.total_dim))
    target = script.target_state()

    def finish(label: str, weight: float, state: PureState) -> _Branch:
        return _Branch(
            label=label,
            weight=weight,
            final_state=state,
            return_fidelity=fidelity(state, target),
            readout_probabilities=_readout_probabilities(state, sub.names),
        )

    split = next((i for i, step in enumerate(script.steps) if model.collapses_after(step)), None)
    initial = script.initial_state()
    if split is None:
        branch = finish(NO_COLLAPSE, 1.0, evolve(script.steps, initial))
        return _Plan((branch,), labels, sub.dims)

    subsystem = model.subsystem
    prefix = evolve(script.steps[: split + 1], initial)
    probabilities = outcome_probabilities(prefix, subsystem)
    suffix = script.steps[split + 1:]
    branches = []
    for outcome, weight in enumerate(probabilities):
        if weight <= 0.0:
            branches.append(_Branch(f"{subsystem}={outcome}", 0.0, prefix, 0.0, np.zeros(len(labels))))
            continue
        branch_state = evolve(suffix, project(prefix, subsystem, outcome))
        branches.append(finish(f"{subsystem}={outcome}", float(weight), branch_state))
    return _Plan(tuple(branches), labels, sub.dims)


def _sample_chunk(plan: _Plan, master_seed: int, indices: range) -> Tuple[np.ndarray, np.ndarray]:
    weights = plan.weights
    outcomes = np.empty(len(indices), dtype=np.int64)
    readouts = np.empty(len(indices), dtype=np.int64)
    for j, index in enumerate(indices):
        rng = trajectory_rng(master_seed, index)
        k = sample_outcome(weights, rng) if len(weights) > 1 else 0
        outcomes[j] = k
        readouts[j] = sample_outcome(plan.branches[k].readout_probabilities, rng)
    return outcomes, readouts


def _chunks(n: int, workers: int) -> List[range]:
    size = max(1, math.ceil(n / (max(workers, 1) * 4)))
    return [range(start, min(start + size, n)) for start in range(0, n, size)]


def _sample(
    plan: _Plan,
    n: int,
    master_seed: int,
    workers: int = 1,
    on_event: Optional[Callable[[BaseModel], None]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    chunks = _chunks(n, workers)
    results: List[Tuple[np.ndarray, np.ndarray]] = [None] * len(chunks)
    completed = 0

    def done(i: int, result) -> None:
        nonlocal completed
        results[i] = result
        completed += len(chunks[i])
        if on_event is not None:
            on_event(TrajectoryBatchEvent(completed=completed, total=n))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sample_chunk, plan, master_seed, chunk) for chunk in chunks]
            for i, future in enumerate(futures):
                done(i, future.result())
    else:
        for i, chunk in enumerate(chunks):
            done(i, _sample_chunk(plan, master_seed, chunk))

    outcomes = np.concatenate([r[0] for r in results])
    readouts = np.concatenate([r[1] for r in results])
    return outcomes, readouts


def _excited_frequencies(
    plan: _Plan, readout_table: np.ndarray, names: Sequence[str], total: float = 1.0
) -> Dict[str, float]:
    """P(register != 0) per readout register; with integer counts and ``total = n`` the result is exact."""
    table = readout_table.reshape(plan.readout_dims)
    freqs = {}
    for axis, name in enumerate(names):
        other = tuple(a for a in range(len(names)) if a != axis)
        marginal = table.sum(axis=other) if other else table
        freqs[name] = float(min(max((total - marginal[0]) / total, 0.0), 1.0))
    return freqs


def _binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n > 0 else 0.0


@log_execution_time("Trajectories")
def run_trajectories(
    script: ProtocolScript,
    model: DynamicsModel,
    n: int,
    master_seed: int,
    workers: int = 1,
    on_event: Optional[Callable[[BaseModel], None]] = None,
) -> BetReport:
    """
    Run ``n`` independent trajectories and aggregate their final readouts.

    Trajectory ``i`` draws from ``trajectory_rng(master_seed, i)``; results are
    aggregated in trajectory order, so the report is identical for any number
    of ``workers``.

    Raises:
        DynamicsError: ``n < 1`` or the model does not fit the script
    """
    if n < 1:
        raise DynamicsError(f"number of trajectories must be >= 1, got {n}")
    if workers < 1:
        raise DynamicsError(f"workers must be >= 1, got {workers}")

    plan = _plan(script, model)
    LoggingUtils.log_progress(
        "Trajectories", "Sampling {n} trajectories of {name} under {model} (seed {seed}, {workers} worker(s))",
        n=n, name=script.name, model=model.describe(), seed=master_seed, workers=workers,
    )
    outcomes, readouts = _sample(plan, n, master_seed, workers, on_event)

    names = script.readout or script.layout.names
    branch_counts = np.bincount(outcomes, minlength=len(plan.branches))
    readout_counts = np.bincount(readouts, minlength=len(plan.readout_labels))
    readout_freq = readout_counts / n

    fidelities = np.array([b.return_fidelity for b in plan.branches])
    mean_fidelity = float(np.dot(branch_counts, fidelities) / n)
    if np.count_nonzero(branch_counts) <= 1:
        # every trajectory ended in the same state
        mean_fidelity = float(fidelities[int(np.argmax(branch_counts))])
        fidelity_stderr = 0.0
    else:
        variance = float(np.dot(branch_counts, (fidelities - mean_fidelity) ** 2) / (n - 1))
        fidelity_stderr = math.sqrt(variance / n)

    excited = _excited_frequencies(plan, readout_counts, names, total=n)
    report = BetReport(
        model=model,
        script=script.name,
        script_signature=script.signature(),
        theta=script.theta,
        n_trajectories=n,
        master_seed=master_seed,
        exact=False,
        mean_return_fidelity=min(mean_fidelity, 1.0),
        return_fidelity_stderr=fidelity_stderr,
        freq_excited_final=excited,
        freq_excited_stderr={name: _binomial_stderr(p, n) for name, p in excited.items()},
        branch_counts={b.label: int(c) for b, c in zip(plan.branches, branch_counts)},
        branch_frequencies={b.label: float(c) / n for b, c in zip(plan.branches, branch_counts)},
        readout_counts={label: int(c) for label, c in zip(plan.readout_labels, readout_counts)},
        readout_frequencies={label: float(f) for label, f in zip(plan.readout_labels, readout_freq)},
    )
    LoggingUtils.log_success(
        "Trajectories", "{model}: mean return fidelity {fid:.6f} +/- {err:.6f}",
        model=model.describe(), fid=report.mean_return_fidelity, err=report.return_fidelity_stderr,
    )
    return report


def exact_bet_report(script: ProtocolScript, model: DynamicsModel) -> BetReport:
    """
    The infinite-trajectory limit of ``run_trajectories``, from Born weights.

    The report has ``n_trajectories = 0``, ``exact = True``, zero standard
    errors and empty count tables.
    """
    plan = _plan(script, model)
    weights = plan.weights
    names = script.readout or script.layout.names
    readout_prob = sum(w * b.readout_probabilities for w, b in zip(weights, plan.branches))
    mean_fidelity = float(sum(w * b.return_fidelity for w, b in zip(weights, plan.branches)))
    excited = _excited_frequencies(plan, readout_prob, names)
    return BetReport(
        model=model,
        script=script.name,
        script_signature=script.signature(),
        theta=script.theta,
        n_trajectories=0,
        master_seed=None,
        exact=True,
        mean_return_fidelity=min(mean_fidelity, 1.0),
        return_fidelity_stderr=0.0,
        freq_excited_final=excited,
        freq_excited_stderr={name: 0.0 for name in excited},
        branch_counts={},
        branch_frequencies={b.label: float(w) for b, w in zip(plan.branches, weights)},
        readout_counts={},
        readout_frequencies={label: float(p) for label, p in zip(plan.readout_labels, readout_prob)},
    )


def ensemble_density_matrix(
    script: ProtocolScript, model: DynamicsModel, n: int, master_seed: int, workers: int = 1
) -> DensityMatrix:
    """Average of |psi><psi| over the final states of ``n`` trajectories."""
    if n < 1:
        raise DynamicsError(f"number of trajectories must be >= 1, got {n}")
    plan = _plan(script, model)
    outcomes, _ = _sample(plan, n, master_seed, workers)
    counts = np.bincount(outcomes, minlength=len(plan.branches))
    dim = script.layout.total_dim
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for branch, count in zip(plan.branches, counts):
        if count:
            psi = branch.final_state.amplitudes
            rho += (count / n) * np.outer(psi, psi.conj())
    return DensityMatrix(script.layout, rho)


def _z_score(p_a: float, n_a: int, p_b: float, n_b: int) -> Optional[float]:
    if n_a < MIN_TRAJECTORIES_FOR_Z or n_b < MIN_TRAJECTORIES_FOR_Z:
        return None
    variance = p_a * (1.0 - p_a) / n_a + p_b * (1.0 - p_b) / n_b
    if variance <= 0.0:
        return None
    return (p_a - p_b) / math.sqrt(variance)


def _fidelity_z_score(report_a: BetReport, report_b: BetReport) -> Optional[float]:
    if min(report_a.n_trajectories, report_b.n_trajectories) < MIN_TRAJECTORIES_FOR_Z:
        return None
    variance = report_a.return_fidelity_stderr**2 + report_b.return_fidelity_stderr**2
    if variance <= 0.0:
        return None
    return (report_a.mean_return_fidelity - report_b.mean_return_fidelity) / math.sqrt(variance)


def _runs_to_settle(observable: ObservableComparison) -> int:
    spread = observable.p_a * (1.0 - observable.p_a) + observable.p_b * (1.0 - observable.p_b)
    # round before ceil so float noise never adds a run
    return max(1, math.ceil(round(SETTLE_SIGMA**2 * spread / observable.difference**2, 9)))


def distinguishing_power(report_a: BetReport, report_b: BetReport) -> DistinguishingPower:
    """
    Compare the final readouts and return fidelities of two reports on the same script.

    ``tv_distance`` is the total-variation distance between the joint readout
    tables. Each binary observable (a readout register found excited) gets its
    own difference and, for sampled reports with at least
    ``MIN_TRAJECTORIES_FOR_Z`` trajectories, a normal-approximation z-score.
    The mean return fidelity is compared the same way, with its z-score built
    from the reported standard errors.

    ``runs_to_settle`` is the smallest number of trajectories per model that
    separates one observable at three sigma. The return fidelity counts as
    the pass rate of a verification against the target state, so every
    observable is a pass/fail rate with spread p(1-p) per run. On a tie the
    readout registers win over the fidelity.

    Raises:
        DynamicsError: the reports describe different scripts or trajectory counts
    """
    if report_a.script_signature != report_b.script_signature:
        raise DynamicsError(
            f"reports describe different scripts ({report_a.script} theta={report_a.theta:.6g} "
            f"vs {report_b.script} theta={report_b.theta:.6g})"
        )
    if report_a.n_trajectories != report_b.n_trajectories:
        raise DynamicsError(
            f"reports have different trajectory counts ({report_a.n_trajectories} vs {report_b.n_trajectories})"
        )

    labels = sorted(set(report_a.readout_frequencies) | set(report_b.readout_frequencies))
    tv = 0.5 * sum(
        abs(report_a.readout_frequencies.get(x, 0.0) - report_b.readout_frequencies.get(x, 0.0)) for x in labels
    )

    n = report_a.n_trajectories
    observables = []
    for name in report_a.freq_excited_final:
        p_a = report_a.freq_excited_final[name]
        p_b = report_b.freq_excited_final.get(name, 0.0)
        observables.append(
            ObservableComparison(
                name=f"{name}_excited",
                p_a=p_a,
                p_b=p_b,
                difference=abs(p_a - p_b),
                z_score=_z_score(p_a, n, p_b, n),
            )
        )
    f_a, f_b = report_a.mean_return_fidelity, report_b.mean_return_fidelity
    observables.append(
        ObservableComparison(
            name=RETURN_FIDELITY,
            p_a=f_a,
            p_b=f_b,
            difference=abs(f_a - f_b),
            z_score=_fidelity_z_score(report_a, report_b),
        )
    )

    most, runs = None, None
    # differences within the norm tolerance are float noise
    separable = [o for o in observables if o.difference > Tolerances.NORM]
    if separable:
        best = min(separable, key=_runs_to_settle)
        most, runs = best.name, _runs_to_settle(best)

    return DistinguishingPower(
        tv_distance=float(min(max(tv, 0.0), 1.0)),
        observables=observables,
        most_discriminating=most,
        runs_to_settle=runs,
    )
