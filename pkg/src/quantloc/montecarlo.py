"""Reproducible Monte Carlo estimation of detector error probabilities.

Seeding convention: every random stream is keyed by the tuple
(base_seed, trial_index, stream, sensor_id), where stream 0 is measurement
noise and stream 1 is attack randomness.  Neither K nor delta enters the
key, which buys two properties at once: a shorter record is a prefix of a
longer one from the same trial, and runs that differ only in delta (or in
a bit-domain attack parameter) see common random numbers, so sweep
comparisons are paired rather than independent.

Trials are independent cells; parallel execution partitions them across a
thread pool and aggregates integer counts, so serial and parallel runs of
the same plan produce identical metrics.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .analysis import ExponentParams, RateReport, composite_exponents
from .attacks import AttackAssignment, Mima, PsiOffset, SpoofBias, apply_attack, post_attack_prob
from .detector import DetectorConfig, detect_all
from .errors import DomainError
from .measurement import QuantizedDataset, sample_signal
from .rng import ATTACK_STREAM
from .scenario import ScenarioConfig

__all__ = [
    "ExperimentPlan",
    "MetricsRow",
    "Metrics",
    "generate_dataset",
    "run_trial",
    "estimate_error_probs",
    "sweep_K",
    "sweep_delta",
]


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything a Monte Carlo run depends on, immutably."""

    scenario: ScenarioConfig
    assignment: AttackAssignment
    detector: DetectorConfig
    k_grid: tuple[int, ...]
    trials: int
    base_seed: int
    scale_factor: float = 1.0
    threads: int = 0
    params: ExponentParams = field(default_factory=ExponentParams)

    def __post_init__(self) -> None:
        if not self.k_grid:
            raise DomainError("k_grid must be nonempty")
        if any(k < 1 for k in self.k_grid):
            raise DomainError(f"k_grid entries must be >= 1, got {self.k_grid}")
        if list(self.k_grid) != sorted(self.k_grid) or len(set(self.k_grid)) != len(
            self.k_grid
        ):
            raise DomainError(f"k_grid must be strictly ascending, got {self.k_grid}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if not (self.scale_factor > 0.0):
            raise DomainError(f"scale_factor must be positive, got {self.scale_factor}")
        if self.threads < 0:
            raise DomainError(f"threads must be >= 0, got {self.threads}")
        self.assignment.validate_against(self.scenario)


def generate_dataset(
    scenario: ScenarioConfig,
    assignment: AttackAssignment,
    k: int,
    base_seed: int,
    trial_index: int,
) -> QuantizedDataset:
    """One trial's post-attack bit records for every sensor.

    Bit-domain attacks run the clean bits through the flip channel on the
    attack stream.  Probability offsets are realized exactly by moving the
    quantizer threshold to the value whose zero-probability is p + Psi, so
    the same noise draws serve every offset.  Spoofing adds its bias to
    the raw samples before quantization.
    """
    bits: dict[int, np.ndarray] = {}
    for sensor in scenario.sensors:
        j = sensor.id
        spec = assignment.spec_for(j)
        samples = sample_signal(scenario, j, k, (base_seed, trial_index))
        if isinstance(spec, SpoofBias):
            samples = samples + spec.bias
        if isinstance(spec, PsiOffset):
            p = float(
                sensor.noise.cdf(sensor.threshold - scenario.signal_mean(j))
            )
            tp = post_attack_prob(spec, p)
            if tp <= 0.0:
                record = np.ones(k, dtype=np.uint8)
            elif tp >= 1.0:
                record = np.zeros(k, dtype=np.uint8)
            else:
                tau_eff = scenario.signal_mean(j) + float(sensor.noise.inv_cdf(tp))
                record = (samples > tau_eff).astype(np.uint8)
        else:
            record = (samples > sensor.threshold).astype(np.uint8)
        if isinstance(spec, Mima):
            record = apply_attack(
                spec, record, (base_seed, trial_index, ATTACK_STREAM, j)
            )
        bits[j] = record
    return QuantizedDataset(bits=bits, k=k, rng_seed=base_seed, trial_index=trial_index)


def run_trial(plan: ExperimentPlan, k: int, trial_index: int):
    """Generate one trial's data and classify every unsecure sensor."""
    data = generate_dataset(
        plan.scenario, plan.assignment, k, plan.base_seed, trial_index
    )
    return detect_all(plan.scenario, plan.detector, data)


@dataclass(frozen=True)
class MetricsRow:
    """Empirical error rates and bound overlays at one (K, delta) point.

    Rates for an empty class (no attacked sensors, say) are None rather
    than zero; the standard errors use the binomial formula over
    trials x class-size effective cells.
    """

    k: int
    delta: float
    fa_hat: float | None
    fa_se: float | None
    miss_hat: float | None
    miss_se: float | None
    avg_err: float
    avg_err_se: float
    fa_bound: float
    miss_bound: float | None
    pe_bound: float
    fa_count: int
    miss_count: int
    trials: int


def _fmt_opt(value: float | None) -> str:
    return "nan" if value is None else f"{value:.6e}"


@dataclass(frozen=True)
class Metrics:
    """Rows over the K grid, plus the fitted decay slope when requested."""

    rows: tuple[MetricsRow, ...]
    slope: float | None = None

    HEADER = (
        "K\tdelta\tfa_hat\tfa_se\tmiss_hat\tmiss_se\tavg_err\tavg_err_se"
        "\tfa_bound\tmiss_bound\tpe_bound"
    )

    def to_table(self) -> str:
        lines = [self.HEADER]
        for r in self.rows:
            lines.append(
                "\t".join(
                    [
                        str(r.k),
                        f"{r.delta:g}",
                        _fmt_opt(r.fa_hat),
                        _fmt_opt(r.fa_se),
                        _fmt_opt(r.miss_hat),
                        _fmt_opt(r.miss_se),
                        f"{r.avg_err:.6e}",
                        f"{r.avg_err_se:.6e}",
                        f"{r.fa_bound:.6e}",
                        _fmt_opt(r.miss_bound),
                        f"{r.pe_bound:.6e}",
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def row_for(self, k: int, delta: float | None = None) -> MetricsRow:
        for r in self.rows:
            if r.k == k and (delta is None or r.delta == delta):
                return r
        raise KeyError(f"no metrics row for K={k}, delta={delta}")


def _rate_and_se(count: int, cells: int) -> tuple[float | None, float | None]:
    if cells == 0:
        return None, None
    p_hat = count / cells
    return p_hat, math.sqrt(p_hat * (1.0 - p_hat) / cells)


@dataclass
class _CellCounts:
    """Mutable per-(delta, K) accumulator; integers keep aggregation exact."""

    fa_count: int = 0
    miss_count: int = 0
    err_count: int = 0

    def absorb(self, other: "_CellCounts") -> None:
        self.fa_count += other.fa_count
        self.miss_count += other.miss_count
        self.err_count += other.err_count


def _count_trial(
    plan: ExperimentPlan,
    deltas: Sequence[float],
    k: int,
    trial_index: int,
    attacked: frozenset[int],
) -> list[_CellCounts]:
    data = generate_dataset(
        plan.scenario, plan.assignment, k, plan.base_seed, trial_index
    )
    out = []
    for delta in deltas:
        cfg = replace(plan.detector, delta=delta)
        report = detect_all(plan.scenario, cfg, data)
        counts = _CellCounts()
        for row in report.rows:
            if row.sensor_id in attacked:
                counts.miss_count += 1 - row.decision
            else:
                counts.fa_count += row.decision
        counts.err_count = counts.fa_count + counts.miss_count
        out.append(counts)
    return out


def _threads(plan: ExperimentPlan) -> int:
    if plan.threads > 0:
        return plan.threads
    return min(32, os.cpu_count() or 1)


def sweep_delta(plan: ExperimentPlan, deltas: Sequence[float]) -> dict[float, Metrics]:
    """Metrics for several detection radii off one shared set of datasets.

    Every delta sees the identical trial data (the seed key excludes
    delta), so differences between the returned curves are paired
    comparisons, free of re-sampling noise.
    """
    if not deltas:
        raise DomainError("need at least one delta")
    scenario, assignment = plan.scenario, plan.assignment
    attacked = frozenset(assignment.attacked_ids())
    unsecure = [sensor.id for sensor in scenario.unsecure()]
    n_total = len(unsecure)
    if n_total == 0:
        raise DomainError("scenario has no unsecure sensors to classify")
    n_attacked = len(attacked)
    n_unattacked = n_total - n_attacked

    reports: dict[float, RateReport] = {}
    for delta in deltas:
        cfg = replace(plan.detector, delta=delta)
        reports[delta] = composite_exponents(scenario, assignment, cfg, plan.params)

    totals: dict[tuple[float, int], _CellCounts] = {
        (delta, k): _CellCounts() for delta in deltas for k in plan.k_grid
    }

    def run_cell(args: tuple[int, int]) -> tuple[int, list[_CellCounts]]:
        k, trial = args
        return k, _count_trial(plan, deltas, k, trial, attacked)

    cells = [(k, trial) for k in plan.k_grid for trial in range(plan.trials)]
    workers = _threads(plan)
    if workers == 1:
        results = map(run_cell, cells)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        try:
            results = list(pool.map(run_cell, cells))
        finally:
            pool.shutdown()
    for k, per_delta in results:
        for delta, counts in zip(deltas, per_delta):
            totals[(delta, k)].absorb(counts)

    out: dict[float, Metrics] = {}
    for delta in deltas:
        rows = []
        for k in plan.k_grid:
            counts = totals[(delta, k)]
            fa_hat, fa_se = _rate_and_se(
                counts.fa_count, plan.trials * n_unattacked
            )
            miss_hat, miss_se = _rate_and_se(
                counts.miss_count, plan.trials * n_attacked
            )
            avg_err, avg_err_se = _rate_and_se(
                counts.err_count, plan.trials * n_total
            )
            report = reports[delta]
            rows.append(
                MetricsRow(
                    k=k,
                    delta=delta,
                    fa_hat=fa_hat,
                    fa_se=fa_se,
                    miss_hat=miss_hat,
                    miss_se=miss_se,
                    avg_err=avg_err,
                    avg_err_se=avg_err_se,
                    fa_bound=report.fa_bound(k),
                    miss_bound=report.miss_bound(k),
                    pe_bound=report.err_bound(k),
                    fa_count=counts.fa_count,
                    miss_count=counts.miss_count,
                    trials=plan.trials,
                )
            )
        out[delta] = Metrics(rows=tuple(rows))
    return out


def estimate_error_probs(plan: ExperimentPlan) -> Metrics:
    """Empirical false-alarm, miss, and average error rates over the K grid."""
    return sweep_delta(plan, [plan.detector.delta])[plan.detector.delta]


def _fit_slope(rows: tuple[MetricsRow, ...]) -> float | None:
    points = [(r.k, r.avg_err) for r in rows if r.avg_err > 0.0]
    if len(points) < 2:
        return None
    ks = np.array([p[0] for p in points], dtype=float)
    logs = np.log([p[1] for p in points])
    return float(np.polyfit(ks, logs, 1)[0])


def sweep_K(plan: ExperimentPlan) -> Metrics:
    """estimate_error_probs plus the fitted slope of ln(avg_err) versus K."""
    metrics = estimate_error_probs(plan)
    return Metrics(rows=metrics.rows, slope=_fit_slope(metrics.rows))
