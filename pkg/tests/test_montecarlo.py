"""Monte Carlo harness: seeding contract, metrics, paired sweeps."""

import math
from dataclasses import replace

import numpy as np
import pytest

from quantloc import (
    AttackAssignment,
    DetectorConfig,
    DomainError,
    ExperimentPlan,
    InvalidScenario,
    Mima,
    PsiOffset,
    SpoofBias,
    composite_exponents,
    estimate_error_probs,
    generate_dataset,
    no_attacks,
    post_attack_prob,
    prob_zero,
    run_trial,
    sweep_K,
    sweep_delta,
)


def _plan(s, assignment, **kw):
    defaults = dict(
        scenario=s,
        assignment=assignment,
        detector=DetectorConfig(delta=5.0),
        k_grid=(200, 400),
        trials=10,
        base_seed=0,
        threads=1,
    )
    defaults.update(kw)
    return ExperimentPlan(**defaults)


def test_plan_validation(toy_scenario):
    s = toy_scenario
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), k_grid=())
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), k_grid=(0, 10))
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), k_grid=(400, 200))
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), k_grid=(200, 200))
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), trials=0)
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), scale_factor=0.0)
    with pytest.raises(DomainError):
        _plan(s, no_attacks(), threads=-1)
    with pytest.raises(InvalidScenario):
        _plan(s, AttackAssignment(specs={3: Mima(0.0, 0.1)}))


def test_generate_dataset_deterministic(toy_scenario):
    s = toy_scenario
    a = generate_dataset(s, no_attacks(), 1000, base_seed=5, trial_index=2)
    b = generate_dataset(s, no_attacks(), 1000, base_seed=5, trial_index=2)
    c = generate_dataset(s, no_attacks(), 1000, base_seed=5, trial_index=3)
    assert set(a.bits) == {1, 2, 3, 4}
    assert a.k == 1000
    for j in a.bits:
        np.testing.assert_array_equal(a.bits[j], b.bits[j])
    assert any(not np.array_equal(a.bits[j], c.bits[j]) for j in a.bits)


def test_generate_dataset_prefix_property(toy_scenario):
    s = toy_scenario
    assignment = AttackAssignment(specs={1: Mima(0.1, 0.2)})
    short = generate_dataset(s, assignment, 500, base_seed=7, trial_index=0)
    long = generate_dataset(s, assignment, 1000, base_seed=7, trial_index=0)
    for j in long.bits:
        np.testing.assert_array_equal(long.bits[j][:500], short.bits[j])


def test_probability_offset_realized_exactly(toy_scenario):
    s = toy_scenario
    p = prob_zero(s, 1, s.target)
    all_ones = generate_dataset(
        s, AttackAssignment(specs={1: PsiOffset(-p)}), 400, base_seed=1, trial_index=0
    )
    assert all_ones.bits[1].min() == 1  # zero-probability shifted to exactly 0
    all_zeros = generate_dataset(
        s,
        AttackAssignment(specs={1: PsiOffset(1.0 - p)}),
        400,
        base_seed=1,
        trial_index=0,
    )
    assert all_zeros.bits[1].max() == 0


@pytest.mark.parametrize(
    "spec",
    [Mima(0.1, 0.2), PsiOffset(0.1), SpoofBias(0.5)],
    ids=["flip", "offset", "spoof"],
)
def test_attack_routes_hit_their_target_probability(toy_scenario, spec):
    s = toy_scenario
    k = 100_000
    p = prob_zero(s, 1, s.target)
    tp = post_attack_prob(spec, p, noise=s.sensor(1).noise)
    data = generate_dataset(
        s, AttackAssignment(specs={1: spec}), k, base_seed=3, trial_index=0
    )
    xi = data.freq(1).xi
    assert xi == pytest.approx(tp, abs=4.0 * math.sqrt(tp * (1.0 - tp) / k))
    # the unattacked sensor is untouched
    xi_clean = data.freq(2).xi
    assert xi_clean == pytest.approx(p, abs=4.0 * math.sqrt(p * (1.0 - p) / k))


def test_run_trial_reports_k(toy_scenario):
    plan = _plan(toy_scenario, no_attacks())
    report = run_trial(plan, 400, trial_index=0)
    assert report.k == 400
    assert set(report.decisions) == {1, 2}


def test_parallel_equals_serial(toy_scenario):
    assignment = AttackAssignment(specs={1: Mima(0.0, 0.2)})
    serial = estimate_error_probs(_plan(toy_scenario, assignment, threads=1))
    parallel = estimate_error_probs(_plan(toy_scenario, assignment, threads=4))
    assert serial.rows == parallel.rows


def test_sweep_delta_validation(toy_scenario):
    plan = _plan(toy_scenario, no_attacks())
    with pytest.raises(DomainError):
        sweep_delta(plan, [])
    from quantloc import GaussianNoise, Point, RoiDisc, ScenarioConfig, SensorSpec

    noise = GaussianNoise()
    bare = ScenarioConfig(
        (
            SensorSpec(1, Point(-100.0, 0.0), 1.0, noise, secure=True),
            SensorSpec(2, Point(100.0, 0.0), 1.0, noise, secure=True),
        ),
        RoiDisc(Point(0.0, 100.0), 5.0),
        Point(0.0, 100.0),
        1.0,
        100.0,
        2.0,
    )
    with pytest.raises(DomainError):
        sweep_delta(_plan(bare, no_attacks()), [5.0])


def test_metrics_rows_and_rendering(toy_scenario):
    metrics = estimate_error_probs(_plan(toy_scenario, no_attacks()))
    row = metrics.row_for(200)
    assert row.k == 200 and row.delta == 5.0
    assert row.trials == 10
    # no attacked sensors: the miss class is empty, not zero
    assert row.miss_hat is None and row.miss_se is None
    assert row.miss_bound is None
    assert row.fa_hat == row.fa_count / (10 * 2)
    if 0.0 < row.fa_hat < 1.0:
        assert row.fa_se == pytest.approx(
            math.sqrt(row.fa_hat * (1.0 - row.fa_hat) / 20.0)
        )
    table = metrics.to_table()
    assert table.startswith("K\tdelta\tfa_hat")
    assert "\tnan\t" in table
    assert len(table.strip().split("\n")) == 3
    with pytest.raises(KeyError):
        metrics.row_for(999)


def test_bound_columns_come_from_composite_exponents(toy_scenario):
    assignment = AttackAssignment(specs={1: Mima(0.0, 0.2)})
    plan = _plan(toy_scenario, assignment)
    metrics = estimate_error_probs(plan)
    report = composite_exponents(
        toy_scenario, assignment, plan.detector, plan.params
    )
    for row in metrics.rows:
        assert row.fa_bound == report.fa_bound(row.k)
        assert row.miss_bound == report.miss_bound(row.k)
        assert row.pe_bound == report.err_bound(row.k)


def test_sweep_delta_counts_are_monotone_in_delta(toy_scenario):
    assignment = AttackAssignment(specs={1: Mima(0.0, 0.2)})
    plan = _plan(
        toy_scenario, assignment, k_grid=(500, 2000), trials=40,
        detector=DetectorConfig(delta=2.0),
    )
    deltas = [2.0, 5.0, 9.0]
    out = sweep_delta(plan, deltas)
    assert set(out) == set(deltas)
    for k in plan.k_grid:
        fa = [out[d].row_for(k).fa_count for d in deltas]
        miss = [out[d].row_for(k).miss_count for d in deltas]
        # growing the detection region can only clear alarms and add misses
        assert fa == sorted(fa, reverse=True)
        assert miss == sorted(miss)


def test_estimate_matches_single_delta_sweep(toy_scenario):
    plan = _plan(toy_scenario, no_attacks())
    direct = estimate_error_probs(plan)
    swept = sweep_delta(plan, [plan.detector.delta])[plan.detector.delta]
    assert direct.rows == swept.rows


def test_sweep_K_slope_negative_when_errors_decay(toy_scenario):
    plan = _plan(
        toy_scenario,
        no_attacks(),
        detector=DetectorConfig(delta=2.0),
        k_grid=(500, 2000, 8000),
        trials=60,
    )
    metrics = sweep_K(plan)
    errs = [r.avg_err for r in metrics.rows]
    assert errs[0] > errs[-1]
    assert metrics.slope is not None and metrics.slope < 0.0


def test_sweep_K_slope_none_without_positive_errors(toy_scenario):
    # a gross attack at large delta: every trial detects it, no errors remain
    assignment = AttackAssignment(specs={1: PsiOffset(0.2), 2: PsiOffset(0.2)})
    plan = _plan(
        toy_scenario,
        assignment,
        detector=DetectorConfig(delta=5.0),
        k_grid=(5000, 10000),
        trials=5,
    )
    metrics = sweep_K(plan)
    assert all(r.avg_err == 0.0 for r in metrics.rows)
    assert metrics.slope is None
