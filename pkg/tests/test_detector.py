"""Geometric consistency detector, distortion floor, admissible slack."""

import math
import warnings

import numpy as np
import pytest

from quantloc import (
    AdvisoryWarning,
    AttackAssignment,
    DetectorConfig,
    DomainError,
    InvalidScenario,
    Mima,
    MissingSensorData,
    attacked_distance,
    compute_distance_bounds,
    delta_admissible,
    delta_admissible_from,
    detect_all,
    detect_from_probabilities,
    detect_sensor,
    distance,
    generate_dataset,
    lambda_from,
    lambda_j,
    lambda_min,
    no_attacks,
    prob_zero,
    rho_bounds,
    standard_gaussian,
)

from conftest import random_scenario

LAMBDA_REF = 443.113462726379006824
DELTA_ADM_REF = 0.719879152998594382290
PHI_M1 = 0.158655253931457051414


def test_detector_config_validation():
    cfg = DetectorConfig(delta=1.0)
    assert cfg.method == "analytic" and cfg.m_points == 200_000
    for bad_delta in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            DetectorConfig(delta=bad_delta)
    with pytest.raises(DomainError):
        DetectorConfig(delta=1.0, method="fast")
    with pytest.raises(DomainError):
        DetectorConfig(delta=1.0, m_points=2)


def _exact_probs(s):
    ids = [x.id for x in s.sensors]
    return {j: prob_zero(s, j, s.target) for j in ids}


def test_exact_feed_clean_probabilities(toy_scenario):
    s = toy_scenario
    cfg = DetectorConfig(delta=5.0)
    report = detect_from_probabilities(s, cfg, _exact_probs(s))
    assert report.decisions == {1: 0, 2: 0}
    assert report.k is None
    d_true = distance(s.sensor(3).position, s.target)
    for sid, est in report.secure_estimates:
        assert est.value == pytest.approx(d_true, rel=1e-9)
        assert not est.clamped
    # the discretized method agrees on this feed
    report_d = detect_from_probabilities(
        s, DetectorConfig(delta=5.0, method="discretized", m_points=50_000),
        _exact_probs(s),
    )
    assert report_d.decisions == report.decisions


def test_exact_feed_flags_shifted_sensor(toy_scenario):
    s = toy_scenario
    probs = _exact_probs(s)
    probs[1] += 0.2
    report = detect_from_probabilities(s, DetectorConfig(delta=5.0), probs)
    assert report.decisions == {1: 1, 2: 0}
    assert report.decision_for(1) == 1
    with pytest.raises(MissingSensorData):
        report.decision_for(3)


def test_exact_feed_requires_all_probabilities(toy_scenario):
    probs = _exact_probs(toy_scenario)
    del probs[4]
    with pytest.raises(MissingSensorData):
        detect_from_probabilities(toy_scenario, DetectorConfig(delta=5.0), probs)


def test_detect_sensor_rejects_secure_targets(toy_scenario):
    data = generate_dataset(toy_scenario, no_attacks(), 1000, base_seed=0, trial_index=0)
    with pytest.raises(InvalidScenario):
        detect_sensor(toy_scenario, DetectorConfig(delta=5.0), data, 3)


def test_detect_all_on_clean_data(toy_scenario):
    s = toy_scenario
    data = generate_dataset(s, no_attacks(), 200_000, base_seed=1, trial_index=0)
    cfg = DetectorConfig(delta=5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", AdvisoryWarning)
        report = detect_all(s, cfg, data)
    assert [row.sensor_id for row in report.rows] == [1, 2]
    assert report.decisions == {1: 0, 2: 0}
    assert report.k == 200_000
    for j in (1, 2):
        assert report.decision_for(j) == detect_sensor(s, cfg, data, j)
    table = report.to_table()
    lines = table.strip().split("\n")
    assert lines[0] == "sensor_id\tdecision\tD_hat\tclamped\tmethod\tdelta"
    assert len(lines) == 3
    assert lines[1].endswith("analytic\t5")


def test_detect_all_flags_attacked_sensor(toy_scenario):
    s = toy_scenario
    assignment = AttackAssignment(specs={1: Mima(0.0, 0.2)})
    data = generate_dataset(s, assignment, 200_000, base_seed=1, trial_index=0)
    report = detect_all(s, DetectorConfig(delta=5.0), data)
    assert report.decisions == {1: 1, 2: 0}


def test_advisory_warning_above_admissible_delta(toy_scenario):
    s = toy_scenario
    data = generate_dataset(s, no_attacks(), 10_000, base_seed=2, trial_index=0)
    limit = delta_admissible(s)
    assert limit == pytest.approx(20.0)  # capped by upsilon here
    with pytest.warns(AdvisoryWarning):
        detect_all(s, DetectorConfig(delta=limit * 1.25), data)


def test_lambda_from_frozen_value():
    lam = lambda_from(
        standard_gaussian(),
        tau=1.0,
        p0=1.0,
        d0=1e5,
        gamma=2.0,
        kappa=0.005,
        rho_l=PHI_M1,
        rho_u=0.5,
    )
    assert lam == pytest.approx(LAMBDA_REF, rel=1e-14)
    with pytest.raises(DomainError):
        lambda_from(
            standard_gaussian(), 1.0, 1.0, 1e5, 2.0, 0.0, PHI_M1, 0.5
        )
    with pytest.raises(DomainError):
        lambda_from(
            standard_gaussian(), 1.0, 1.0, 1e5, 2.0, 0.005, 0.5, PHI_M1
        )


def test_lambda_j_scales_with_kappa(toy_scenario):
    s = toy_scenario
    base = lambda_j(s, 1)
    assert lambda_j(s, 1, kappa=2.0 * s.kappa) == pytest.approx(2.0 * base)
    assert lambda_min(s) == pytest.approx(min(lambda_j(s, 1), lambda_j(s, 2)))


def test_delta_admissible_from_frozen_value():
    assert delta_admissible_from(3.0, 10.0, 1.0, 5.0) == pytest.approx(
        DELTA_ADM_REF, rel=1e-14
    )
    # a huge floor saturates at upsilon
    assert delta_admissible_from(3.0, 10.0, 1.0, 1e9) == 1.0


def test_delta_admissible_tracks_kappa(toy_scenario):
    s = toy_scenario
    small = delta_admissible(s, kappa=0.05)
    bounds = compute_distance_bounds(s)
    expected = delta_admissible_from(
        bounds.d_upper, bounds.d_secure, s.upsilon, lambda_min(s, 0.05)
    )
    assert small == pytest.approx(expected)
    assert small < delta_admissible(s)


def _directional_margins(s, j):
    sensor = s.sensor(j)
    p = float(sensor.noise.cdf(sensor.threshold - s.signal_mean(j)))
    rho_l, rho_u = rho_bounds(s, j)
    return p, (rho_u - p), (p - rho_l)


def test_distortion_floor_linear_attenuation(rng):
    """With gamma = 1 a significant shift moves D_hat by at least lambda."""
    for _ in range(10):
        s = random_scenario(rng, gamma=1.0)
        j = s.unsecure()[0].id
        p, up, down = _directional_margins(s, j)
        d_true = distance(s.sensor(j).position, s.target)
        for sign, room in ((1.0, up), (-1.0, down)):
            if room < 1e-4:
                continue
            psi = 0.9 * room
            shifted = attacked_distance(s, j, p + sign * psi)
            floor = lambda_j(s, j, kappa=psi / 1.2)
            assert abs(shifted - d_true) >= floor * (1.0 - 1e-9)


def test_distortion_floor_general_attenuation(rng):
    """For general gamma the guaranteed shift carries a 1/gamma factor."""
    for _ in range(20):
        s = random_scenario(rng)
        j = s.unsecure()[0].id
        p, up, down = _directional_margins(s, j)
        d_true = distance(s.sensor(j).position, s.target)
        for sign, room in ((1.0, up), (-1.0, down)):
            if room < 1e-4:
                continue
            psi = 0.9 * room
            shifted = attacked_distance(s, j, p + sign * psi)
            kappa = psi / 1.2
            floor = lambda_j(s, j, kappa=kappa)
            assert abs(shifted - d_true) >= (
                (psi / kappa) * floor / s.gamma
            ) * (1.0 - 1e-9)
            # a shift clearing gamma * kappa attains the plain floor
            kappa2 = psi / (1.05 * s.gamma)
            floor2 = lambda_j(s, j, kappa=kappa2)
            assert abs(shifted - d_true) >= floor2 * (1.0 - 1e-9)
