"""Shared fixtures and the random-scenario factory.

``random_scenario`` draws a geometry that satisfies all three standing
assumptions by construction (anchors on the x axis, region well above the
line, small disc): the margins are generous enough that the occasional
resample loop is a formality.  Acceptance tests that need a thousand
scenarios call the factory directly with their own generator.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from quantloc import (
    GaussianNoise,
    Point,
    RoiDisc,
    ScenarioConfig,
    SensorSpec,
    validate_assumptions,
)


def random_scenario(
    rng: np.random.Generator,
    n_unsecure: int | None = None,
    gamma: float | None = None,
    kappa: float = 0.005,
) -> ScenarioConfig:
    """A scenario satisfying the standing assumptions, drawn from ``rng``."""
    for _ in range(50):
        d_s = 10.0 ** rng.uniform(1.5, 3.0)
        cy = rng.uniform(2.0, 5.0) * d_s
        cx = rng.uniform(-0.2, 0.2) * d_s
        radius = rng.uniform(0.02, 0.05) * cy
        upsilon = rng.uniform(0.02, 0.2) * radius
        n = int(n_unsecure if n_unsecure is not None else rng.integers(2, 7))
        g = float(gamma if gamma is not None else rng.uniform(1.5, 3.0))
        noise = GaussianNoise(0.0, 1.0)
        sensors = [
            SensorSpec(
                j + 1,
                Point(float(rng.uniform(-0.45, 0.45) * d_s), 0.0),
                1.0,
                noise,
            )
            for j in range(n)
        ]
        sensors.append(SensorSpec(n + 1, Point(-d_s / 2.0, 0.0), 1.0, noise, True))
        sensors.append(SensorSpec(n + 2, Point(d_s / 2.0, 0.0), 1.0, noise, True))
        r_t = radius * math.sqrt(rng.uniform(0.0, 1.0))
        phi = rng.uniform(0.0, 2.0 * math.pi)
        target = Point(cx + r_t * math.cos(phi), cy + r_t * math.sin(phi))
        scenario = ScenarioConfig(
            sensors=tuple(sensors),
            roi=RoiDisc(Point(cx, cy), radius),
            target=target,
            p0=1.0,
            d0=cy,
            gamma=g,
            upsilon1=upsilon,
            upsilon2=upsilon,
            kappa=kappa,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if validate_assumptions(scenario).all_satisfied:
                return scenario
    raise AssertionError("scenario sampler failed 50 times; margins miscalibrated")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260817)


@pytest.fixture
def toy_scenario() -> ScenarioConfig:
    """A small fixed geometry used across detector and analysis tests."""
    noise = GaussianNoise(0.0, 1.0)
    sensors = (
        SensorSpec(1, Point(-30.0, 0.0), 1.0, noise),
        SensorSpec(2, Point(30.0, 0.0), 1.0, noise),
        SensorSpec(3, Point(-100.0, 0.0), 1.0, noise, secure=True),
        SensorSpec(4, Point(100.0, 0.0), 1.0, noise, secure=True),
    )
    return ScenarioConfig(
        sensors=sensors,
        roi=RoiDisc(Point(0.0, 100.0), 5.0),
        target=Point(0.0, 100.0),
        p0=1.0,
        d0=100.0,
        gamma=2.0,
        upsilon1=20.0,
        upsilon2=20.0,
        kappa=1.0,
    )
