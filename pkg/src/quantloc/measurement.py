"""Observation pipeline: signals, one-bit quantization, distance estimation.

The received sample at sensor j is s_jk = p0 (d0 / D_j)^gamma + n_jk; the
sensor forwards u_jk = 1{s_jk > tau_j} (open at tau_j).  From the zero-bit
fraction xi the fusion center inverts the noise CDF to get the naive
maximum-likelihood distance estimate

    D_hat = d0 * p0^(1/gamma) * (tau_j - F_j^{-1}(xi))^(-1/gamma),

"naive" because it presumes no attack; under an attack shifting the
zero-probability to tp, the estimate converges to the same formula
evaluated at tp (``attacked_distance``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DomainError, EmptyData
from .rng import NOISE_STREAM, Entropy, make_generator
from .scenario import Point, ScenarioConfig

__all__ = [
    "QuantizedDataset",
    "EmpiricalFreq",
    "DistanceEstimate",
    "sample_signal",
    "quantize",
    "prob_zero",
    "empirical_freq",
    "nmle_distance",
    "attacked_distance",
]


@dataclass(frozen=True)
class EmpiricalFreq:
    """Zero-bit count over a K-bit record; xi = zeros / K exactly."""

    zeros: int
    k_samples: int

    def __post_init__(self) -> None:
        if self.k_samples < 1 or not (0 <= self.zeros <= self.k_samples):
            raise DomainError(
                f"bad empirical frequency: {self.zeros} zeros of {self.k_samples}"
            )

    @property
    def xi(self) -> float:
        return self.zeros / self.k_samples


@dataclass(frozen=True)
class QuantizedDataset:
    """Per-sensor bit records of common length K."""

    bits: Mapping[int, np.ndarray]
    k: int
    rng_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        for sid, arr in self.bits.items():
            if arr.shape != (self.k,):
                raise DomainError(
                    f"sensor {sid} record has length {arr.shape}, expected ({self.k},)"
                )

    def freq(self, sensor_id: int) -> EmpiricalFreq:
        arr = self.bits[sensor_id]
        return EmpiricalFreq(zeros=int(arr.size - arr.sum()), k_samples=arr.size)


def sample_signal(
    s: ScenarioConfig, j: int, k: int, seed: Entropy
) -> np.ndarray:
    """K raw samples at sensor j: signal mean plus i.i.d. noise.

    The noise stream is keyed by (seed..., NOISE_STREAM, j), so sensors are
    independent, a given (seed, j) always reproduces the same sequence, and
    shorter records are prefixes of longer ones.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    sensor = s.sensor(j)
    mean = s.signal_mean(j)
    entropy = (seed,) if isinstance(seed, int) else tuple(seed)
    rng = make_generator((*entropy, NOISE_STREAM, j))
    # Non-Gaussian models draw through their inverse CDF; the Gaussian path
    # stays on the native generator for speed.
    if sensor.noise.kind == "gaussian":
        noise = rng.standard_normal(k)
        return mean + sensor.noise.location + sensor.noise.scale * noise
    u = np.clip(rng.random(k), 1e-15, 1.0 - 1e-15)
    return mean + sensor.noise.inv_cdf(u)


def quantize(s: ScenarioConfig, j: int, samples: np.ndarray) -> np.ndarray:
    """One-bit quantizer: 1 when the sample exceeds the threshold.

    The comparison is strict, so a sample exactly at the threshold maps
    to 0.
    """
    tau = s.sensor(j).threshold
    return (np.asarray(samples) > tau).astype(np.uint8)


def prob_zero(s: ScenarioConfig, j: int, target: Point) -> float:
    """Probability of a zero bit at sensor j for the given target position."""
    if not s.roi.contains(target):
        warnings.warn(
            f"target {target} lies outside the ROI; probability bracket "
            "guarantees do not apply",
            stacklevel=2,
        )
    sensor = s.sensor(j)
    return float(sensor.noise.cdf(sensor.threshold - s.signal_mean(j, target)))


def empirical_freq(bits: np.ndarray) -> EmpiricalFreq:
    """Fraction of zero bits in a record."""
    arr = np.asarray(bits)
    if arr.size == 0:
        raise EmptyData("cannot form an empirical frequency from zero bits")
    return EmpiricalFreq(zeros=int(arr.size - arr.sum()), k_samples=int(arr.size))


@dataclass(frozen=True)
class DistanceEstimate:
    """A distance estimate plus whether the frequency had to be clamped."""

    value: float
    clamped: bool
    xi_used: float

    def __float__(self) -> float:
        return self.value


def _invert(s: ScenarioConfig, j: int, prob: float) -> float:
    sensor = s.sensor(j)
    base = sensor.threshold - sensor.noise.inv_cdf(prob)
    return s.d0 * (s.p0 / base) ** (1.0 / s.gamma)


def nmle_distance(
    s: ScenarioConfig,
    j: int,
    xi: EmpiricalFreq | float,
    k_samples: int | None = None,
    xi_min: float | None = None,
) -> DistanceEstimate:
    """Naive-MLE distance from a zero-bit frequency.

    The estimator is undefined at xi = 0 and xi >= F_j(tau_j), so xi is
    clamped into [xi_min, F_j(tau_j) - xi_min] first, with xi_min
    defaulting to 1/(2K) (a half count).  A record so short that the
    interval collapses (K = 1 with a low threshold, say) pins xi to
    F_j(tau_j)/2.  The clamp is reported, not raised: a clamped estimate is
    wildly wrong and drives the geometric test toward "attacked", which is
    the right failure mode.
    """
    if isinstance(xi, EmpiricalFreq):
        value, k_eff = xi.xi, xi.k_samples
    else:
        value, k_eff = float(xi), k_samples
    sensor = s.sensor(j)
    f_tau = float(sensor.noise.cdf(sensor.threshold))
    if xi_min is None:
        xi_min = 1.0 / (2.0 * k_eff) if k_eff else 1e-12
    lo, hi = xi_min, f_tau - xi_min
    if lo > hi:
        lo = hi = f_tau / 2.0
    clamped = not (lo <= value <= hi)
    used = min(max(value, lo), hi)
    return DistanceEstimate(value=_invert(s, j, used), clamped=clamped, xi_used=used)


def attacked_distance(s: ScenarioConfig, j: int, tp: float) -> float:
    """Asymptotic estimate when the zero-probability is shifted to tp.

    This is the no-clamp inversion; tp must lie strictly inside
    (0, F_j(tau_j)).
    """
    sensor = s.sensor(j)
    f_tau = float(sensor.noise.cdf(sensor.threshold))
    if not (0.0 < tp < f_tau):
        raise DomainError(
            f"shifted probability {tp} outside (0, {f_tau}) for sensor {j}"
        )
    return _invert(s, j, tp)
