"""Per-sensor attack detection by geometric consistency.

Each unsecure sensor j is declared unattacked (0) exactly when the circle
of radius D_hat_j around its position meets the intersection of the two
secure sensors' rings of half-width delta, restricted to the ROI side of
the secure line.  An attack that moves D_hat_j by more than the combined
slack pulls the circle clear of that region, flipping the decision to 1.

The module also carries the distortion floor lambda_j and the admissible
range of delta for which the floor provably exceeds the geometric slack.
Practical runs routinely use larger delta; exceeding the admissible value
therefore only triggers an advisory warning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .errors import AdvisoryWarning, DomainError, InvalidScenario, MissingSensorData
from .geometry import (
    ClippedCircle,
    HalfSpace,
    Ring,
    circle_meets_region_analytic,
    circle_meets_region_discretized,
)
from .measurement import DistanceEstimate, attacked_distance, nmle_distance
from .noise import NoiseModel
from .scenario import (
    ScenarioConfig,
    compute_distance_bounds,
    rho_bounds,
    roi_side,
)

__all__ = [
    "DEFAULT_M",
    "DetectorConfig",
    "SensorDecision",
    "DetectionReport",
    "detect_sensor",
    "detect_all",
    "detect_from_probabilities",
    "lambda_from",
    "lambda_j",
    "lambda_min",
    "delta_admissible",
    "delta_admissible_from",
]

DEFAULT_M = 200_000

METHODS = ("analytic", "discretized")


@dataclass(frozen=True)
class DetectorConfig:
    """Detection radius slack delta and the region-test method.

    The analytic method is exact; the discretized one probes m_points
    evenly spaced points on the sensor circle and is kept as the reference
    implementation for cross-validation.
    """

    delta: float
    method: str = "analytic"
    m_points: int = DEFAULT_M

    def __post_init__(self) -> None:
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be positive and finite, got {self.delta}")
        if self.method not in METHODS:
            raise DomainError(
                f"method must be one of {METHODS}, got {self.method!r}"
            )
        if self.m_points < 3:
            raise DomainError(f"m_points must be >= 3, got {self.m_points}")


@dataclass(frozen=True)
class SensorDecision:
    sensor_id: int
    decision: int
    d_hat: float
    clamped: bool


@dataclass(frozen=True)
class DetectionReport:
    """Decisions for every unsecure sensor plus the shared secure radii."""

    rows: tuple[SensorDecision, ...]
    secure_estimates: tuple[tuple[int, DistanceEstimate], ...]
    method: str
    delta: float
    k: int | None = None

    def decision_for(self, sensor_id: int) -> int:
        for row in self.rows:
            if row.sensor_id == sensor_id:
                return row.decision
        raise MissingSensorData(f"no decision for sensor {sensor_id}")

    @property
    def decisions(self) -> dict[int, int]:
        return {row.sensor_id: row.decision for row in self.rows}

    def to_table(self) -> str:
        lines = ["sensor_id\tdecision\tD_hat\tclamped\tmethod\tdelta"]
        for row in self.rows:
            lines.append(
                f"{row.sensor_id}\t{row.decision}\t{row.d_hat:.6f}"
                f"\t{int(row.clamped)}\t{self.method}\t{self.delta:g}"
            )
        return "\n".join(lines) + "\n"


def _secure_region(
    s: ScenarioConfig,
    cfg: DetectorConfig,
    secure_radii: tuple[float, float],
) -> tuple[HalfSpace, Ring, Ring]:
    s1, s2 = s.secure_pair()
    clip = HalfSpace(a=s1.position, b=s2.position, side=roi_side(s))
    ring1 = Ring(s1.position, secure_radii[0], cfg.delta, clip)
    ring2 = Ring(s2.position, secure_radii[1], cfg.delta, clip)
    return clip, ring1, ring2


def _decide(
    cfg: DetectorConfig, circle: ClippedCircle, ring1: Ring, ring2: Ring
) -> int:
    if cfg.method == "analytic":
        meets = circle_meets_region_analytic(circle, ring1, ring2)
    else:
        meets = circle_meets_region_discretized(circle, ring1, ring2, cfg.m_points)
    return 0 if meets else 1


def _estimate(s: ScenarioConfig, data, j: int) -> DistanceEstimate:
    try:
        freq = data.freq(j)
    except KeyError:
        raise MissingSensorData(f"dataset has no record for sensor {j}") from None
    return nmle_distance(s, j, freq)


def detect_sensor(s: ScenarioConfig, cfg: DetectorConfig, data, j: int) -> int:
    """Decision for one sensor: 0 unattacked, 1 attacked."""
    sensor = s.sensor(j)
    if sensor.secure:
        raise InvalidScenario(f"sensor {j} is secure and is never classified")
    s1, s2 = s.secure_pair()
    e1, e2 = _estimate(s, data, s1.id), _estimate(s, data, s2.id)
    clip, ring1, ring2 = _secure_region(s, cfg, (e1.value, e2.value))
    est = _estimate(s, data, j)
    circle = ClippedCircle(sensor.position, est.value, clip)
    return _decide(cfg, circle, ring1, ring2)


def detect_all(s: ScenarioConfig, cfg: DetectorConfig, data) -> DetectionReport:
    """Classify every unsecure sensor against the shared secure rings."""
    _warn_if_inadmissible(s, cfg.delta)
    s1, s2 = s.secure_pair()
    e1, e2 = _estimate(s, data, s1.id), _estimate(s, data, s2.id)
    clip, ring1, ring2 = _secure_region(s, cfg, (e1.value, e2.value))
    rows = []
    for sensor in s.unsecure():
        est = _estimate(s, data, sensor.id)
        circle = ClippedCircle(sensor.position, est.value, clip)
        decision = _decide(cfg, circle, ring1, ring2)
        rows.append(
            SensorDecision(sensor.id, decision, est.value, est.clamped)
        )
    return DetectionReport(
        rows=tuple(rows),
        secure_estimates=((s1.id, e1), (s2.id, e2)),
        method=cfg.method,
        delta=cfg.delta,
        k=getattr(data, "k", None),
    )


def detect_from_probabilities(
    s: ScenarioConfig, cfg: DetectorConfig, probs: Mapping[int, float]
) -> DetectionReport:
    """Infinite-K surrogate: feed exact zero-probabilities instead of data.

    Every sensor's radius is the no-noise inversion of its probability, so
    the report shows the detector's asymptotic verdicts.
    """
    s1, s2 = s.secure_pair()
    estimates = {}
    for sid in (s1.id, s2.id, *(sensor.id for sensor in s.unsecure())):
        if sid not in probs:
            raise MissingSensorData(f"no probability supplied for sensor {sid}")
        value = attacked_distance(s, sid, probs[sid])
        estimates[sid] = DistanceEstimate(value=value, clamped=False, xi_used=probs[sid])
    clip, ring1, ring2 = _secure_region(
        s, cfg, (estimates[s1.id].value, estimates[s2.id].value)
    )
    rows = []
    for sensor in s.unsecure():
        circle = ClippedCircle(sensor.position, estimates[sensor.id].value, clip)
        decision = _decide(cfg, circle, ring1, ring2)
        rows.append(
            SensorDecision(sensor.id, decision, estimates[sensor.id].value, False)
        )
    return DetectionReport(
        rows=tuple(rows),
        secure_estimates=((s1.id, estimates[s1.id]), (s2.id, estimates[s2.id])),
        method=cfg.method,
        delta=cfg.delta,
        k=None,
    )


# -- distortion floor and admissible delta ---------------------------------


def lambda_from(
    noise: NoiseModel,
    tau: float,
    p0: float,
    d0: float,
    gamma: float,
    kappa: float,
    rho_l: float,
    rho_u: float,
) -> float:
    """Distortion floor from explicit constants.

    lambda = kappa * d0 * p0^(1/gamma) * (tau - F^{-1}(rho_l))^(-(gamma+1)/gamma)
             / sup f over [F^{-1}(rho_l), F^{-1}(rho_u)].
    """
    if not (kappa > 0.0):
        raise DomainError(f"kappa must be positive, got {kappa}")
    if not (0.0 < rho_l < rho_u < 1.0):
        raise DomainError(f"need 0 < rho_l < rho_u < 1, got {rho_l}, {rho_u}")
    x_l = float(noise.inv_cdf(rho_l))
    x_u = float(noise.inv_cdf(rho_u))
    numerator = kappa * d0 * p0 ** (1.0 / gamma) * (tau - x_l) ** (
        -(gamma + 1.0) / gamma
    )
    sup_f = noise.density_extremum(x_l, x_u, "sup")
    return numerator / sup_f


def lambda_j(s: ScenarioConfig, j: int, kappa: float | None = None) -> float:
    """Guaranteed minimum shift of D_hat_j under an attack with |Psi| > kappa."""
    sensor = s.sensor(j)
    rho_l, rho_u = rho_bounds(s, j)
    return lambda_from(
        sensor.noise,
        sensor.threshold,
        s.p0,
        s.d0,
        s.gamma,
        s.kappa if kappa is None else kappa,
        rho_l,
        rho_u,
    )


def lambda_min(s: ScenarioConfig, kappa: float | None = None) -> float:
    """The network-wide floor: minimum of lambda_j over unsecure sensors."""
    return min(lambda_j(s, sensor.id, kappa) for sensor in s.unsecure())


def delta_admissible_from(
    d_upper: float, d_secure: float, upsilon: float, lam: float
) -> float:
    """Supremum of provably safe delta from explicit geometry constants."""
    bracket = math.sqrt(2.0 * d_upper + upsilon) * math.sqrt(
        (6.0 * d_upper + 3.0 * upsilon)
        / (2.0 * d_secure)
        * (upsilon / d_secure + 1.0)
        + 3.0
    ) + 0.5 * math.sqrt(upsilon)
    return min(upsilon, (lam / bracket) ** 2)


@lru_cache(maxsize=64)
def delta_admissible(s: ScenarioConfig, kappa: float | None = None) -> float:
    """Supremum of delta values for which detection is provably correct."""
    bounds = compute_distance_bounds(s)
    lam = lambda_min(s, kappa)
    return delta_admissible_from(bounds.d_upper, bounds.d_secure, s.upsilon, lam)


def _warn_if_inadmissible(s: ScenarioConfig, delta: float) -> None:
    try:
        limit = delta_admissible(s)
    except (DomainError, InvalidScenario):
        return
    if delta > limit:
        warnings.warn(
            f"delta = {delta:g} exceeds the provably safe limit {limit:.6g}; "
            "correctness guarantees no longer apply (detection may still work)",
            AdvisoryWarning,
            stacklevel=3,
        )
