"""World description: sensors, secure pair, region of interest, constants.

A scenario fixes everything the fusion center knows a priori: sensor
positions and thresholds, the two tamper-proof anchor sensors, the disc the
target is known to inhabit, and the attenuation constants.  From these it
derives the distance bracket [D_L, D_U] valid for every sensor and every
target position in the region, the matching zero-bit probability bracket
[rho_L, rho_U], and a diagnostic report on the standing geometric
assumptions the performance guarantees rest on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import AssumptionWarning, DomainError, InvalidScenario
from .noise import NoiseModel

__all__ = [
    "Point",
    "SensorSpec",
    "RoiDisc",
    "ScenarioConfig",
    "DistanceBounds",
    "AssumptionReport",
    "distance",
    "compute_distance_bounds",
    "rho_bounds",
    "validate_assumptions",
    "roi_side",
]

# Boundary sample count for the two-focus infimum in assumption (b).
TWO_FOCUS_BOUNDARY_POINTS = 10_000


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"point coordinates must be finite, got {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class SensorSpec:
    """One sensor: position, quantizer threshold, noise law, secure flag."""

    id: int
    position: Point
    threshold: float
    noise: NoiseModel
    secure: bool = False


@dataclass(frozen=True)
class RoiDisc:
    """The disc known to contain the target."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"ROI radius must be positive, got {self.radius}")

    def contains(self, p: Point) -> bool:
        return distance(self.center, p) <= self.radius


@dataclass(frozen=True)
class DistanceBounds:
    """Distance bracket over the region plus the anchor separation.

    d_lower/d_upper bound the sensor-target distance for every sensor and
    every target position in the region; d_secure is the distance between
    the two secure sensors.  A plain record: operations that consume it
    enforce the 0 < d_lower < d_upper ordering themselves.
    """

    d_lower: float
    d_upper: float
    d_secure: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Full world description.

    p0 is the emitted power at reference distance d0, gamma the path-loss
    exponent.  upsilon1/upsilon2 are the separation margins in the standing
    assumptions; kappa is the minimum probability distortion that counts as
    a significant attack.
    """

    sensors: tuple[SensorSpec, ...]
    roi: RoiDisc
    target: Point
    p0: float
    d0: float
    gamma: float
    upsilon1: float = 1.0
    upsilon2: float = 1.0
    kappa: float = 0.005

    def __post_init__(self) -> None:
        object.__setattr__(self, "sensors", tuple(self.sensors))
        secure = [s for s in self.sensors if s.secure]
        if len(secure) != 2:
            raise InvalidScenario(
                f"exactly two sensors must be secure, found {len(secure)}"
            )
        ids = [s.id for s in self.sensors]
        if len(set(ids)) != len(ids):
            raise InvalidScenario("sensor ids must be unique")
        for name in ("p0", "d0", "gamma", "upsilon1", "upsilon2", "kappa"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise InvalidScenario(f"{name} must be positive and finite, got {v}")
        if not self.roi.contains(self.target):
            raise InvalidScenario("target must lie inside the ROI disc")

    # -- convenience accessors -------------------------------------------

    def sensor(self, sensor_id: int) -> SensorSpec:
        for s in self.sensors:
            if s.id == sensor_id:
                return s
        raise KeyError(f"no sensor with id {sensor_id}")

    def secure_pair(self) -> tuple[SensorSpec, SensorSpec]:
        a, b = (s for s in self.sensors if s.secure)
        return (a, b) if a.id < b.id else (b, a)

    def unsecure(self) -> tuple[SensorSpec, ...]:
        return tuple(s for s in self.sensors if not s.secure)

    @property
    def upsilon(self) -> float:
        return min(self.upsilon1, self.upsilon2)

    def signal_mean(self, sensor_id: int, target: Point | None = None) -> float:
        """Noise-free received power at the sensor: p0 * (d0 / D_j)^gamma."""
        t = self.target if target is None else target
        d = distance(self.sensor(sensor_id).position, t)
        if d <= 0.0:
            raise DomainError("target coincides with the sensor position")
        return self.p0 * (self.d0 / d) ** self.gamma


def compute_distance_bounds(s: ScenarioConfig) -> DistanceBounds:
    """Distance bracket and anchor separation, closed form for a disc region.

    d_lower = min_j (||sensor_j - center|| - radius) and
    d_upper = max_j (||sensor_j - center|| + radius): the extremes of the
    sensor-target distance over all sensors and all target positions in the
    disc.
    """
    center_d = [distance(s0.position, s.roi.center) for s0 in s.sensors]
    d_lower = min(center_d) - s.roi.radius
    d_upper = max(center_d) + s.roi.radius
    if d_lower <= 0.0:
        raise InvalidScenario(
            "a sensor lies inside the ROI disc (lower distance bound <= 0)"
        )
    a, b = s.secure_pair()
    return DistanceBounds(d_lower, d_upper, distance(a.position, b.position))


def rho_bounds(
    s: ScenarioConfig, j: int, bounds: DistanceBounds | None = None
) -> tuple[float, float]:
    """Zero-bit probability bracket (rho_L, rho_U) for sensor j.

    rho_L = F_j(tau_j - p0 (d0/d_lower)^gamma) is the smallest possible
    zero-probability over the region (nearest target), rho_U the largest
    (farthest target).  Raises InvalidScenario unless
    0 < rho_L < rho_U < F_j(tau_j) <= 1 holds strictly.
    """
    if bounds is None:
        bounds = compute_distance_bounds(s)
    sensor = s.sensor(j)
    tau = sensor.threshold
    rho_l = float(sensor.noise.cdf(tau - s.p0 * (s.d0 / bounds.d_lower) ** s.gamma))
    rho_u = float(sensor.noise.cdf(tau - s.p0 * (s.d0 / bounds.d_upper) ** s.gamma))
    f_tau = float(sensor.noise.cdf(tau))
    if not (0.0 < rho_l < rho_u < f_tau <= 1.0):
        raise InvalidScenario(
            f"probability ordering failed for sensor {j}: "
            f"rho_L={rho_l}, rho_U={rho_u}, F(tau)={f_tau}"
        )
    return rho_l, rho_u


@dataclass(frozen=True)
class AssumptionReport:
    """Diagnostics for the three standing geometric assumptions.

    (a) anchors widely separated: d_secure > d_upper - d_lower + 2*upsilon1;
    (b) region far from the anchor segment:
        inf over the region of (D_{s1} + D_{s2}) > d_secure + 2*upsilon2;
    (c) the region lies strictly inside one half-space of the anchor line.

    Violations downgrade guarantees but do not stop the detector, so they
    are reported (and warned about), never raised.
    """

    condition_a: bool
    condition_b: bool
    condition_c: bool
    margin_a: float
    margin_b: float
    roi_line_clearance: float
    two_focus_inf: float
    two_focus_tolerance: float
    boundary_points: int
    warnings: tuple[str, ...] = field(default=())

    @property
    def all_satisfied(self) -> bool:
        return self.condition_a and self.condition_b and self.condition_c

    def summary(self) -> str:
        lines = [
            f"(a) anchor separation exceeds distance spread: "
            f"{'ok' if self.condition_a else 'VIOLATED'} (margin {self.margin_a:.6g})",
            f"(b) two-focus distance sum clears the anchors: "
            f"{'ok' if self.condition_b else 'VIOLATED'} (margin {self.margin_b:.6g}, "
            f"infimum {self.two_focus_inf:.6g} +- {self.two_focus_tolerance:.2g})",
            f"(c) region strictly inside one half-space: "
            f"{'ok' if self.condition_c else 'VIOLATED'} "
            f"(clearance {self.roi_line_clearance:.6g})",
        ]
        return "\n".join(lines)


def _line_side_distance(a: Point, b: Point, p: Point) -> float:
    """Signed distance of p from line ab (positive on the left of a->b)."""
    ux, uy = b.x - a.x, b.y - a.y
    norm = math.hypot(ux, uy)
    if norm == 0.0:
        raise DomainError("half-space anchors coincide")
    return (ux * (p.y - a.y) - uy * (p.x - a.x)) / norm


def validate_assumptions(s: ScenarioConfig) -> AssumptionReport:
    """Check the standing assumptions; warn (never raise) on violations.

    The two-focus infimum in (b) is evaluated numerically on
    TWO_FOCUS_BOUNDARY_POINTS points of the disc boundary plus the center;
    the distance sum is 2-Lipschitz, so the reported tolerance is twice the
    half-spacing of the boundary samples.
    """
    bounds = compute_distance_bounds(s)
    sa, sb = s.secure_pair()

    margin_a = bounds.d_secure - (bounds.d_upper - bounds.d_lower + 2.0 * s.upsilon1)
    condition_a = margin_a > 0.0

    m = TWO_FOCUS_BOUNDARY_POINTS
    theta = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    px = s.roi.center.x + s.roi.radius * np.cos(theta)
    py = s.roi.center.y + s.roi.radius * np.sin(theta)
    px = np.append(px, s.roi.center.x)
    py = np.append(py, s.roi.center.y)
    sum_d = np.hypot(px - sa.position.x, py - sa.position.y) + np.hypot(
        px - sb.position.x, py - sb.position.y
    )
    two_focus_inf = float(sum_d.min())
    tolerance = 2.0 * (math.pi * s.roi.radius / m)
    margin_b = two_focus_inf - (bounds.d_secure + 2.0 * s.upsilon2)
    condition_b = margin_b > 0.0

    signed = _line_side_distance(sa.position, sb.position, s.roi.center)
    clearance = abs(signed) - s.roi.radius
    condition_c = clearance > 0.0

    notes = []
    if not condition_a:
        notes.append(
            "anchor separation does not exceed the distance spread "
            f"(margin {margin_a:.6g}); identification guarantees weaken"
        )
    if not condition_b:
        notes.append(
            f"two-focus distance sum too small (margin {margin_b:.6g})"
        )
    if not condition_c:
        notes.append("region is not strictly inside one half-space of the anchor line")
    for note in notes:
        warnings.warn(note, AssumptionWarning, stacklevel=2)

    return AssumptionReport(
        condition_a=condition_a,
        condition_b=condition_b,
        condition_c=condition_c,
        margin_a=margin_a,
        margin_b=margin_b,
        roi_line_clearance=clearance,
        two_focus_inf=two_focus_inf,
        two_focus_tolerance=tolerance,
        boundary_points=m,
        warnings=tuple(notes),
    )


def roi_side(s: ScenarioConfig) -> int:
    """Which side of the anchor line the ROI center lies on (+1 or -1).

    Used to build the half-space clip for the geometric test.  Returns +1
    when the center is on the positive side of the signed distance, -1
    otherwise; an exactly-on-line center (degenerate) maps to +1.
    """
    sa, sb = s.secure_pair()
    signed = _line_side_distance(sa.position, sb.position, s.roi.center)
    return 1 if signed >= 0.0 else -1
