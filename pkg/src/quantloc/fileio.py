"""Scenario, attack, and dataset serialization, plus the benchmark preset.

Scenario files are JSON with a fixed key order, so identical inputs write
identical bytes.  Sensors may be listed explicitly or generated by a
linspace block; attacks are entries of sensor ids (or an inclusive id
range) with a variant name and its parameters.  Bit records use a small
binary container: a magic tag, record geometry, then each sensor's bits
packed eight to the byte.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .attacks import AttackAssignment, AttackSpec, Mima, NoAttack, PsiOffset, SpoofBias
from .errors import DomainError, InvalidScenario, ParseError
from .measurement import QuantizedDataset
from .noise import GaussianNoise, NoiseModel
from .scenario import Point, RoiDisc, ScenarioConfig, SensorSpec

__all__ = [
    "SCHEMA_VERSION",
    "load_scenario",
    "save_scenario",
    "parse_scenario",
    "render_scenario",
    "build_paper_setup",
    "save_dataset",
    "load_dataset",
]

SCHEMA_VERSION = 1

DATASET_MAGIC = b"QDS1"

_MASK64 = (1 << 64) - 1


# -- parsing helpers --------------------------------------------------------


def _get(obj: Mapping[str, Any], key: str, path: str) -> Any:
    if not isinstance(obj, Mapping):
        raise ParseError(f"{path}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise ParseError(f"{path}: missing required field {key!r}")
    return obj[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}: expected an integer, got {value!r}")
    return value


def _point(value: Any, path: str) -> Point:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ParseError(f"{path}: expected [x, y], got {value!r}")
    return Point(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _noise(value: Any, path: str) -> NoiseModel:
    kind = _get(value, "kind", path)
    if kind == "gaussian":
        return GaussianNoise(
            location=_number(value.get("location", 0.0), f"{path}.location"),
            scale=_number(value.get("scale", 1.0), f"{path}.scale"),
        )
    raise ParseError(f"{path}.kind: unknown noise model {kind!r}")


def _noise_dict(noise: NoiseModel) -> dict[str, Any]:
    if isinstance(noise, GaussianNoise):
        return {"kind": "gaussian", "location": noise.location, "scale": noise.scale}
    raise DomainError(f"cannot serialize noise model {type(noise).__name__}")


def _linspace_block(block: Mapping[str, Any], path: str) -> list[float]:
    count = _integer(_get(block, "count", path), f"{path}.count")
    if count < 1:
        raise ParseError(f"{path}.count: must be >= 1, got {count}")
    start = _number(_get(block, "start", path), f"{path}.start")
    stop = _number(_get(block, "stop", path), f"{path}.stop")
    include_start = bool(block.get("include_start", True))
    include_stop = bool(block.get("include_stop", True))
    extra = 2 - int(include_start) - int(include_stop)
    xs = np.linspace(start, stop, count + extra)
    if not include_start:
        xs = xs[1:]
    if not include_stop:
        xs = xs[:-1]
    return [float(x) for x in xs]


def _parse_sensors(
    entries: Any,
    default_threshold: float,
    default_noise: NoiseModel,
) -> tuple[SensorSpec, ...]:
    if not isinstance(entries, list) or not entries:
        raise ParseError("sensors: expected a nonempty list")
    sensors: list[SensorSpec] = []
    for i, entry in enumerate(entries):
        path = f"sensors[{i}]"
        if not isinstance(entry, Mapping):
            raise ParseError(f"{path}: expected an object, got {entry!r}")
        threshold = _number(entry.get("threshold", default_threshold), f"{path}.threshold")
        noise = (
            _noise(entry["noise"], f"{path}.noise")
            if "noise" in entry
            else default_noise
        )
        if "linspace" in entry:
            xs = _linspace_block(entry["linspace"], f"{path}.linspace")
            y = _number(entry.get("y", 0.0), f"{path}.y")
            first_id = _integer(
                _get(entry["linspace"], "first_id", f"{path}.linspace"),
                f"{path}.linspace.first_id",
            )
            for offset, x in enumerate(xs):
                sensors.append(
                    SensorSpec(
                        id=first_id + offset,
                        position=Point(x, y),
                        threshold=threshold,
                        noise=noise,
                        secure=False,
                    )
                )
        else:
            sensors.append(
                SensorSpec(
                    id=_integer(_get(entry, "id", path), f"{path}.id"),
                    position=_point(_get(entry, "position", path), f"{path}.position"),
                    threshold=threshold,
                    noise=noise,
                    secure=bool(entry.get("secure", False)),
                )
            )
    return tuple(sensors)


def _attack_ids(value: Any, path: str) -> list[int]:
    if isinstance(value, list):
        return [_integer(v, f"{path}[{i}]") for i, v in enumerate(value)]
    if isinstance(value, Mapping) and "range" in value:
        rng = value["range"]
        if not (isinstance(rng, list) and len(rng) == 2):
            raise ParseError(f"{path}.range: expected [lo, hi], got {rng!r}")
        lo = _integer(rng[0], f"{path}.range[0]")
        hi = _integer(rng[1], f"{path}.range[1]")
        if hi < lo:
            raise ParseError(f"{path}.range: hi {hi} below lo {lo}")
        return list(range(lo, hi + 1))
    raise ParseError(f"{path}: expected an id list or a range object, got {value!r}")


def _attack_spec(variant: str, params: Mapping[str, Any], path: str) -> AttackSpec:
    try:
        if variant == "none":
            return NoAttack()
        if variant == "mima":
            return Mima(
                psi0=_number(_get(params, "psi0", path), f"{path}.psi0"),
                psi1=_number(_get(params, "psi1", path), f"{path}.psi1"),
            )
        if variant == "psi_offset":
            return PsiOffset(offset=_number(_get(params, "offset", path), f"{path}.offset"))
        if variant == "spoof_bias":
            return SpoofBias(bias=_number(_get(params, "bias", path), f"{path}.bias"))
    except DomainError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    raise ParseError(f"{path}.variant: unknown attack variant {variant!r}")


def _parse_attacks(entries: Any) -> AttackAssignment:
    if entries is None:
        return AttackAssignment(specs={})
    if not isinstance(entries, list):
        raise ParseError("attacks: expected a list")
    specs: dict[int, AttackSpec] = {}
    for i, entry in enumerate(entries):
        path = f"attacks[{i}]"
        if not isinstance(entry, Mapping):
            raise ParseError(f"{path}: expected an object, got {entry!r}")
        ids = _attack_ids(_get(entry, "ids", path), f"{path}.ids")
        variant = _get(entry, "variant", path)
        spec = _attack_spec(variant, entry.get("params", {}), path)
        for j in ids:
            if j in specs:
                raise ParseError(f"{path}: sensor {j} already has an attack entry")
            specs[j] = spec
    return AttackAssignment(specs=specs)


def parse_scenario(text: str) -> tuple[ScenarioConfig, AttackAssignment]:
    """Parse a scenario document; raises ParseError with a field path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    version = _integer(_get(doc, "schema_version", "document"), "schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(
            f"schema_version: expected {SCHEMA_VERSION}, got {version}"
        )
    constants = _get(doc, "constants", "document")
    default_noise = _noise(
        doc.get("noise_default", {"kind": "gaussian"}), "noise_default"
    )
    default_threshold = _number(doc.get("threshold_default", 1.0), "threshold_default")
    sensors = _parse_sensors(
        _get(doc, "sensors", "document"), default_threshold, default_noise
    )
    roi_obj = _get(doc, "roi", "document")
    roi = RoiDisc(
        center=_point(_get(roi_obj, "center", "roi"), "roi.center"),
        radius=_number(_get(roi_obj, "radius", "roi"), "roi.radius"),
    )
    try:
        scenario = ScenarioConfig(
            sensors=sensors,
            roi=roi,
            target=_point(_get(doc, "target", "document"), "target"),
            p0=_number(_get(constants, "p0", "constants"), "constants.p0"),
            d0=_number(_get(constants, "d0", "constants"), "constants.d0"),
            gamma=_number(_get(constants, "gamma", "constants"), "constants.gamma"),
            upsilon1=_number(constants.get("upsilon1", 1.0), "constants.upsilon1"),
            upsilon2=_number(constants.get("upsilon2", 1.0), "constants.upsilon2"),
            kappa=_number(constants.get("kappa", 0.005), "constants.kappa"),
        )
    except (DomainError, InvalidScenario) as exc:
        raise ParseError(f"scenario invalid: {exc}") from exc
    assignment = _parse_attacks(doc.get("attacks"))
    try:
        assignment.validate_against(scenario)
    except InvalidScenario as exc:
        raise ParseError(f"attacks invalid: {exc}") from exc
    return scenario, assignment


def load_scenario(path: str | Path) -> tuple[ScenarioConfig, AttackAssignment]:
    return parse_scenario(Path(path).read_text())


def _sensor_dict(
    sensor: SensorSpec, default_threshold: float, default_noise: NoiseModel
) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "id": sensor.id,
        "position": [sensor.position.x, sensor.position.y],
    }
    if sensor.threshold != default_threshold:
        entry["threshold"] = sensor.threshold
    if sensor.noise != default_noise:
        entry["noise"] = _noise_dict(sensor.noise)
    if sensor.secure:
        entry["secure"] = True
    return entry


def _spec_entry(ids: list[int], spec: AttackSpec) -> dict[str, Any]:
    contiguous = ids == list(range(ids[0], ids[-1] + 1)) and len(ids) > 1
    entry: dict[str, Any] = {
        "ids": {"range": [ids[0], ids[-1]]} if contiguous else ids,
        "variant": spec.variant,
    }
    if isinstance(spec, Mima):
        entry["params"] = {"psi0": spec.psi0, "psi1": spec.psi1}
    elif isinstance(spec, PsiOffset):
        entry["params"] = {"offset": spec.offset}
    elif isinstance(spec, SpoofBias):
        entry["params"] = {"bias": spec.bias}
    return entry


def render_scenario(s: ScenarioConfig, assignment: AttackAssignment | None = None) -> str:
    """Serialize to the scenario JSON format with a stable key order."""
    default_threshold = s.sensors[0].threshold
    default_noise = s.sensors[0].noise
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "constants": {
            "p0": s.p0,
            "d0": s.d0,
            "gamma": s.gamma,
            "upsilon1": s.upsilon1,
            "upsilon2": s.upsilon2,
            "kappa": s.kappa,
        },
        "roi": {"center": [s.roi.center.x, s.roi.center.y], "radius": s.roi.radius},
        "target": [s.target.x, s.target.y],
        "noise_default": _noise_dict(default_noise),
        "threshold_default": default_threshold,
        "sensors": [
            _sensor_dict(sensor, default_threshold, default_noise)
            for sensor in s.sensors
        ],
    }
    if assignment is not None and assignment.specs:
        groups: dict[AttackSpec, list[int]] = {}
        for j, spec in sorted(assignment.specs.items()):
            groups.setdefault(spec, []).append(j)
        doc["attacks"] = [_spec_entry(ids, spec) for spec, ids in groups.items()]
    return json.dumps(doc, indent=2) + "\n"


def save_scenario(
    s: ScenarioConfig,
    path: str | Path,
    assignment: AttackAssignment | None = None,
) -> None:
    Path(path).write_text(render_scenario(s, assignment))


# -- benchmark preset -------------------------------------------------------


def build_paper_setup(
    scale: float = 1.0, psi1: float = 0.0105
) -> tuple[ScenarioConfig, AttackAssignment]:
    """The benchmark network: two sensor groups flanked by secure anchors.

    At full scale, 500 sensors sit on the x axis in two groups of 250.
    Together with its secure anchor, each group is evenly spaced across
    its 100-unit span: the left group shares the anchor at (-1000, 0) and
    runs to (-900, 0); the right group runs from (900, 0) to its anchor
    at (1000, 0).  The target sits at (0, 1e5), the center of the ROI
    disc of radius 7500.  The whole left group is bit-flip attacked with
    flip probability psi1 on ones.

    scale shrinks both groups (it never touches K or the geometry):
    scale = 1/25 gives 10 sensors per group, re-spaced evenly.
    """
    if not (0.0 < scale <= 1.0):
        raise DomainError(f"scale must lie in (0, 1], got {scale}")
    n_half_float = 250.0 * scale
    n_half = round(n_half_float)
    if n_half < 1 or not math.isclose(n_half_float, n_half, abs_tol=1e-9):
        raise DomainError(
            f"scale {scale} puts {n_half_float} sensors in each group; "
            "need a positive whole number"
        )
    n = 2 * n_half
    noise = GaussianNoise(location=0.0, scale=1.0)
    sensors: list[SensorSpec] = []
    left = np.linspace(-1000.0, -900.0, n_half + 1)[1:]
    right = np.linspace(900.0, 1000.0, n_half + 1)[:-1]
    for offset, x in enumerate(left):
        sensors.append(
            SensorSpec(1 + offset, Point(float(x), 0.0), 1.0, noise, secure=False)
        )
    for offset, x in enumerate(right):
        sensors.append(
            SensorSpec(
                n_half + 1 + offset, Point(float(x), 0.0), 1.0, noise, secure=False
            )
        )
    sensors.append(SensorSpec(n + 1, Point(-1000.0, 0.0), 1.0, noise, secure=True))
    sensors.append(SensorSpec(n + 2, Point(1000.0, 0.0), 1.0, noise, secure=True))
    scenario = ScenarioConfig(
        sensors=tuple(sensors),
        roi=RoiDisc(center=Point(0.0, 1e5), radius=7500.0),
        target=Point(0.0, 1e5),
        p0=1.0,
        d0=1e5,
        gamma=2.0,
    )
    attack = Mima(psi0=0.0, psi1=psi1)
    assignment = AttackAssignment(specs={j: attack for j in range(1, n_half + 1)})
    return scenario, assignment


# -- dataset container ------------------------------------------------------


def save_dataset(data: QuantizedDataset, path: str | Path) -> None:
    """Write bit records in the packed binary container."""
    ids = sorted(data.bits)
    with open(path, "wb") as fh:
        fh.write(DATASET_MAGIC)
        header = np.array(
            [data.k, len(ids), data.rng_seed & _MASK64, data.trial_index],
            dtype="<u8",
        )
        fh.write(header.tobytes())
        for sid in ids:
            fh.write(np.array([sid], dtype="<i8").tobytes())
            fh.write(np.packbits(data.bits[sid]).tobytes())


def load_dataset(path: str | Path) -> QuantizedDataset:
    raw = Path(path).read_bytes()
    if raw[:4] != DATASET_MAGIC:
        raise ParseError(
            f"{path}: not a dataset file (bad magic {raw[:4]!r})"
        )
    header = np.frombuffer(raw, dtype="<u8", count=4, offset=4)
    k, n_sensors, seed, trial = (int(v) for v in header)
    packed_len = (k + 7) // 8
    offset = 4 + 32
    bits: dict[int, np.ndarray] = {}
    for _ in range(n_sensors):
        if offset + 8 + packed_len > len(raw):
            raise ParseError(f"{path}: truncated dataset file")
        sid = int(np.frombuffer(raw, dtype="<i8", count=1, offset=offset)[0])
        offset += 8
        packed = np.frombuffer(raw, dtype=np.uint8, count=packed_len, offset=offset)
        offset += packed_len
        bits[sid] = np.unpackbits(packed)[:k]
    if offset != len(raw):
        raise ParseError(f"{path}: {len(raw) - offset} trailing bytes")
    return QuantizedDataset(bits=bits, k=k, rng_seed=seed, trial_index=trial)
