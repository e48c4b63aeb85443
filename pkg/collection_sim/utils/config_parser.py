"""
Experiment configuration parsing.

Experiment files are flat ``key = value`` lists with ``#`` comments, read
with python-dotenv. Values resolve in three layers: profile defaults, then
the file, then command-line overrides (flags win). Every failure is a
``ConfigError`` naming the offending key.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from dotenv.parser import parse_stream
from pydantic import ValidationError

from collection_sim.core.constants import ALGORITHMS, FLOW_RULES, POTENTIAL_MODES, PROFILES
from collection_sim.core.logging_config import get_logger
from collection_sim.models.scenario import ScenarioConfig, SourceEntry, switch_schedule

logger = get_logger(__name__)

KNOWN_KEYS = {
    "devices",
    "corridor",
    "radius",
    "period",
    "duration",
    "variability",
    "sweep",
    "seeds",
    "seed-list",
    "source-switch",
    "sources",
    "algorithms",
    "potential",
    "staleness",
    "speed-scale",
    "teleport-rate",
    "check-invariants",
    "flow",
    "profile",
    "workers",
    "out",
    "summary",
    "window",
}

# Keys that replace each other: setting one in a later layer drops the other
EXCLUSIVE_KEYS = {
    "variability": "sweep",
    "sweep": "variability",
    "seeds": "seed-list",
    "seed-list": "seeds",
    "source-switch": "sources",
    "sources": "source-switch",
}

# ScenarioConfig field -> config key, for error messages
FIELD_KEYS = {
    "device_count": "devices",
    "corridor_length": "corridor",
    "corridor_width": "corridor",
    "radius": "radius",
    "mean_period": "period",
    "duration": "duration",
    "variability": "variability",
    "source_schedule": "sources",
    "potential_mode": "potential",
    "staleness_bound": "staleness",
    "algorithms": "algorithms",
    "speed_scale": "speed-scale",
    "teleport_rate": "teleport-rate",
    "check_invariants": "check-invariants",
    "flow": "flow",
}


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything a ``run`` invocation needs."""

    scenario: ScenarioConfig
    variabilities: List[float]
    seeds: List[int]
    window: Tuple[float, float]
    workers: int = 1
    out: Optional[Path] = None
    summary: Optional[Path] = None
    profile: str = "desk"


# ============================================================================
# VALUE PARSERS
# ============================================================================

def parse_corridor(text: str) -> Tuple[float, float]:
    """
    Parse corridor dimensions.

    Examples:
        >>> parse_corridor("200x20")
        (200.0, 20.0)
    """
    parts = text.lower().replace(" ", "").split("x")
    if len(parts) != 2:
        raise ValueError(f"expected LxW, got {text!r}")
    return float(parts[0]), float(parts[1])


def parse_sweep(text: str) -> List[float]:
    """
    Parse ``a:b:n`` into n evenly spaced values from a to b inclusive.

    Examples:
        >>> parse_sweep("0:1:5")
        [0.0, 0.25, 0.5, 0.75, 1.0]
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected a:b:n, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"sweep needs at least one value, got {count}")
    # rounding keeps 0.15 from printing as 0.15000000000000002
    return [round(float(v), 12) for v in np.linspace(start, stop, count)]


def parse_seed_list(text: str) -> List[int]:
    seeds = [int(item) for item in text.replace(" ", "").split(",") if item]
    if not seeds:
        raise ValueError("seed list is empty")
    return seeds


def parse_window(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected start:end, got {text!r}")
    start, end = float(parts[0]), float(parts[1])
    if not end > start:
        raise ValueError(f"window end must exceed start, got {text!r}")
    return start, end


def parse_sources(text: str) -> List[SourceEntry]:
    """
    Parse an explicit source schedule.

    Examples:
        >>> [(e.time, e.selector) for e in parse_sources("0:rightmost,200:leftmost")]
        [(0.0, 'rightmost'), (200.0, 'leftmost')]
    """
    schedule = []
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        when, _, selector = item.partition(":")
        if not selector:
            raise ValueError(f"expected time:selector, got {item!r}")
        chosen: Any = selector if selector in ("rightmost", "leftmost") else int(selector)
        schedule.append(SourceEntry(time=float(when), selector=chosen))
    return schedule


def parse_algorithms(text: str) -> Tuple[str, ...]:
    names = tuple(item for item in text.replace(" ", "").lower().split(",") if item)
    unknown = [name for name in names if name not in ALGORITHMS]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}, expected a subset of {list(ALGORITHMS)}")
    # canonical order
    return tuple(name for name in ALGORITHMS if name in names)


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# ============================================================================
# LAYERS
# ============================================================================

def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("_", "-")


def load_config_file(path: str | Path) -> Dict[str, str]:
    """
    Read a flat ``key = value`` experiment file.

    Raises:
        ConfigError: If the file is missing, a statement cannot be parsed, or
            a key is unknown or has no value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")

    with path.open(encoding="utf-8") as stream:
        bindings = list(parse_stream(stream))

    values: Dict[str, str] = {}
    for binding in bindings:
        if binding.error:
            statement = binding.original.string.strip()
            raise ConfigError(
                f"cannot parse statement at line {binding.original.line} of {path}: {statement!r}",
                key=re.split(r"[\s=:]", statement, maxsplit=1)[0] or None,
            )
        if binding.key is None:
            continue
        key, value = binding.key, binding.value
        name = _normalize_key(key)
        if name not in KNOWN_KEYS:
            raise ConfigError(f"unknown key in {path}", key=key)
        if value is None or value.strip() == "":
            raise ConfigError(f"missing value in {path}", key=key)
        values[name] = value.strip()
    return values


def _merge(layers: List[Mapping[str, Optional[str]]]) -> Dict[str, str]:
    merged: Dict[str, str] = {}
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            name = _normalize_key(key)
            if name not in KNOWN_KEYS:
                raise ConfigError("unknown key", key=key)
            exclusive = EXCLUSIVE_KEYS.get(name)
            if exclusive and layer.get(exclusive) is None:
                merged.pop(exclusive, None)
            merged[name] = str(value).strip()
    return merged


def _convert(key: str, parser, text: str):
    try:
        return parser(text)
    except (ValueError, TypeError, ValidationError) as e:
        raise ConfigError(f"cannot parse {text!r} ({e})", key=key) from None


def _error_key(error: Mapping[str, Any]) -> Optional[str]:
    if error["loc"]:
        field_name = str(error["loc"][0])
        return FIELD_KEYS.get(field_name, field_name)
    # model-level checks name the offending field in the message
    for field_name, key in FIELD_KEYS.items():
        if field_name in error["msg"]:
            return key
    return None


def parse_config(
    path: Optional[str | Path] = None,
    overrides: Optional[Mapping[str, Optional[str]]] = None,
    default_profile: str = "desk",
    default_workers: int = 1,
) -> ExperimentPlan:
    """
    Resolve profile defaults, an optional file and command-line overrides.

    Args:
        path: Optional experiment file
        overrides: Flag values keyed by config key (None means "not given")
        default_profile: Profile used when neither layer names one
        default_workers: Worker count used when neither layer sets one

    Returns:
        ExperimentPlan with a validated base scenario

    Raises:
        ConfigError: Naming the first key that is unknown, unparsable or invalid
    """
    file_values = load_config_file(path) if path else {}
    values = _merge([file_values, overrides or {}])

    profile_name = values.get("profile", default_profile)
    if profile_name not in PROFILES:
        raise ConfigError(f"unknown profile {profile_name!r}, expected one of {sorted(PROFILES)}", key="profile")
    profile = PROFILES[profile_name]

    fields: Dict[str, Any] = {
        "device_count": profile["device_count"],
        "corridor_length": profile["corridor_length"],
        "corridor_width": profile["corridor_width"],
        "radius": profile["radius"],
        "mean_period": profile["mean_period"],
        "duration": profile["duration"],
    }
    if "devices" in values:
        fields["device_count"] = _convert("devices", int, values["devices"])
    if "corridor" in values:
        fields["corridor_length"], fields["corridor_width"] = _convert("corridor", parse_corridor, values["corridor"])
    for key, name in (("radius", "radius"), ("period", "mean_period"), ("duration", "duration"),
                      ("staleness", "staleness_bound"), ("speed-scale", "speed_scale"),
                      ("teleport-rate", "teleport_rate")):
        if key in values:
            fields[name] = _convert(key, float, values[key])
    if "algorithms" in values:
        fields["algorithms"] = _convert("algorithms", parse_algorithms, values["algorithms"])
    if "potential" in values:
        mode = values["potential"].lower()
        if mode not in POTENTIAL_MODES:
            raise ConfigError(f"expected one of {list(POTENTIAL_MODES)}, got {mode!r}", key="potential")
        fields["potential_mode"] = mode
    if "flow" in values:
        flow = values["flow"].lower()
        if flow not in FLOW_RULES:
            raise ConfigError(f"expected one of {list(FLOW_RULES)}, got {flow!r}", key="flow")
        fields["flow"] = flow
    if "check-invariants" in values:
        fields["check_invariants"] = _convert("check-invariants", parse_bool, values["check-invariants"])

    if "sources" in values:
        fields["source_schedule"] = _convert("sources", parse_sources, values["sources"])
    else:
        switch = values.get("source-switch")
        if switch is None:
            switch_time = profile["source_switch"]
        elif switch.lower() == "none":
            switch_time = None
        else:
            switch_time = _convert("source-switch", float, switch)
        fields["source_schedule"] = switch_schedule(switch_time)

    if "variability" in values:
        variabilities = [_convert("variability", float, values["variability"])]
        variability_key = "variability"
    elif "sweep" in values:
        variabilities = _convert("sweep", parse_sweep, values["sweep"])
        variability_key = "sweep"
    else:
        variabilities = parse_sweep("{}:{}:{}".format(*profile["sweep"]))
        variability_key = "sweep"
    for v in variabilities:
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"variability {v} outside [0, 1]", key=variability_key)

    if "seed-list" in values:
        seeds = _convert("seed-list", parse_seed_list, values["seed-list"])
    else:
        count = _convert("seeds", int, values["seeds"]) if "seeds" in values else profile["seed_count"]
        if count < 1:
            raise ConfigError(f"need at least one seed, got {count}", key="seeds")
        seeds = list(range(1, count + 1))
    if any(seed < 0 for seed in seeds):
        raise ConfigError("seeds must be non-negative", key="seed-list")

    fields["variability"] = variabilities[0]
    fields["seed"] = seeds[0]
    try:
        scenario = ScenarioConfig(**fields)
    except ValidationError as e:
        error = e.errors()[0]
        key = _error_key(error)
        raise ConfigError(error["msg"], key=key) from None

    window = (0.0, scenario.duration)
    if "window" in values:
        window = _convert("window", parse_window, values["window"])
    if window[0] < 0 or window[1] > scenario.duration:
        raise ConfigError(f"window {window} outside [0, {scenario.duration}]", key="window")

    workers = _convert("workers", int, values["workers"]) if "workers" in values else default_workers
    if workers < 1:
        raise ConfigError(f"need at least one worker, got {workers}", key="workers")

    plan = ExperimentPlan(
        scenario=scenario,
        variabilities=variabilities,
        seeds=seeds,
        window=window,
        workers=workers,
        out=Path(values["out"]) if "out" in values else None,
        summary=Path(values["summary"]) if "summary" in values else None,
        profile=profile_name,
    )
    logger.info(
        "Configuration resolved",
        extra={
            "extra_data": {
                "profile": profile_name,
                "config_file": str(path) if path else None,
                "devices": scenario.device_count,
                "variabilities": len(variabilities),
                "seeds": len(seeds),
                "potential": scenario.potential_mode,
                "flow": scenario.flow,
            }
        }
    )
    return plan
