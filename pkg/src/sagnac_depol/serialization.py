"""Config loading and dataset writers shared by the CLI.

Config files are JSON, or TOML when the suffix is ``.toml``. Angles in
config files are degrees. All floats are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .montecarlo import ExperimentConfig
from .optics import DepolarizerConfig, SagnacConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SIG_DIGITS = 12

_TOP_KEYS = {
    "seed",
    "counts_per_setting",
    "infinite_n",
    "trials",
    "workers",
    "all_probes",
    "theta_grid_deg",
    "p_grid",
    "sagnac",
    "depolarizer",
    "noise",
}
_NOISE_KEYS = {"angle_jitter_deg", "dark_fraction"}


class ConfigReadError(OSError):
    """Config file missing, unreadable or not parseable."""


def fmt(x: float) -> str:
    return f"{float(x):.{SIG_DIGITS}g}"


def round_floats(obj: Any) -> Any:
    """Recursively round floats to 12 significant digits for stable JSON."""
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [round_floats(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(round_floats(obj), indent=2) + "\n"


def write_json(path: Path, obj: Any) -> Path:
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def read_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigReadError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        if path.suffix.lower() == ".toml":
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigReadError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigReadError(f"config {path} must hold a mapping at top level")
    return data


def config_from_dict(data: dict) -> ExperimentConfig:
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")
    noise = data.get("noise", {})
    unknown = set(noise) - _NOISE_KEYS
    if unknown:
        raise ParameterError(f"unknown noise keys: {', '.join(sorted(unknown))}")
    kw: dict[str, Any] = {}
    try:
        if "seed" in data:
            kw["rng_seed"] = int(data["seed"])
        for key in ("counts_per_setting", "trials", "workers"):
            if key in data:
                kw[key] = int(data[key])
        for key in ("infinite_n", "all_probes"):
            if key in data:
                kw[key] = bool(data[key])
        if "theta_grid_deg" in data:
            kw["theta_grid"] = tuple(math.radians(float(t)) for t in data["theta_grid_deg"])
        if "p_grid" in data:
            kw["p_grid"] = tuple(float(p) for p in data["p_grid"])
        if "sagnac" in data:
            block = dict(data["sagnac"])
            block.setdefault("theta_deg", 0.0)
            kw["pbs_extinction"] = SagnacConfig.from_json(block).pbs_extinction
        if "depolarizer" in data:
            kw["fiber_depolarization"] = DepolarizerConfig.from_json(data["depolarizer"]).d
        if "angle_jitter_deg" in noise:
            kw["angle_jitter"] = math.radians(float(noise["angle_jitter_deg"]))
        if "dark_fraction" in noise:
            kw["dark_fraction"] = float(noise["dark_fraction"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"invalid config value: {exc}") from exc
    return ExperimentConfig(**kw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "seed": cfg.rng_seed,
        "counts_per_setting": cfg.counts_per_setting,
        "infinite_n": cfg.infinite_n,
        "trials": cfg.trials,
        "all_probes": cfg.all_probes,
        "theta_grid_deg": [math.degrees(t) for t in cfg.theta_grid],
        "p_grid": list(cfg.p_grid),
        "sagnac": {"pbs_extinction": cfg.pbs_extinction},
        "depolarizer": DepolarizerConfig(cfg.fiber_depolarization).to_json(),
        "noise": {"angle_jitter_deg": math.degrees(cfg.angle_jitter), "dark_fraction": cfg.dark_fraction},
    }


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return config_from_dict(read_config_file(path))
