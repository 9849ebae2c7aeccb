"""Run configuration for the command-line front end.

Values come from, in increasing priority: the defaults below, a flat
``key = value`` config file, and command-line flags.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (a usage error)."""


@dataclass
class RunConfig:
    command: str = "profile"
    family: str | None = None
    n: int = 2
    a: float = 1.0
    a_min: float | None = None
    a_max: float | None = None
    a_step: float | None = None
    interval: tuple[float, float] | None = None
    grid: int | None = None
    format: str | None = None
    out: str | None = None
    tol: float | None = None
    alpha: float | None = None
    mesh: bool = False
    n_theta: int = 24
    tol_scale: float = 1.0
    filter: str | None = None

    def __post_init__(self):
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if (self.tol is not None and not self.tol > 0) or not self.tol_scale > 0:
            raise ConfigError("tolerances must be positive")
        if self.grid is not None and self.grid < 2:
            raise ConfigError("grid needs at least 2 points")
        if self.interval is not None and not self.interval[0] < self.interval[1]:
            raise ConfigError(f"empty interval {self.interval}")

    def family_name(self) -> str:
        """Explicit family, else H^3 catenoids for ``scan`` and R^n otherwise."""
        if self.family:
            return self.family
        return "h3min" if self.command == "scan" else "euclid"

    def grid_size(self, default: int) -> int:
        return self.grid if self.grid is not None else default

    def a_values(self) -> np.ndarray:
        """The scan range; a bare ``a`` counts as a one-point range."""
        if self.a_min is None and self.a_max is None:
            return np.array([self.a])
        if None in (self.a_min, self.a_max, self.a_step):
            raise ConfigError("a-range needs a-min, a-max and a-step")
        if not self.a_step > 0 or self.a_max < self.a_min:
            raise ConfigError(f"empty a-range [{self.a_min}, {self.a_max}] step {self.a_step}")
        k = int(math.floor((self.a_max - self.a_min) / self.a_step + 1e-9))
        return np.round(self.a_min + self.a_step * np.arange(k + 1), 12)

    def digest(self) -> str:
        """Short hash of every field except the output path."""
        d = asdict(self)
        d.pop("out")
        blob = json.dumps(d, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def parse_interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise ConfigError(f"interval must look like LO:HI, got {text!r}") from exc


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    if raw.lower() in ("", "none", "null"):
        return None
    if key == "interval":
        return parse_interval(raw)
    if kind.startswith("bool"):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: not a boolean: {raw!r}")
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc
    return raw


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys are allowed."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, raw = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, raw)
    return out


def resolve(cli: dict, path=None) -> RunConfig:
    """Merge defaults, the config file at ``path`` and the non-None CLI values."""
    merged = read_config_file(path) if path else {}
    merged.update({k: v for k, v in cli.items() if v is not None and k in _TYPES})
    return RunConfig(**merged)
