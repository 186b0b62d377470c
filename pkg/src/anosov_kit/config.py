"""Run configuration: defaults, then a JSON file, then the environment, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import NotHyperbolic
from .exact_core import IntMatrix2
from .toral_dynamics import CAT_MAP

SEED_ENV = "ANOSOV_KIT_SEED"
FORMATS = ("json", "csv")


class ConfigError(ValueError):
    """Bad configuration value; reported as a usage error."""


@dataclass(frozen=True)
class Config:
    monodromy: IntMatrix2 = CAT_MAP
    k: int = 5
    samples: int = 10_000
    format: str = "json"
    precision: int = 12
    seed: int = 0

    def __post_init__(self):
        if not self.monodromy.is_unimodular():
            raise ConfigError(f"monodromy {self.monodromy!r} is not invertible over Z")
        if self.samples < 100:
            raise ConfigError("samples must be at least 100")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not 1 <= self.precision <= 17:
            raise ConfigError("precision must be between 1 and 17 significant digits")

    def require_hyperbolic(self) -> None:
        if abs(self.monodromy.trace()) <= 2:
            raise NotHyperbolic(f"monodromy {self.monodromy!r} has |trace| <= 2")

    def to_json(self) -> dict:
        return {
            "monodromy": self.monodromy.to_json(),
            "k": self.k,
            "samples": self.samples,
            "format": self.format,
            "precision": self.precision,
            "seed": self.seed,
        }


_INT_KEYS = ("k", "samples", "precision", "seed")


def _coerce(data: dict, origin: str) -> dict:
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{origin}: unknown keys {sorted(unknown)}")
    out = {}
    for key, value in data.items():
        try:
            if key == "monodromy":
                out[key] = IntMatrix2.from_json(value)
            elif key in _INT_KEYS:
                if isinstance(value, bool) or not isinstance(value, (int, str)):
                    raise TypeError(f"expected an integer, got {value!r}")
                out[key] = int(value)
            else:
                out[key] = str(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{origin}: bad value for {key}: {exc}") from exc
    return out


def load_config(path: str | os.PathLike | None = None, env=None, **overrides) -> Config:
    """Layer the sources; ``None`` overrides are ignored so unset flags fall through."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        values.update(_coerce(raw, str(path)))
    if env.get(SEED_ENV):
        values.update(_coerce({"seed": env[SEED_ENV]}, SEED_ENV))
    values.update(_coerce({k: v for k, v in overrides.items() if v is not None}, "flags"))
    return replace(Config(), **values)
