"""Run configuration: a JSON file of defaults, overridden by CLI flags."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Dict


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 3
    n_max: int = 10
    h: str = "1/3"
    # level of I2 for the reduced map
    psi_i2: str = "5/7"
    psi_n_max: int = 8
    # height bound for random rationals on lines and germs
    height: int = 97
    retries: int = 20
    # extra named hypersurfaces for `multiplicities`: name -> expression
    candidates: Dict[str, str] = field(default_factory=dict)

    @property
    def h_value(self) -> Fraction:
        return Fraction(self.h)

    @property
    def psi_i2_value(self) -> Fraction:
        return Fraction(self.psi_i2)

    def to_dict(self) -> dict:
        return asdict(self)


class ConfigError(ValueError):
    pass


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Read a JSON config (unknown keys are an error), then apply the
    non-None ``overrides``."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    bad = sorted(set(data) - known)
    if bad:
        raise ConfigError(f"unknown config keys: {bad}")
    data.update({k: v for k, v in overrides.items() if v is not None and k in known})
    cfg = RunConfig(**data)
    try:
        cfg.h_value, cfg.psi_i2_value
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational in config: {exc}") from None
    return cfg
