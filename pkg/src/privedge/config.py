"""Flat key=value experiment configuration with flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Optional, Tuple

from .latency import SimulationError, SystemParams


class ConfigError(ValueError):
    """Raised for unparseable or inconsistent configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    u: int = 2
    m: int = 600
    r: int = 50
    mu: float = 2.0 / 3.0
    tau: float = 0.0005
    eta: float = 0.8
    e_max: int = 9
    z: Tuple[int, ...] = (1, 2, 3, 4)
    gamma: Tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0)
    trials: int = 10_000
    seed: int = 0
    no_upload: bool = False
    out: Optional[str] = None
    # Single-plan options (verify / schedule-dump).
    e: int = 5
    n: int = 5
    p: int = 3
    t: Optional[int] = None

    def system_params(self, z: int, gamma: float) -> SystemParams:
        try:
            return SystemParams(
                u=self.u, m=self.m, r=self.r, mu=self.mu, gamma=gamma,
                tau=self.tau, eta=self.eta, e_max=self.e_max, z=z,
            )
        except SimulationError as exc:
            raise ConfigError(str(exc)) from exc


_INT_KEYS = {"u", "m", "r", "e_max", "trials", "seed", "e", "n", "p", "t"}
_FLOAT_KEYS = {"mu", "tau", "eta"}
_BOOL_KEYS = {"no_upload"}
_LIST_INT_KEYS = {"z"}
_LIST_FLOAT_KEYS = {"gamma"}
_STR_KEYS = {"out"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _LIST_INT_KEYS | _LIST_FLOAT_KEYS | _STR_KEYS


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("1", "true", "yes"):
                return True
            if raw.lower() in ("0", "false", "no"):
                return False
            raise ValueError(raw)
        if key in _LIST_INT_KEYS:
            return tuple(int(v) for v in raw.split(",") if v.strip()) if raw else ()
        if key in _LIST_FLOAT_KEYS:
            return tuple(float(v) for v in raw.split(",") if v.strip()) if raw else ()
        return raw
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key!r}: {raw!r}") from exc


def parse_config_file(path: str) -> dict:
    """Read key=value lines; '#' starts a comment; unknown keys are rejected."""
    values = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, raw = line.split("=", 1)
                key = key.strip()
                if key not in _ALL_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _parse_value(key, raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def validate(config: ExperimentConfig) -> ExperimentConfig:
    if min(config.u, config.m, config.r, config.e_max, config.trials) < 1:
        raise ConfigError("u, m, r, e_max, trials must be positive")
    if not 0 < config.mu <= 1:
        raise ConfigError("need 0 < mu <= 1")
    if config.tau <= 0 or config.eta <= 0:
        raise ConfigError("tau and eta must be positive")
    if any(g < 0 for g in config.gamma):
        raise ConfigError("gamma values must be nonnegative")
    if any(z < 0 for z in config.z):
        raise ConfigError("z values must be nonnegative")
    if not config.e >= config.n >= 1 or config.p < 1:
        raise ConfigError(f"need 1 <= n <= e and p >= 1, got e={config.e}, n={config.n}, p={config.p}")
    return config


def load_config(path: Optional[str] = None, **overrides) -> ExperimentConfig:
    """Defaults <- config file <- explicit overrides (None overrides ignored)."""
    values = parse_config_file(path) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(ExperimentConfig)}
    bad = set(values) - known
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")
    return validate(ExperimentConfig(**values))
