"""Tracker configuration and its flat ``key = value`` file format.

Example file::

    # solver
    lambda = 0.01
    iterations = 8
    map.kind = ours

Unknown keys and unparsable values raise :class:`~rfct.errors.ConfigError`.
"""

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .detection import ScalePyramidConfig
from .errors import ConfigError
from .model_update import UpdateSchedule
from .solver import SolverConfig
from .spatial_map import MAP_KINDS

__all__ = ["TrackerConfig", "load_config", "parse_config", "dump_config"]


@dataclass(frozen=True)
class TrackerConfig:
    # solver
    lam: float = 0.01
    mu0: float = 5.0
    beta: float = 3.0
    mu_max: float = 20.0
    iterations: int = 8
    penalty: str = "schedule"
    relax: float = 1.0
    # model update
    alpha: float = 0.02
    rho: float = 1.01
    # label and sampling
    output_sigma_factor: float = 1.0 / 16.0
    cell_size: int = 4
    search_area_scale: float = 4.0
    max_sample_area: float = 250.0**2
    # scale pyramid
    scale_a: float = 1.02
    scale_s: int = 5
    # spatial map
    map_kind: str = "ours"
    map_nu: float = 0.2
    map_delta: float = 3.0
    map_expansion: float = 1.6
    # features
    cn_table: Optional[str] = None
    gray: bool = False

    def __post_init__(self):
        try:
            self.solver_config()
            self.schedule()
            self.pyramid()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.map_kind not in MAP_KINDS:
            raise ConfigError(f"map.kind must be one of {MAP_KINDS}, got {self.map_kind!r}")
        if not self.map_nu > 0 or self.map_delta < 0 or not self.map_expansion > 0:
            raise ConfigError("map parameters need nu > 0, delta >= 0, expansion > 0")
        if int(self.cell_size) != self.cell_size or self.cell_size < 1:
            raise ConfigError(f"cell_size must be a positive integer, got {self.cell_size}")
        if not self.output_sigma_factor > 0 or not self.search_area_scale >= 1 or not self.max_sample_area > 0:
            raise ConfigError("output_sigma_factor, search_area_scale and max_sample_area must be positive")

    def solver_config(self):
        return SolverConfig(
            lam=self.lam, mu0=self.mu0, beta=self.beta, mu_max=self.mu_max,
            iterations=self.iterations, penalty=self.penalty, relax=self.relax,
        )

    def schedule(self):
        return UpdateSchedule(self.alpha, self.rho)

    def pyramid(self):
        return ScalePyramidConfig(self.scale_a, self.scale_s)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


# file key -> dataclass field
_KEYS = {
    "lambda": "lam",
    "mu0": "mu0",
    "beta": "beta",
    "mu_max": "mu_max",
    "iterations": "iterations",
    "penalty": "penalty",
    "relax": "relax",
    "alpha": "alpha",
    "rho": "rho",
    "output_sigma_factor": "output_sigma_factor",
    "cell_size": "cell_size",
    "search_area_scale": "search_area_scale",
    "max_sample_area": "max_sample_area",
    "scale_a": "scale_a",
    "scale_s": "scale_s",
    "map.kind": "map_kind",
    "map.nu": "map_nu",
    "map.delta": "map_delta",
    "map.expansion": "map_expansion",
    "features.cn_table": "cn_table",
    "features.gray": "gray",
}
_TYPES = {f.name: f.type for f in fields(TrackerConfig)}


def _convert(name, raw):
    kind = _TYPES[name]
    try:
        if kind in (int, "int"):
            value = float(raw)
            if value != int(value):
                raise ValueError(raw)
            return int(value)
        if kind in (float, "float"):
            return float(raw)
        if kind in (bool, "bool"):
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if name == "cn_table":
            return raw or None
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def parse_config(text, base=None):
    """Parse config text on top of ``base`` (defaults when omitted)."""
    changes = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        changes[_KEYS[key]] = _convert(_KEYS[key], raw)
    return (base or TrackerConfig()).replace(**changes)


def load_config(path, base=None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base)


def dump_config(cfg):
    """Serialise every key; ``parse_config(dump_config(cfg)) == cfg``."""
    lines = []
    for key, name in _KEYS.items():
        value = getattr(cfg, name)
        if value is None:
            value = ""
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
