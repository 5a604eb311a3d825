"""Session configuration: JSON document plus command-line overrides.

A config file looks like::

    {
      "n": 2,
      "preset": "commutative",          // or "xi_entries": [[["x1","0"],...],...]
      "twist": "q",                     // scalar for the scalar-twist preset
      "bounds": {"grade_bound": null, "word_bound": null,
                 "max_steps": 10000, "size_cap": 200000},
      "format": "text",
      "seed": 0,
      "reduce_order": "desc"
    }

``xi_entries[i-1][j-1][k-1]`` is the expression for the coefficient on
d^a x^k in  x^i * d^a x^j = sum_k d^a x^k * coeff; entries are plain algebra
expressions (scalars, generators, + - *).  A preset, when present, wins over
explicit entries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bimodule import BimoduleMap, PRESETS, preset_map
from .parsing import ParseError, parse_algebra


class ConfigError(Exception):
    pass


FORMATS = ("text", "latex", "json")
ORDERS = ("asc", "desc")


@dataclass
class Bounds:
    grade_bound: int | None = None
    word_bound: int | None = None
    max_steps: int = 10_000
    size_cap: int = 200_000


@dataclass
class SessionConfig:
    n: int = 2
    preset: str | None = None
    twist: str = "q"
    xi_entries: list | None = None
    bounds: Bounds = field(default_factory=Bounds)
    format: str = "text"
    seed: int = 0
    reduce_order: str = "desc"

    def validate(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.preset is None and self.xi_entries is None:
            raise ConfigError("either a preset or xi_entries must be given")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.reduce_order not in ORDERS:
            raise ConfigError(f"reduce_order must be one of {ORDERS}")
        for name in ("max_steps", "size_cap"):
            if getattr(self.bounds, name) < 1:
                raise ConfigError(f"bounds.{name} must be >= 1")
        return self


_TOP_KEYS = {"n", "preset", "twist", "xi_entries", "bounds", "format",
             "seed", "reduce_order"}
_BOUND_KEYS = {"grade_bound", "word_bound", "max_steps", "size_cap"}


def load_config(path: str) -> SessionConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    cfg = SessionConfig()
    cfg.n = raw.get("n", cfg.n)
    cfg.preset = raw.get("preset")
    cfg.twist = raw.get("twist", cfg.twist)
    cfg.xi_entries = raw.get("xi_entries")
    cfg.format = raw.get("format", cfg.format)
    cfg.seed = raw.get("seed", cfg.seed)
    cfg.reduce_order = raw.get("reduce_order", cfg.reduce_order)
    bounds_raw = raw.get("bounds", {})
    if not isinstance(bounds_raw, dict):
        raise ConfigError("bounds must be a JSON object")
    unknown = set(bounds_raw) - _BOUND_KEYS
    if unknown:
        raise ConfigError(f"unknown bounds keys: {sorted(unknown)}")
    for key in _BOUND_KEYS:
        if key in bounds_raw and bounds_raw[key] is not None:
            setattr(cfg.bounds, key, bounds_raw[key])
    if not isinstance(cfg.n, int) or not isinstance(cfg.seed, int):
        raise ConfigError("n and seed must be integers")
    return cfg


def build_map(cfg: SessionConfig) -> BimoduleMap:
    """Instantiate the structure map from a validated configuration."""
    cfg.validate()
    n = cfg.n
    if cfg.preset is not None:
        if cfg.preset == "scalar-twist":
            try:
                twist = parse_algebra(cfg.twist, n).constant_value()
            except (ParseError, ValueError) as err:
                raise ConfigError(f"bad twist scalar {cfg.twist!r}: {err}") from err
            return preset_map("scalar-twist", n, twist)
        return preset_map(cfg.preset, n)

    entries = cfg.xi_entries
    if (not isinstance(entries, list) or len(entries) != n
            or any(not isinstance(block, list) or len(block) != n for block in entries)
            or any(not isinstance(row, list) or len(row) != n
                   for block in entries for row in block)):
        raise ConfigError(f"xi_entries must be an {n}x{n}x{n} nested list of strings")
    gen = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                src = entries[i][j][k]
                if not isinstance(src, str):
                    raise ConfigError(
                        f"xi_entries[{i}][{j}][{k}] must be an expression string")
                try:
                    value = parse_algebra(src, n)
                except ParseError as err:
                    raise ConfigError(
                        f"xi_entries[{i}][{j}][{k}] = {src!r}: {err}") from err
                # constructor convention: gen[i][row k][col j]
                gen[i][k][j] = value
    return BimoduleMap(n, gen)
