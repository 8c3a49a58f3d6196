"""``mot.toml`` settings: tolerances and per-experiment parameters.

Example::

    [tolerances]
    order = 1e-9
    feas = 1e-9
    support = 1e-10

    [experiments.hn-structure]
    ns = [100, 200]
    nu_atoms = 6

Command-line ``--set key=value`` pairs override the experiment table.
"""
from __future__ import annotations

import ast
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .numeric import DEFAULT_TOL, MotError, Tolerances


class ConfigError(MotError, ValueError):
    pass


@dataclass(frozen=True)
class Config:
    tolerances: Tolerances = DEFAULT_TOL
    experiments: dict = field(default_factory=dict)

    def params(self, experiment: str, overrides: dict | None = None) -> dict:
        out = {k.replace("-", "_"): v for k, v in self.experiments.get(experiment, {}).items()}
        out.update(overrides or {})
        return out


def load_config(path=None) -> Config:
    if path is None:
        return Config()
    try:
        data = tomllib.loads(Path(path).read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = {f.name for f in fields(Tolerances)}
    tol = data.get("tolerances", {})
    unknown = set(tol) - known
    if unknown:
        raise ConfigError(f"{path}: unknown tolerance keys {sorted(unknown)}")
    return Config(DEFAULT_TOL.updated(**tol), dict(data.get("experiments", {})))


def parse_overrides(pairs) -> dict:
    """``["n=200", "ns=[100,200]"]`` -> {"n": 200, "ns": [100, 200]} (Python literals, else strings)."""
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"expected key=value, got {item!r}")
        try:
            out[key.strip().replace("-", "_")] = ast.literal_eval(value.strip())
        except (ValueError, SyntaxError):
            out[key.strip().replace("-", "_")] = value.strip()
    return out
