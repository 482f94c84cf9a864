"""Experiment configuration files (TOML) and command-line overrides."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .contraction_algebra import PRESETS

EXPERIMENTS = ("conjecture_sweep", "fundamental", "demazure", "prop_kk", "property_suites", "example")
OPERATOR_PRESETS = ("derived", "appendix")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    n: Optional[int] = None
    lambdas: list = field(default_factory=list)
    max_entry: Optional[int] = None
    max_total: Optional[int] = None
    last_zero: bool = False
    j: Optional[int] = None
    multiplicities: list = field(default_factory=list)
    instances: list = field(default_factory=list)
    example: Optional[str] = None
    labeling: str = "main-body"
    operator_preset: str = "derived"
    max_entries: Optional[int] = None
    check_limit: bool = False
    one_seed: bool = False
    timings: bool = False
    fault: Optional[str] = None
    n_max: int = 4
    workers: int = 1
    out: Optional[str] = None
    base_dir: str = "."

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.labeling not in PRESETS:
            raise ConfigError(f"unknown labeling {self.labeling!r}; choose from {', '.join(sorted(PRESETS))}")
        if self.operator_preset not in OPERATOR_PRESETS:
            raise ConfigError(f"unknown operator preset {self.operator_preset!r}")
        if self.max_entries is not None and self.max_entries <= 0:
            raise ConfigError("max_entries must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.experiment == "conjecture_sweep" and not self.lambdas:
            if self.n is None or (self.max_entry is None and self.max_total is None):
                raise ConfigError("a sweep needs n and a finite bound (max_entry or max_total)")
        for bound in (self.max_entry, self.max_total):
            if bound is not None and bound < 0:
                raise ConfigError("sweep bounds must be non-negative")
        if self.experiment == "fundamental" and (self.n is None or self.j is None):
            raise ConfigError("the fundamental check needs n and j")
        if self.experiment == "demazure":
            if not self.instances:
                raise ConfigError("the demazure experiment needs at least one [[instances]] table")
            for inst in self.instances:
                for ref in inst.get("modules", []):
                    self.resolve_module(ref)
        if self.experiment == "example" and not self.example:
            raise ConfigError("the example experiment needs example = <name>")
        return self

    def resolve_module(self, ref: str):
        """Module reference: a built-in diagram name or a path relative to the config file."""
        from .demazure_data import CANDIDATES

        if ref in CANDIDATES:
            return ref
        path = Path(self.base_dir) / ref
        if not path.is_file():
            raise ConfigError(f"module file {path} does not exist")
        return path

    def report_dict(self) -> dict:
        """Settings that influence results; output paths and parallelism are left out."""
        skip = {"out", "workers", "base_dir", "timings"}
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in skip}


def from_dict(data: dict, base_dir: str = ".") -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "experiment" not in data:
        raise ConfigError("config must set experiment")
    cfg = ExperimentConfig(**data)
    cfg.base_dir = base_dir
    return cfg


def load_config(path, overrides: Optional[dict[str, Any]] = None) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return from_dict(data, str(path.parent)).validate()
