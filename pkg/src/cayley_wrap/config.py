"""Tolerance, branch and grid settings shared by every operation.

A single immutable :class:`Config` record is threaded through the API. Library
functions default to :data:`DEFAULT_CONFIG`; the CLI builds one from
``--config FILE`` or the ``CAYLEY_WRAP_CONFIG`` environment variable.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

import yaml

ENV_VAR = "CAYLEY_WRAP_CONFIG"


@dataclass(frozen=True)
class Config:
    # algebra
    zero_eps: float = 1e-300
    eq_tol: float = 1e-12
    small_angle: float = 1e-8
    ln_branch_generator: int = 1
    # bar construction
    time_grid: float | None = 2.0**-20
    letter_tol: float = 1e-12
    bar_depth_cap: int = 3
    # forms
    form_cap: int = 6
    # connection
    holonomy_h_max: float = 0.1
    curvature_exponent: float = 2.0
    branch_retries: int = 4
    branch_margin: float = 1e-6
    # cochain
    sv_tol: float = 1e-10
    max_points: int = 12
    max_degree: int = 4

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


DEFAULT_CONFIG = Config()


def load_config(path: str | os.PathLike) -> Config:
    """Read a YAML (or JSON) mapping of field overrides."""
    data = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a mapping")
    known = {f.name for f in dataclasses.fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return DEFAULT_CONFIG.replace(**data)


def config_from_env(path: str | os.PathLike | None = None) -> Config:
    """Explicit path first, then the environment variable, then defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return DEFAULT_CONFIG
    return load_config(path)


def resolve(config: Config | None) -> Config:
    return DEFAULT_CONFIG if config is None else config
