"""YAML scenario configuration files.

A config file is a flat YAML mapping. Every key is optional; omitted keys
take the defaults of :class:`~mmcoexist.sim.ScenarioConfig`. Unknown keys are
rejected. The optional ``schema`` key must equal :data:`CONFIG_SCHEMA`.

A run manifest (``manifest.json``) written by ``mmcoexist sweep`` is also
accepted; its embedded config snapshot is used.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import yaml

from .errors import ConfigError
from .sim import ScenarioConfig

CONFIG_SCHEMA = "mmcoexist/config/v1"
MANIFEST_SCHEMA = "mmcoexist/manifest/v1"

# file key -> ScenarioConfig field, where they differ
_RENAMED = {"trials": "trials_per_point"}
_FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig)}
_FLOATS = {"max_range", "carrier_freq", "snr_rr_db", "snr_ir_db", "snr_ri_db", "angle_spread_deg", "element_spacing"}
_INTS = _FIELDS - _FLOATS - {"snr_link_grid_db", "cluster_range", "ray_range"}
CONFIG_KEYS = sorted((_FIELDS - set(_RENAMED.values())) | set(_RENAMED))


def config_from_mapping(data: dict | None) -> ScenarioConfig:
    data = dict(data or {})
    schema = data.pop("schema", CONFIG_SCHEMA)
    if schema != CONFIG_SCHEMA:
        raise ConfigError(f"unsupported config schema {schema!r} (expected {CONFIG_SCHEMA!r})")
    kwargs = {}
    for key, value in data.items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        name = _RENAMED.get(key, key)
        kwargs[name] = _coerce(key, name, value)
    try:
        return ScenarioConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _coerce(key, name, value):
    # PyYAML reads exponents without a sign (6.0e10) as strings
    if value is None and name in ("snr_ir_db", "snr_ri_db"):
        return None
    if name in _FLOATS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {value!r}") from None
    if name in _INTS and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    if name not in _INTS and not isinstance(value, (list, tuple)):
        raise ConfigError(f"{key} must be a list, got {value!r}")
    return value


def config_to_mapping(config: ScenarioConfig) -> dict:
    """Inverse of :func:`config_from_mapping`, with the schema tag."""
    out = {"schema": CONFIG_SCHEMA}
    inverse = {v: k for k, v in _RENAMED.items()}
    for key, value in config.to_dict().items():
        out[inverse.get(key, key)] = value
    return out


def parse_config(path) -> ScenarioConfig:
    """Read a config file (or a run manifest) into a validated config."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping of keys to values")
    if data.get("schema") == MANIFEST_SCHEMA:
        data = data.get("config") or {}
    return config_from_mapping(data)
