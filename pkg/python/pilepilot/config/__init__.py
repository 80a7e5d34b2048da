"""Run configuration: a flat TOML file validated against the packaged `schema.json`."""

from .run import (
    KEY_MAP,
    RunConfig,
    SyntheticProfile,
    build_run_config,
    load_schema,
    read_config_file,
    validate_flat,
)

__all__ = [
    "KEY_MAP",
    "RunConfig",
    "SyntheticProfile",
    "build_run_config",
    "load_schema",
    "read_config_file",
    "validate_flat",
]
