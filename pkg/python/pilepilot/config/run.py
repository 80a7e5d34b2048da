"""The flat run configuration: file loading, schema validation and the typed groups."""

import dataclasses
import json
import os
import pathlib
import sys
import typing as tp
from importlib import resources

import jsonschema

from ..errors import ConfigError
from ..evalkit import EvalConfig
from ..simenv import PenaltyConfig, StationConfig
from ..trainer import TrainConfig

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

PathLike = tp.Union[str, "os.PathLike[str]"]


@dataclasses.dataclass(frozen=True)
class SyntheticProfile:
    """Shape of the generated office load and price traces."""

    days: int = 44
    noise: float = 0.05
    load_base_kw: float = 200.0
    load_peak_kw: float = 650.0
    price_base: float = 0.03
    price_peak_multiplier: float = 3.0

    def __post_init__(self):
        if self.days < 1:
            raise ConfigError("[synthetic_days]: Must be at least 1.")
        if self.noise < 0:
            raise ConfigError("[synthetic_noise]: Must be non-negative.")
        if not 0 < self.load_base_kw < self.load_peak_kw:
            raise ConfigError("[load_peak_kw]: Need 0 < load_base_kw < load_peak_kw.")
        if not self.price_base > 0 or self.price_peak_multiplier < 1:
            raise ConfigError("[price_base]: Need price_base > 0 and price_peak_multiplier >= 1.")


# Flat key -> (group, field) for keys whose field name differs or that feed several groups.
_RENAMES: tp.Dict[str, tp.List[tp.Tuple[str, str]]] = {
    "seed": [("train", "seed"), ("evaluation", "seed")],
    "scenario": [("train", "scenario"), ("evaluation", "scenario")],
    "eval_start_day": [("evaluation", "start_day")],
    "synthetic_days": [("synthetic", "days")],
    "synthetic_noise": [("synthetic", "noise")],
}
_GROUPS: tp.Dict[str, tp.Type[tp.Any]] = {
    "station": StationConfig,
    "penalty": PenaltyConfig,
    "train": TrainConfig,
    "evaluation": EvalConfig,
    "synthetic": SyntheticProfile,
}
_TOP_LEVEL = ("name", "load_csv", "price_csv")


def _key_map() -> tp.Dict[str, tp.List[tp.Tuple[str, str]]]:
    mapping: tp.Dict[str, tp.List[tp.Tuple[str, str]]] = {}
    taken = {field for targets in _RENAMES.values() for _, field in targets}
    for group, cls in _GROUPS.items():
        for field in dataclasses.fields(cls):
            if group in ("evaluation", "synthetic") and field.name in taken:
                continue
            if group == "train" and field.name in ("seed", "scenario"):
                continue
            mapping.setdefault(field.name, []).append((group, field.name))
    mapping.update(_RENAMES)
    return mapping


KEY_MAP = _key_map()


@dataclasses.dataclass(frozen=True)
class RunConfig:
    name: str = "run"
    station: StationConfig = StationConfig()
    penalty: PenaltyConfig = PenaltyConfig()
    train: TrainConfig = TrainConfig()
    evaluation: EvalConfig = EvalConfig()
    synthetic: SyntheticProfile = SyntheticProfile()
    load_csv: tp.Optional[str] = None
    price_csv: tp.Optional[str] = None

    @classmethod
    def from_flat(cls, flat: tp.Mapping[str, tp.Any]) -> "RunConfig":
        """Build from flat keys. The flat mapping must already be schema-valid."""
        kwargs: tp.Dict[str, tp.Dict[str, tp.Any]] = {group: {} for group in _GROUPS}
        for key, value in flat.items():
            if key in _TOP_LEVEL:
                continue
            for group, field in KEY_MAP[key]:
                kwargs[group][field] = value
        return cls(
            name=flat.get("name", "run"),
            load_csv=flat.get("load_csv"),
            price_csv=flat.get("price_csv"),
            **{group: _GROUPS[group](**values) for group, values in kwargs.items()},
        )

    def flat(self) -> tp.Dict[str, tp.Any]:
        """Every key, the inverse of `from_flat`. Unset optional keys are left out."""
        out: tp.Dict[str, tp.Any] = {}
        for key, targets in KEY_MAP.items():
            group, field = targets[0]
            value = getattr(getattr(self, group), field)
            if value is not None:
                out[key] = value
        out["name"] = self.name
        if self.load_csv is not None:
            out["load_csv"] = self.load_csv
        if self.price_csv is not None:
            out["price_csv"] = self.price_csv
        return dict(sorted(out.items()))


def load_schema() -> tp.Dict[str, tp.Any]:
    with resources.files("pilepilot.config").joinpath("schema.json").open("r") as file:
        return tp.cast(tp.Dict[str, tp.Any], json.load(file))


_TYPE_NAMES = {
    "integer": "an integer",
    "number": "a number",
    "boolean": "a boolean",
    "string": "a string",
    "object": "a table",
}


def _format_error(error: jsonschema.ValidationError, instance: tp.Mapping[str, tp.Any]) -> str:
    path = ".".join(str(p) for p in error.absolute_path) or "root"
    schema = error.schema if isinstance(error.schema, dict) else {}
    kind = error.validator
    if kind == "additionalProperties":
        known = set(schema.get("properties", {}))
        unknown = sorted(key for key in instance if key not in known)
        return "[{}]: Unknown property: '{}'.".format(path, unknown[0] if unknown else "?")
    if kind == "type":
        return "[{}]: Expected {}.".format(path, _TYPE_NAMES.get(str(error.validator_value), error.validator_value))
    if kind == "enum":
        return "[{}]: Expected one of {}.".format(path, list(tp.cast(tp.List[str], error.validator_value)))
    if kind == "minimum":
        word = "greater than" if schema.get("exclusiveMinimum") else "at least"
        return "[{}]: Must be {} {}.".format(path, word, error.validator_value)
    if kind == "maximum":
        word = "less than" if schema.get("exclusiveMaximum") else "at most"
        return "[{}]: Must be {} {}.".format(path, word, error.validator_value)
    if kind == "pattern":
        return "[{}]: Must match '{}'.".format(path, error.validator_value)
    return "[{}]: {}.".format(path, error.message.rstrip("."))


def validate_flat(flat: tp.Mapping[str, tp.Any]) -> None:
    """Raise `ConfigError` for the first schema violation, ordered by key."""
    validator = jsonschema.Draft4Validator(load_schema())
    errors = sorted(
        validator.iter_errors(dict(flat)),
        key=lambda e: ([str(p) for p in e.absolute_path], str(e.validator)),
    )
    if errors:
        raise ConfigError(_format_error(errors[0], flat))


def read_config_file(path: PathLike) -> tp.Dict[str, tp.Any]:
    """Parse a flat TOML config. Trace paths resolve relative to the file's directory."""
    path = pathlib.Path(path)
    try:
        with open(path, "rb") as file:
            data = tomllib.load(file)
    except FileNotFoundError as e:
        raise ConfigError("[root]: Config file '{}' doesn't exist.".format(path)) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("[root]: Invalid toml in '{}': {}.".format(path, e)) from e
    for key in ("load_csv", "price_csv"):
        if isinstance(data.get(key), str):
            data[key] = str((path.parent / data[key]).resolve())
    return data


def build_run_config(
    path: tp.Optional[PathLike] = None,
    overrides: tp.Optional[tp.Mapping[str, tp.Any]] = None,
) -> RunConfig:
    """Defaults, then the file at `path`, then every non-None entry of `overrides`."""
    flat: tp.Dict[str, tp.Any] = {}
    if path is not None:
        flat.update(read_config_file(path))
    if overrides:
        flat.update({key: value for key, value in overrides.items() if value is not None})
    validate_flat(flat)
    return RunConfig.from_flat(flat)
