"""`manifest.json`: everything needed to re-execute a run, written into its output directory."""

import dataclasses
import datetime as dt
import json
import os
import pathlib
import typing as tp

from .. import __version__
from ..errors import ConfigError
from .traces import TraceDigest

MANIFEST_FILE = "manifest.json"
ERROR_FILE = "error.json"


def utc_now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


@dataclasses.dataclass
class RunManifest:
    """The resolved configuration and options of one command plus what it produced.

    `config` is the full flat configuration (every key, trace paths absolute), so a run can be
    repeated without the original config file or flags.
    """

    command: str
    config: tp.Dict[str, tp.Any]
    seed: int
    traces: TraceDigest
    options: tp.Dict[str, tp.Any] = dataclasses.field(default_factory=dict)
    outputs: tp.List[str] = dataclasses.field(default_factory=list)
    started_at: str = dataclasses.field(default_factory=utc_now)
    finished_at: tp.Optional[str] = None
    version: str = __version__

    def to_dict(self) -> tp.Dict[str, tp.Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: tp.Mapping[str, tp.Any]) -> "RunManifest":
        try:
            return cls(
                command=data["command"],
                config=dict(data["config"]),
                seed=int(data["seed"]),
                traces=TraceDigest(**data["traces"]),
                options=dict(data.get("options", {})),
                outputs=list(data.get("outputs", [])),
                started_at=data.get("started_at", ""),
                finished_at=data.get("finished_at"),
                version=data.get("version", ""),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("[root]: Not a run manifest: {!r}.".format(e)) from e

    def write(self, directory: tp.Union[str, "os.PathLike[str]"]) -> pathlib.Path:
        path = pathlib.Path(directory) / MANIFEST_FILE
        with open(path, "w") as file:
            json.dump(self.to_dict(), file, indent=2, sort_keys=True)
        return path

    @classmethod
    def read(cls, path: tp.Union[str, "os.PathLike[str]"]) -> "RunManifest":
        """Read a manifest file, or the manifest inside a run directory."""
        path = pathlib.Path(path)
        if path.is_dir():
            path = path / MANIFEST_FILE
        try:
            with open(path, "r") as file:
                data = json.load(file)
        except FileNotFoundError as e:
            raise ConfigError("[root]: No manifest at '{}'.".format(path)) from e
        except json.JSONDecodeError as e:
            raise ConfigError("[root]: Invalid json in '{}': {}.".format(path, e)) from e
        if not isinstance(data, dict):
            raise ConfigError("[root]: Not a run manifest: '{}'.".format(path))
        return cls.from_dict(data)


def write_error(directory: tp.Optional[pathlib.Path], record: tp.Mapping[str, str]) -> None:
    """Drop `error.json` into `directory` if it exists."""
    if directory is None or not directory.is_dir():
        return
    with open(directory / ERROR_FILE, "w") as file:
        json.dump(dict(record), file, indent=2, sort_keys=True)
