"""The `pilepilot` command line.

Config values resolve as defaults < `--config` file < flags. Usage errors exit 2. Any other
failure exits 1 with a JSON error record on stderr (and in `error.json` when the output directory
already exists); unexpected exceptions also log their traceback at debug level.
"""

import argparse
import json
import logging
import pathlib
import sys
import typing as tp

from .. import __version__
from ..config import build_run_config
from ..errors import PilePilotError
from ..evalkit import POLICY_NAMES
from ..logs import setup_logging
from ..simenv import SCENARIOS
from .commands import (
    COMMANDS,
    DEFAULT_RHOS,
    Invocation,
    cmd_ablate,
    cmd_eval,
    cmd_gen_traces,
    cmd_oracle,
    cmd_rho_sweep,
    cmd_train,
    load_run_traces,
    rerun_invocation,
    run_root,
)
from .manifest import RunManifest, write_error
from .traces import export_trace, generate_synthetic_traces, ingest_traces

logger = logging.getLogger(__name__)

__all__ = [
    "COMMANDS",
    "Invocation",
    "RunManifest",
    "build_parser",
    "cli",
    "cmd_ablate",
    "cmd_eval",
    "cmd_gen_traces",
    "cmd_oracle",
    "cmd_rho_sweep",
    "cmd_train",
    "export_trace",
    "generate_synthetic_traces",
    "ingest_traces",
    "load_run_traces",
    "main",
]

# Flag spelling -> config value.
ABLATION_FLAGS = {
    "full": "full",
    "no-ca": "no_critic_aug",
    "no-high": "no_high",
    "no-either": "no_either",
}


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError("'{}' isn't an integer".format(text)) from e
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1, got {}".format(value))
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError("'{}' isn't an integer".format(text)) from e
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative, got {}".format(value))
    return value


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError("'{}' isn't a number".format(text)) from e
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be non-negative, got {}".format(text))
    return value


def _run_flags() -> argparse.ArgumentParser:
    """Flags shared by every command that resolves a run configuration."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug.")
    parser.add_argument("--config", help="Flat TOML config file.")
    parser.add_argument("--name", help="Run name, the output directory under the run root.")
    parser.add_argument("--out", help="Output directory, overrides the run root and name.")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--scenario", choices=SCENARIOS)
    parser.add_argument("--piles", type=_positive_int, dest="n_piles", help="Number of piles N.")
    parser.add_argument("--episodes", type=_non_negative_int)
    parser.add_argument("--ablation", choices=list(ABLATION_FLAGS))
    parser.add_argument("--baseline", choices=["none", "ddpg"])
    parser.add_argument("--rho", type=_non_negative_float, help="Critic augmentation weight.")
    parser.add_argument("--load-csv", help="Building load trace, `timestamp,value` in kW.")
    parser.add_argument("--price-csv", help="Price trace, `timestamp,value` in USD/kWh.")
    parser.add_argument("--synthetic-days", type=_positive_int)
    parser.add_argument("--eval-days", type=_positive_int)
    parser.add_argument("--train-days", type=_non_negative_int)
    parser.add_argument(
        "--discharge",
        action=argparse.BooleanOptionalAction,
        dest="allow_discharge",
        default=None,
        help="Allow piles to discharge EVs back into the building.",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilepilot",
        description="Workplace V2G charging: simulate, train, evaluate.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s {}".format(__version__))
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    flags = _run_flags()

    commands.add_parser("train", parents=[flags], help="Train, checkpoint and evaluate.")
    eval_parser = commands.add_parser("eval", parents=[flags], help="Evaluate a policy.")
    eval_parser.add_argument("--policy", choices=POLICY_NAMES, default="learned")
    eval_parser.add_argument("--checkpoint", help="Checkpoint directory for the learned policy.")
    commands.add_parser("ablate", parents=[flags], help="Full model plus its three ablations.")
    commands.add_parser("oracle", parents=[flags], help="Price-greedy schedule and its metrics.")
    commands.add_parser("gen-traces", parents=[flags], help="Write synthetic trace CSVs.")
    sweep_parser = commands.add_parser("rho-sweep", parents=[flags], help="Train across rho values.")
    sweep_parser.add_argument(
        "--rhos", type=_non_negative_float, nargs="+", default=list(DEFAULT_RHOS)
    )

    rerun_parser = commands.add_parser("rerun", help="Re-execute a run from its manifest.")
    rerun_parser.add_argument("manifest", help="manifest.json, or the run directory holding it.")
    rerun_parser.add_argument("--out", help="Output directory, defaults to '<name>-rerun'.")
    rerun_parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _check_combinations(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.command == "rerun":
        return
    if args.synthetic_days is not None and (args.load_csv or args.price_csv):
        parser.error("--synthetic-days can't be combined with --load-csv/--price-csv")
    if bool(args.load_csv) != bool(args.price_csv):
        parser.error("--load-csv and --price-csv must be given together")
    if args.command in ("ablate", "rho-sweep") and args.ablation is not None:
        parser.error("--ablation has no effect on {}".format(args.command))
    if args.command == "rho-sweep" and args.rho is not None:
        parser.error("rho-sweep takes its values from --rhos, not --rho")
    if args.baseline == "ddpg" and args.ablation not in (None, "full"):
        parser.error("--baseline ddpg has no hierarchy to ablate")
    if args.command == "eval" and args.checkpoint is not None and args.policy != "learned":
        parser.error("--checkpoint only applies to --policy learned")


def _overrides(args: argparse.Namespace) -> tp.Dict[str, tp.Any]:
    overrides = {
        "name": args.name,
        "seed": args.seed,
        "scenario": args.scenario,
        "n_piles": args.n_piles,
        "episodes": args.episodes,
        "ablation": ABLATION_FLAGS[args.ablation] if args.ablation else None,
        "baseline": args.baseline,
        "rho": args.rho,
        "synthetic_days": args.synthetic_days,
        "eval_days": args.eval_days,
        "train_days": args.train_days,
        "allow_discharge": args.allow_discharge,
    }
    for key in ("load_csv", "price_csv"):
        path = getattr(args, key)
        overrides[key] = str(pathlib.Path(path).resolve()) if path else None
    return overrides


def _options(args: argparse.Namespace) -> tp.Dict[str, tp.Any]:
    if args.command == "eval":
        checkpoint = str(pathlib.Path(args.checkpoint).resolve()) if args.checkpoint else None
        return {"policy": args.policy, "checkpoint": checkpoint}
    if args.command == "rho-sweep":
        return {"rhos": list(args.rhos)}
    return {}


def main(argv: tp.Optional[tp.Sequence[str]] = None) -> int:
    """Run one command, returning its exit code. argparse exits 2 itself on usage errors."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_combinations(parser, args)
    setup_logging(args.verbose)

    out_dir: tp.Optional[pathlib.Path] = pathlib.Path(args.out) if args.out else None
    try:
        if args.command == "rerun":
            if out_dir is None:
                name = RunManifest.read(args.manifest).config.get("name", "run")
                out_dir = run_root() / "{}-rerun".format(name)
            inv = rerun_invocation(args.manifest, out_dir)
        else:
            cfg = build_run_config(args.config, _overrides(args))
            if out_dir is None:
                out_dir = run_root() / cfg.name
            inv = Invocation(command=args.command, config=cfg, out_dir=out_dir, options=_options(args))
        logger.info("Running '%s' into '%s'.", inv.command, inv.out_dir)
        return COMMANDS[inv.command](inv)
    except PilePilotError as e:
        return _report_failure(e, out_dir)
    except Exception as e:
        logger.debug("Unexpected failure.", exc_info=True)
        return _report_failure(e, out_dir)


def _report_failure(error: Exception, out_dir: tp.Optional[pathlib.Path]) -> int:
    record = {"error": type(error).__name__, "message": str(error)}
    try:
        write_error(out_dir, record)
    except OSError as e:
        logger.warning("Couldn't write the error record into '%s': %s", out_dir, e)
    print(json.dumps(record), file=sys.stderr)
    return 1


def cli() -> None:
    sys.exit(main())
