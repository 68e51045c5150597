"""
Command-line front end.

    safe-qml generate  --out data/ --seed 7
    safe-qml train     --data data/synthetic.csv --out models/
    safe-qml evaluate  --data data/synthetic.csv --out results/ --kinds qml,linear
    safe-qml curves    --data data/synthetic.csv --out results/
    safe-qml full-run  --data data/synthetic.csv --out results/ --seed 7

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 any other failure. Diagnostics go to stderr; results only to files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable

from rich.console import Console

from .base import Dataset, SafeQmlError
from .base.errors import ConfigError, DataError
from .config import RunConfig, config_hash, load_run_config, parse_kinds
from .datasets import SyntheticSpec, generate_synthetic, load_dataset_csv, save_dataset_csv
from .evaluation import Scaler, run_experiment
from .log.logger import catch_and_log, enable_console_logging, get_logger
from .models import config_for_kind, save_checkpoint, train_model
from .reporting import emit_report, summary_tables, write_summary

log = get_logger(__name__)

console = Console(stderr=True, highlight=False)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    """Raised instead of argparse's own exit(2)"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load_dataset(config: RunConfig) -> Dataset:
    if config.data is not None:
        return load_dataset_csv(config.data)
    if config.synthetic is not None:
        return generate_synthetic(config.synthetic)
    raise ConfigError("no dataset: pass --data or configure 'synthetic'")


def _cmd_generate(config: RunConfig) -> int:
    spec = config.synthetic or SyntheticSpec(seed=config.seed)
    path = save_dataset_csv(generate_synthetic(spec), Path(config.out) / "synthetic.csv")
    log.success(f"✅ Synthetic dataset written to {path}")
    return EXIT_OK


def _cmd_train(config: RunConfig) -> int:
    dataset = _load_dataset(config)
    scaler = Scaler.fit(dataset.features)
    standardized = dataset.with_features(scaler.transform(dataset.features))
    base = replace(config.train, seed=config.seed)
    for kind in config.kinds:
        train_config = config_for_kind(base, kind)
        model = train_model(kind, standardized, train_config)
        save_checkpoint(model, Path(config.out) / f"model_{kind.value}.json",
                        seed=config.seed, config=train_config, scaler=scaler)
    return EXIT_OK


def _experiment(config: RunConfig, with_curves: bool):
    dataset = _load_dataset(config)
    return run_experiment(
        dataset,
        config.kinds,
        config.train,
        config.curves if with_curves else None,
        seed=config.seed,
        folds=config.folds,
        workers=config.workers,
        config_hash=config_hash(config),
    )


def _cmd_evaluate(config: RunConfig) -> int:
    emit_report(_experiment(config, with_curves=False), config.out)
    return EXIT_OK


def _cmd_curves(config: RunConfig) -> int:
    emit_report(_experiment(config, with_curves=True), config.out)
    return EXIT_OK


@catch_and_log(level="WARNING", message="Could not echo the summary")
def _echo_summary(text: str) -> None:
    console.print(text, markup=False)


def _cmd_full_run(config: RunConfig) -> int:
    report = _experiment(config, with_curves=True)
    emit_report(report, config.out)
    write_summary(report, config.out)
    _echo_summary(summary_tables(report))
    log.success(f"🎉 Full run complete, results in {config.out}")
    return EXIT_OK


COMMANDS: dict[str, dict] = {
    'generate': {
        'help': 'Write a synthetic Gaussian-cluster dataset to <out>/synthetic.csv',
        'handler': _cmd_generate,
    },
    'train': {
        'help': 'Standardize the dataset, train every kind and save checkpoints',
        'handler': _cmd_train,
    },
    'evaluate': {
        'help': 'k-fold predictive metrics and RGA into report.json',
        'handler': _cmd_evaluate,
    },
    'curves': {
        'help': 'k-fold run with all SAFE curves: curve CSVs and report.json',
        'handler': _cmd_curves,
    },
    'full-run': {
        'help': 'Everything: report.json, curve CSVs and summary.txt',
        'handler': _cmd_full_run,
    },
}


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--data", help="dataset CSV (header f0..f{d-1},label)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="root seed")
    common.add_argument("--kinds", help="comma-separated model kinds (qml,mlp,linear)")
    common.add_argument("--folds", type=int, help="number of cross-validation folds")
    common.add_argument("--workers", type=int, help="fold worker processes")
    common.add_argument("--log-level", dest="log_level", help="stderr log level (default WARNING)")

    parser = _ArgumentParser(prog="safe-qml", description="SAFE evaluation of a hybrid quantum classifier")
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    for name, info in COMMANDS.items():
        subparsers.add_parser(name, help=info['help'], parents=[common])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or defaults) with command-line flags on top"""
    config = load_run_config(args.config)
    config = config.with_overrides(
        data=args.data,
        out=args.out,
        seed=args.seed,
        kinds=parse_kinds(args.kinds) if args.kinds else None,
        folds=args.folds,
        workers=args.workers,
        log_level=args.log_level,
    )
    config.check_paths()
    return config


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        console.print(f"error: {e}", markup=False)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    handler: Callable[[RunConfig], int] = COMMANDS[args.command]['handler']
    try:
        enable_console_logging("WARNING")
        config = resolve_config(args)
        enable_console_logging(config.log_level)
        log.info(f"🚀 safe-qml {args.command} (seed={config.seed}, kinds={[k.value for k in config.kinds]})")
        return handler(config)
    except ConfigError as e:
        console.print(f"configuration error: {e}", markup=False)
        return EXIT_USAGE
    except DataError as e:
        console.print(f"data error: {type(e).__name__}: {e}", markup=False)
        return EXIT_DATA
    except SafeQmlError as e:
        log.error(f"❌ {args.command} failed: {type(e).__name__}: {e}")
        console.print(f"error: {type(e).__name__}: {e}", markup=False)
        return EXIT_RUNTIME
    except Exception as e:
        log.exception(f"💥 Unexpected failure in {args.command}")
        console.print(f"unexpected error: {type(e).__name__}: {e}", markup=False)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))
