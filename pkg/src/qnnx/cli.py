"""Command-line entry point: ``qnnx {train,ablate,oracle,variance}``.

Every subcommand reads an optional JSON ``--config`` file; command-line flags
override its values. Exit codes: 0 success, 1 oracle failure, 2 configuration
error, 3 numerical divergence.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import analysis, data, trainer
from .errors import ConfigurationError, QNNError, UsageError
from .model import predict

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2, 3

log = logging.getLogger("qnnx")

TRAIN_KEYS = [f.name for f in dataclasses.fields(trainer.TrainConfig)]
DEFAULT_ABLATION_VARIANTS = ["qnn-exc2", "qnn-exc3", "qnn-exc4", "qnn-a"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(message)


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training")
    g.add_argument("--epochs", type=int)
    g.add_argument("--lr", type=float)
    g.add_argument("--beta1", type=float)
    g.add_argument("--beta2", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--layers", type=int)
    g.add_argument("--qubits", type=int)
    g.add_argument("--entangler", choices=["chain", "ring"])
    g.add_argument("--input-scale", type=float)
    g.add_argument("--poly-degree", type=int)
    g.add_argument("--redundant", type=_bool)
    g.add_argument("--embedding", nargs="+", choices=["sin", "arcsin"])
    g.add_argument("--variables", nargs="+", type=int)
    g.add_argument("--data-mode", choices=[data.MESHGRID, data.RANDOM])
    g.add_argument("--n-train", type=int)
    g.add_argument("--mesh-points", type=int)
    g.add_argument("--batch-size", type=int)
    g.add_argument("--shots", type=int)


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qnnx", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train one variant on one function")
    p.add_argument("--config", type=Path)
    p.add_argument("--variant")
    p.add_argument("--function")
    p.add_argument("--out", type=Path)
    _add_train_flags(p)

    p = sub.add_parser("ablate", help="variants x seeds ablation table")
    p.add_argument("--config", type=Path)
    p.add_argument("--function", nargs="+", dest="functions")
    p.add_argument("--variants", nargs="+")
    p.add_argument("--seeds", nargs="+", type=int)
    p.add_argument("--out", type=Path)
    _add_train_flags(p)

    p = sub.add_parser("oracle", help="span, rank and error-floor checks")
    p.add_argument("--config", type=Path)
    p.add_argument("--only", choices=analysis.ORACLE_GROUPS)
    p.add_argument("--max-qubits", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--drop-basis", help="remove one element of the two-qubit dictionary")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("variance", help="repeat a run over seeds and histogram the test error")
    p.add_argument("--config", type=Path)
    p.add_argument("--variant")
    p.add_argument("--function")
    p.add_argument("--runs", type=int)
    p.add_argument("--fixed-seed", action="store_true", default=None)
    p.add_argument("--bins", type=int)
    p.add_argument("--out", type=Path)
    _add_train_flags(p)
    return parser


def _settings(args: argparse.Namespace) -> dict:
    """Config file values overridden by every flag given on the command line."""
    settings: dict = {}
    if args.config is not None:
        try:
            settings = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(settings, dict):
            raise ConfigurationError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if key not in ("config", "command", "verbose") and value is not None:
            settings[key] = value
    return settings


def _train_config(settings: dict) -> trainer.TrainConfig:
    return trainer.TrainConfig.from_dict({k: settings[k] for k in TRAIN_KEYS if k in settings})


def _reject_unknown(settings: dict, allowed: set[str]) -> None:
    unknown = set(settings) - allowed - set(TRAIN_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config keys {sorted(unknown)}")


def _stamp(chash: str, seed) -> str:
    return f"config_hash={chash} seed={seed}"


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n")


def _fmt(v) -> str:
    return f"{v:.17g}" if isinstance(v, float) else str(v)


def cmd_train(settings: dict) -> int:
    _reject_unknown(settings, {"variant", "function", "out"})
    for key in ("variant", "function"):
        if key not in settings:
            raise ConfigurationError(f"train needs --{key}")
    config = _train_config(settings)
    out = Path(settings.get("out", "out/train"))
    model, train_set, test_set, chash = trainer.prepare(settings["variant"], settings["function"], config)
    report = trainer.train(model, train_set, test_set, config, chash=chash)
    out.mkdir(parents=True, exist_ok=True)
    payload = {"config": config.to_dict(), **report.to_dict(include_timing=False)}
    _write_json(out / "report.json", payload)
    _write_json(out / "timing.json", {"config_hash": chash, "wall_seconds": report.wall_seconds})
    if report.diverged:
        log.error("training diverged: %s", report.message)
        return EXIT_DIVERGED
    y_pred = predict(model, report.param_set(), test_set.inputs)
    data.write_csv(out / "fit.csv", test_set.inputs, {"y_true": test_set.targets, "y_pred": y_pred},
                   comment=_stamp(chash, report.seed))
    from .plots import fit_chart
    fit_chart(out / "fit.svg", test_set.inputs, test_set.targets, y_pred,
              title=f"{report.variant} on {report.function}, test MAE {report.test_mae:.3g}")
    print(f"{report.variant} {report.function} seed={report.seed} "
          f"train_mae={report.train_mae:.4g} test_mae={report.test_mae:.4g} -> {out}")
    return EXIT_OK


def cmd_ablate(settings: dict) -> int:
    _reject_unknown(settings, {"functions", "function", "variants", "seeds", "out"})
    functions = settings.get("functions") or settings.get("function")
    if not functions:
        raise ConfigurationError("ablate needs --function")
    if isinstance(functions, str):
        functions = [functions]
    variants = settings.get("variants", DEFAULT_ABLATION_VARIANTS)
    seeds = settings.get("seeds", [0, 1, 2, 3, 4])
    config = _train_config(settings)
    for v in variants:
        trainer.variant_key(v)
    for f in functions:
        data.get_target(f)
    out = Path(settings.get("out", "out/ablate"))
    reports = []
    for f in functions:
        reports += trainer.ablate(f, variants, seeds, config)
    rows = trainer.ablation_table(reports)
    chash = trainer.config_hash({"functions": list(functions), "variants": list(variants),
                                 "seeds": list(seeds), **config.to_dict()})
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "table1.csv", "w", newline="") as fh:
        fh.write(f"# {_stamp(chash, ' '.join(map(str, seeds)))}\n")
        writer = csv.writer(fh)
        writer.writerow(trainer.TABLE_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in trainer.TABLE_COLUMNS])
    for row in rows:
        print(f"{row['variant']:>9} {row['function']:>5} seed={row['seed']} "
              f"train={row['train_mae']:.3e} test={row['test_mae']:.3e} ratio={row['ratio_vs_qnn_a']:.3g}")
    return EXIT_DIVERGED if any(r.diverged for r in reports) else EXIT_OK


def cmd_oracle(settings: dict) -> int:
    _reject_unknown(settings, {"only", "max_qubits", "trials", "seed", "drop_basis", "out"})
    rows = analysis.run_oracles(only=settings.get("only"), max_qubits=settings.get("max_qubits", 3),
                                n_trials=settings.get("trials", 50), seed=settings.get("seed", 0),
                                drop_basis=settings.get("drop_basis"))
    out = Path(settings.get("out", "out/oracle"))
    out.mkdir(parents=True, exist_ok=True)
    chash = trainer.config_hash({k: settings.get(k) for k in ("only", "max_qubits", "trials", "seed", "drop_basis")})
    with open(out / "oracle.csv", "w", newline="") as fh:
        fh.write(f"# {_stamp(chash, settings.get('seed', 0))}\n")
        writer = csv.writer(fh)
        writer.writerow(["name", "value", "relation", "threshold", "passed"])
        for r in rows:
            writer.writerow([r.name, _fmt(float(r.value)), r.relation, _fmt(float(r.threshold)),
                             "pass" if r.passed else "FAIL"])
            print(f"{'pass' if r.passed else 'FAIL'}  {r.name:<32} {r.value:.6g} {r.relation} {r.threshold:g}")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def cmd_variance(settings: dict) -> int:
    _reject_unknown(settings, {"variant", "function", "runs", "fixed_seed", "bins", "out"})
    for key in ("variant", "function"):
        if key not in settings:
            raise ConfigurationError(f"variance needs --{key}")
    config = _train_config(settings)
    runs = settings.get("runs", 150)
    summary = trainer.variance_study(settings["variant"], settings["function"], runs, config,
                                     fixed_seed=bool(settings.get("fixed_seed", False)),
                                     bins=settings.get("bins", 20))
    chash = trainer.config_hash({"variant": summary.variant, "function": summary.function, "runs": runs,
                                 "fixed_seed": bool(settings.get("fixed_seed", False)),
                                 "bins": settings.get("bins", 20), **config.to_dict()})
    out = Path(settings.get("out", "out/variance"))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "hist.csv", "w", newline="") as fh:
        fh.write(f"# {_stamp(chash, config.seed)} mean={summary.mean:.17g} variance={summary.variance:.17g}\n")
        writer = csv.writer(fh)
        writer.writerow(["bin_low", "bin_high", "count"])
        for lo, hi, n in zip(summary.bin_edges[:-1], summary.bin_edges[1:], summary.counts):
            writer.writerow([_fmt(lo), _fmt(hi), n])
    with open(out / "runs.csv", "w", newline="") as fh:
        fh.write(f"# {_stamp(chash, config.seed)}\n")
        writer = csv.writer(fh)
        writer.writerow(["seed", "train_mae", "test_mae"])
        for r in summary.reports:
            writer.writerow([r.seed, _fmt(r.train_mae), _fmt(r.test_mae)])
    from .plots import histogram_chart
    histogram_chart(out / "hist.svg", summary.bin_edges, summary.counts,
                    title=f"{summary.variant} on {summary.function}, {runs} runs")
    print(f"{summary.variant} {summary.function} runs={runs} mean={summary.mean:.4g} "
          f"variance={summary.variance:.4g} -> {out}")
    return EXIT_DIVERGED if any(r.diverged for r in summary.reports) else EXIT_OK


COMMANDS = {"train": cmd_train, "ablate": cmd_ablate, "oracle": cmd_oracle, "variance": cmd_variance}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return COMMANDS[args.command](_settings(args))
    except (ConfigurationError, UsageError) as exc:
        print(f"qnnx: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QNNError as exc:
        print(f"qnnx: {exc}", file=sys.stderr)
        return EXIT_DIVERGED if isinstance(exc, FloatingPointError) else EXIT_FAIL
    except TypeError as exc:
        # wrong value types in a config file surface here
        print(f"qnnx: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
