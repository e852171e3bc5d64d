"""Command-line entry point.

Subcommands cover the full pipeline: ``landscape`` (dataset -> stacks),
``train`` (stacks or raw signals -> cross-validated model + report),
``select`` (gate report -> kept levels), ``reconstruct`` (signals ->
simplified signals) and ``experiment`` (named end-to-end protocols).

Every run writes its artifacts plus a ``manifest.json`` recording the
command, parameters, input hashes and outputs.  On failure the partial
outputs of the run are removed.  A JSON config file (``--config``) can
supply defaults for any flag of the chosen subcommand; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, data, kernels
from .landscape import (
    LandscapeGrid,
    load_stacks,
    save_stacks,
    stack_dataset,
    stack_to_csv,
    stacks_matrix,
)
from .model import (
    FitReport,
    ModelConfig,
    TrainConfig,
    gating_csv,
    load_report,
    save_model,
    save_report,
    train,
)
from .reconstruction import reconstruct_signal
from .selection import load_selection, save_selection, select_levels
from .signal import Signal
from .svg import bar_chart, line_plot
from .util import atomic_write_text, sha256_file

PRESETS = (
    "synthetic-attribution",
    "synthetic-shift",
    "ecg5000-table2",
    "mitbih-table3",
    "mitbih-shift",
)


@dataclass
class RunManifest:
    """What a CLI run did: command, parameters, input hashes, outputs."""

    command: str
    arguments: dict
    seed: int | None
    started: str
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    finished: str = ""
    backend: str = kernels.BACKEND
    version: str = ""

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "started": self.started,
            "finished": self.finished,
            "kernel_backend": self.backend,
            "version": self.version,
        }


class _Run:
    """Tracks the artifacts of one invocation so failures clean up."""

    def __init__(self, command: str, args: argparse.Namespace, out_dir: Path):
        self.out_dir = out_dir
        arguments = {
            k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")
        }
        self.manifest = RunManifest(
            command=command,
            arguments={k: (str(v) if isinstance(v, Path) else v) for k, v in arguments.items()},
            seed=getattr(args, "seed", None),
            started=time.strftime("%Y-%m-%dT%H:%M:%S"),
            version=__version__,
        )

    def add_input(self, path: str | Path) -> None:
        self.manifest.inputs[str(path)] = sha256_file(path)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.manifest.outputs.append(str(p))
        return p

    def discard_partial(self) -> None:
        for name in self.manifest.outputs:
            p = Path(name)
            if p.exists():
                p.unlink()
            sidecar = p.with_name(p.name + ".json")
            if sidecar.exists():
                sidecar.unlink()

    def write_manifest(self) -> None:
        self.manifest.finished = time.strftime("%Y-%m-%dT%H:%M:%S")
        atomic_write_text(
            self.out_dir / "manifest.json", json.dumps(self.manifest.to_dict(), indent=2) + "\n"
        )


def _int_tuple(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _load_input_dataset(args: argparse.Namespace, run: _Run) -> data.Dataset:
    path = Path(args.input)
    if path.is_file():
        run.add_input(path)
    if args.format == "ucr":
        return data.load_ucr(path)
    if args.format == "mitbih":
        return data.load_mitbih_csv(path)
    if args.format == "npz":
        return data.load_dataset(path)
    raise ValueError(f"unknown input format {args.format!r}")


def _model_config(rows: int, cols: int, classes: int, args: argparse.Namespace,
                  gating: bool) -> ModelConfig:
    return ModelConfig(
        input_shape=(rows, cols),
        num_classes=classes,
        conv_channels=args.channels,
        dense_hidden=args.hidden,
        use_gating=gating,
        seed=args.seed,
    )


def _train_config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        lr_drop_every=args.lr_drop_every,
        lr_drop_factor=args.lr_drop_factor,
        folds=args.folds,
    )


def _summary(name: str, report: FitReport) -> str:
    return (f"{name}: accuracy {report.mean_accuracy:.4f} "
            f"+- {report.std_accuracy:.4f} over {len(report.fold_accuracies)} folds")


def cmd_landscape(args: argparse.Namespace, run: _Run) -> None:
    dataset = _load_input_dataset(args, run)
    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(
        dataset.signals, grid=grid, levels=args.levels, normalize=args.normalize
    )
    save_stacks(run.path("stacks.bin"), stacks, labels=dataset.labels())
    run.manifest.outputs.append(str(run.out_dir / "stacks.bin.json"))
    stack_to_csv(run.path("stack0.csv"), stacks[0])
    line_plot(
        run.path("stack0.svg"),
        grid.values,
        {f"level {k}": stacks[0].levels[k - 1] for k in range(1, min(args.levels, 5) + 1)},
        title=f"{dataset.name}: landscape stack of signal 0",
        xlabel="t",
        ylabel="level value",
    )
    print(f"{dataset.name}: {len(stacks)} stacks of {args.levels} x {args.grid} "
          f"(normalized={args.normalize})")


def cmd_train(args: argparse.Namespace, run: _Run) -> None:
    if args.stacks is None and args.input is None:
        raise ValueError("train needs --stacks or --input")
    if args.stacks:
        run.add_input(args.stacks)
        stacks, labels = load_stacks(args.stacks)
        if labels is None:
            raise ValueError(f"{args.stacks} carries no labels; cannot train")
        inputs = stacks_matrix(stacks)
        rows, cols = inputs.shape[1], inputs.shape[2]
        gating = args.gating
    else:
        dataset = _load_input_dataset(args, run)
        inputs = dataset.matrix()[:, None, :]
        labels = dataset.labels()
        rows, cols = 1, dataset.length
        gating = False
    classes = int(labels.max()) + 1
    model_config = _model_config(rows, cols, classes, args, gating)
    model, report = train(inputs, labels, model_config, _train_config(args))
    save_report(run.path("report.json"), report)
    save_model(run.path("model.npz"), model)
    if report.gating_mean is not None:
        gating_csv(run.path("gates.csv"), report)
        bar_chart(
            run.path("gates.svg"),
            labels=[str(k) for k in range(1, len(report.gating_mean) + 1)],
            values=report.gating_mean,
            errors=report.gating_std,
            title="mean gate value per landscape level",
            xlabel="level",
            ylabel="gate",
        )
    print(_summary("train", report))


def cmd_select(args: argparse.Namespace, run: _Run) -> None:
    run.add_input(args.report)
    report = load_report(args.report)
    if report.gating_mean is None:
        raise ValueError(f"{args.report} has no gating statistics to select from")
    result = select_levels(report.gating_mean)
    save_selection(run.path("selection.json"), result)
    print(f"selected levels {list(result.selected)} (cut {result.cut_index}, rule {result.rule})")


def cmd_reconstruct(args: argparse.Namespace, run: _Run) -> None:
    dataset = _load_input_dataset(args, run)
    if args.selection:
        run.add_input(args.selection)
        levels = load_selection(args.selection).selected
    else:
        levels = tuple(args.levels_list)
    simplified = []
    point_counts = []
    for s in dataset.signals:
        rec = reconstruct_signal(s, level_indices=levels, density=args.density)
        simplified.append(rec.simplified)
        point_counts.append(len(rec.points))
    out = data.Dataset.from_signals(simplified, name=f"{dataset.name}+rec")
    data.save_dataset(run.path("reconstructed.npz"), out)
    for i in range(min(args.plot_count, len(dataset))):
        line_plot(
            run.path(f"reconstruction{i}.svg"),
            np.arange(dataset.length),
            {"original": dataset.signals[i].values,
             "reconstructed": simplified[i].values},
            title=f"{dataset.name}: signal {i} from levels {list(levels)}",
            xlabel="sample",
            ylabel="value",
        )
    print(f"reconstructed {len(out)} signals from levels {list(levels)}; "
          f"mean kept points {np.mean(point_counts):.2f}")


def _experiment_json(run: _Run, payload: dict) -> None:
    atomic_write_text(run.path("experiment.json"), json.dumps(payload, indent=2) + "\n")


def _report_cells(report: FitReport) -> dict:
    return {
        "mean_accuracy": report.mean_accuracy,
        "std_accuracy": report.std_accuracy,
        "fold_accuracies": list(report.fold_accuracies),
    }


def _run_synthetic_attribution(args: argparse.Namespace, run: _Run) -> dict:
    dataset = data.make_dip_dataset(count=args.count, seed=args.seed)
    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(dataset.signals, grid=grid, levels=args.levels, normalize=True)
    inputs = stacks_matrix(stacks)
    config = _model_config(args.levels, args.grid, dataset.class_count, args, gating=True)
    model, report = train(inputs, dataset.labels(), config, _train_config(args))
    save_report(run.path("report.json"), report)
    save_model(run.path("model.npz"), model)
    gating_csv(run.path("gates.csv"), report)
    result = select_levels(report.gating_mean)
    save_selection(run.path("selection.json"), result)
    bar_chart(
        run.path("gates.svg"),
        labels=[str(k) for k in range(1, args.levels + 1)],
        values=report.gating_mean,
        errors=report.gating_std,
        title="gate values on the dip-depth benchmark",
        xlabel="level",
        ylabel="gate",
    )
    print(_summary("landscapes(gated)", report))
    print(f"selected levels {list(result.selected)} via {result.rule}")
    return {
        "dataset": dataset.name,
        "landscapes_gated": _report_cells(report),
        "gating_mean": list(report.gating_mean),
        "selection": result.to_dict(),
    }


def _run_synthetic_shift(args: argparse.Namespace, run: _Run) -> dict:
    dataset = data.make_dip_dataset(
        count=args.count,
        seed=args.seed,
        positional=True,
        depth_ranges=((0.20, 0.35), (0.10, 0.25)),
    )
    padded = data.shift_augment(dataset, 2 * dataset.length, seed=args.seed)
    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(dataset.signals, grid=grid, levels=args.levels, normalize=True)
    stacks_p = stack_dataset(padded.signals, grid=grid, levels=args.levels, normalize=True)
    identical = all(
        np.array_equal(a.levels, b.levels) for a, b in zip(stacks, stacks_p)
    )

    tcfg = _train_config(args)
    raw_cfg = _model_config(1, dataset.length, dataset.class_count, args, gating=False)
    _, raw_report = train(dataset.matrix()[:, None, :], dataset.labels(), raw_cfg, tcfg)
    rawp_cfg = _model_config(1, padded.length, padded.class_count, args, gating=False)
    _, rawp_report = train(padded.matrix()[:, None, :], padded.labels(), rawp_cfg, tcfg)
    land_cfg = _model_config(args.levels, args.grid, dataset.class_count, args, gating=False)
    _, land_report = train(stacks_matrix(stacks), dataset.labels(), land_cfg, tcfg)

    bar_chart(
        run.path("accuracies.svg"),
        labels=["raw", "raw shifted", "landscapes"],
        values=[raw_report.mean_accuracy, rawp_report.mean_accuracy,
                land_report.mean_accuracy],
        errors=[raw_report.std_accuracy, rawp_report.std_accuracy,
                land_report.std_accuracy],
        title="random zero-padding to double length",
        ylabel="accuracy",
    )
    print(_summary("raw", raw_report))
    print(_summary("raw shifted", rawp_report))
    print(_summary("landscapes", land_report))
    print(f"landscape stacks bit-identical under padding: {identical}")
    return {
        "dataset": dataset.name,
        "raw": _report_cells(raw_report),
        "raw_shifted": _report_cells(rawp_report),
        "landscapes": _report_cells(land_report),
        "stacks_bit_identical": identical,
        "accuracy_drop": raw_report.mean_accuracy - rawp_report.mean_accuracy,
    }


def _locate(data_dir: Path, candidates: tuple[str, ...]) -> Path:
    for name in candidates:
        p = data_dir / name
        if p.exists():
            return p
    raise FileNotFoundError(
        f"none of {candidates} found under {data_dir}; "
        "mount the dataset files there or pass --data-dir"
    )


def _run_ecg5000(args: argparse.Namespace, run: _Run) -> dict:
    src = _locate(Path(args.data_dir), ("ECG5000", "ECG5000_TRAIN.tsv", "ECG5000_TRAIN.txt"))
    if not src.is_dir():
        src = src.parent
    dataset = data.load_ucr(src, name="ECG5000")
    tcfg = _train_config(args)

    raw_cfg = _model_config(1, dataset.length, dataset.class_count, args, gating=False)
    _, raw_report = train(dataset.matrix()[:, None, :], dataset.labels(), raw_cfg, tcfg)

    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(dataset.signals, grid=grid, levels=args.levels, normalize=True)
    inputs = stacks_matrix(stacks)
    gated_cfg = _model_config(args.levels, args.grid, dataset.class_count, args, gating=True)
    _, land_report = train(inputs, dataset.labels(), gated_cfg, tcfg)
    gating_csv(run.path("gates.csv"), land_report)

    result = select_levels(land_report.gating_mean)
    save_selection(run.path("selection.json"), result)
    kept = [k - 1 for k in result.selected]
    sel_cfg = _model_config(len(kept), args.grid, dataset.class_count, args, gating=False)
    _, sel_report = train(inputs[:, kept, :], dataset.labels(), sel_cfg, tcfg)

    bar_chart(
        run.path("accuracies.svg"),
        labels=["raw", "landscapes", f"selected ({len(kept)})"],
        values=[raw_report.mean_accuracy, land_report.mean_accuracy, sel_report.mean_accuracy],
        errors=[raw_report.std_accuracy, land_report.std_accuracy, sel_report.std_accuracy],
        title="ECG5000",
        ylabel="accuracy",
    )
    for name, report in (("raw", raw_report), ("landscapes", land_report),
                         ("selected", sel_report)):
        print(_summary(name, report))
    print(f"selected levels {list(result.selected)} via {result.rule}")
    return {
        "dataset": "ECG5000",
        "raw": _report_cells(raw_report),
        "landscapes_gated": _report_cells(land_report),
        "selected": _report_cells(sel_report),
        "selection": result.to_dict(),
    }


def _run_mitbih_table(args: argparse.Namespace, run: _Run) -> dict:
    src = _locate(Path(args.data_dir), ("mitbih_train.csv",))
    dataset = data.load_mitbih_csv(src)
    tcfg = _train_config(args)

    raw_cfg = _model_config(1, dataset.length, dataset.class_count, args, gating=False)
    _, raw_report = train(dataset.matrix()[:, None, :], dataset.labels(), raw_cfg, tcfg)

    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(dataset.signals, grid=grid, levels=args.levels, normalize=True)
    inputs = stacks_matrix(stacks)
    gated_cfg = _model_config(args.levels, args.grid, dataset.class_count, args, gating=True)
    _, land_report = train(inputs, dataset.labels(), gated_cfg, tcfg)
    gating_csv(run.path("gates.csv"), land_report)

    result = select_levels(land_report.gating_mean)
    save_selection(run.path("selection.json"), result)
    kept = [k - 1 for k in result.selected]
    sel_cfg = _model_config(len(kept), args.grid, dataset.class_count, args, gating=False)
    _, sel_report = train(inputs[:, kept, :], dataset.labels(), sel_cfg, tcfg)

    simplified = [
        reconstruct_signal(s, level_indices=result.selected, density=args.density).simplified
        for s in dataset.signals
    ]
    rec = data.Dataset.from_signals(simplified, name=f"{dataset.name}+rec")
    rec_cfg = _model_config(1, rec.length, rec.class_count, args, gating=False)
    _, rec_report = train(rec.matrix()[:, None, :], rec.labels(), rec_cfg, tcfg)

    for name, report in (("raw", raw_report), ("landscapes", land_report),
                         ("selected", sel_report), ("reconstructed", rec_report)):
        print(_summary(name, report))
    return {
        "dataset": dataset.name,
        "raw": _report_cells(raw_report),
        "landscapes_gated": _report_cells(land_report),
        "selected": _report_cells(sel_report),
        "reconstructed": _report_cells(rec_report),
        "selection": result.to_dict(),
    }


def _run_mitbih_shift(args: argparse.Namespace, run: _Run) -> dict:
    src = _locate(Path(args.data_dir), ("mitbih_train.csv",))
    dataset = data.load_mitbih_csv(src)
    padded = data.shift_augment(dataset, 2 * dataset.length, seed=args.seed)
    tcfg = _train_config(args)

    raw_cfg = _model_config(1, dataset.length, dataset.class_count, args, gating=False)
    _, raw_report = train(dataset.matrix()[:, None, :], dataset.labels(), raw_cfg, tcfg)
    rawp_cfg = _model_config(1, padded.length, padded.class_count, args, gating=False)
    _, rawp_report = train(padded.matrix()[:, None, :], padded.labels(), rawp_cfg, tcfg)

    grid = LandscapeGrid(points=args.grid)
    stacks = stack_dataset(dataset.signals, grid=grid, levels=args.levels, normalize=True)
    stacks_p = stack_dataset(padded.signals, grid=grid, levels=args.levels, normalize=True)
    identical = all(np.array_equal(a.levels, b.levels) for a, b in zip(stacks, stacks_p))
    land_cfg = _model_config(args.levels, args.grid, dataset.class_count, args, gating=False)
    _, land_report = train(stacks_matrix(stacks), dataset.labels(), land_cfg, tcfg)

    for name, report in (("raw", raw_report), ("raw shifted", rawp_report),
                         ("landscapes", land_report)):
        print(_summary(name, report))
    print(f"landscape stacks bit-identical under padding: {identical}")
    return {
        "dataset": dataset.name,
        "raw": _report_cells(raw_report),
        "raw_shifted": _report_cells(rawp_report),
        "landscapes": _report_cells(land_report),
        "stacks_bit_identical": identical,
        "accuracy_drop": raw_report.mean_accuracy - rawp_report.mean_accuracy,
    }


def cmd_experiment(args: argparse.Namespace, run: _Run) -> None:
    runners = {
        "synthetic-attribution": _run_synthetic_attribution,
        "synthetic-shift": _run_synthetic_shift,
        "ecg5000-table2": _run_ecg5000,
        "mitbih-table3": _run_mitbih_table,
        "mitbih-shift": _run_mitbih_shift,
    }
    payload = runners[args.preset](args, run)
    payload["preset"] = args.preset
    payload["seed"] = args.seed
    _experiment_json(run, payload)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", type=Path, required=True, help="output directory")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--config", type=Path, default=None,
                    help="JSON file with defaults for this subcommand's flags")


def _add_train_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--epochs", type=int, default=240)
    sp.add_argument("--batch", type=int, default=64)
    sp.add_argument("--lr", type=float, default=0.01)
    sp.add_argument("--lr-drop-every", type=int, default=100)
    sp.add_argument("--lr-drop-factor", type=float, default=5.0)
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--channels", type=_int_tuple, default=(16, 32, 64))
    sp.add_argument("--hidden", type=int, default=64)


def _add_stack_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--levels", type=int, default=10)
    sp.add_argument("--grid", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topogate",
        description="sublevel-set persistence landscapes with a gated classifier",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.subcommands = {}
    sub = parser.add_subparsers(dest="command", required=True)

    sp = parser.subcommands["landscape"] = sub.add_parser(
        "landscape", help="turn a dataset into landscape stacks"
    )
    sp.add_argument("--input", type=Path, required=True)
    sp.add_argument("--format", choices=("ucr", "mitbih", "npz"), default="ucr")
    _add_stack_flags(sp)
    sp.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_landscape)

    sp = parser.subcommands["train"] = sub.add_parser(
        "train", help="cross-validate a model on stacks or raw signals"
    )
    sp.add_argument("--stacks", type=Path, default=None, help="stacks.bin from `landscape`")
    sp.add_argument("--input", type=Path, default=None, help="raw dataset (alternative)")
    sp.add_argument("--format", choices=("ucr", "mitbih", "npz"), default="ucr")
    sp.add_argument("--gating", action=argparse.BooleanOptionalAction, default=True,
                    help="gate stack rows (stack mode only)")
    _add_train_flags(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_train)

    sp = parser.subcommands["select"] = sub.add_parser(
        "select", help="pick landscape levels from a gate report"
    )
    sp.add_argument("--report", type=Path, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_select)

    sp = parser.subcommands["reconstruct"] = sub.add_parser(
        "reconstruct", help="simplify signals from selected levels"
    )
    sp.add_argument("--input", type=Path, required=True)
    sp.add_argument("--format", choices=("ucr", "mitbih", "npz"), default="ucr")
    sp.add_argument("--selection", type=Path, default=None, help="selection.json")
    sp.add_argument("--levels-list", type=_int_tuple, default=(1, 2, 3),
                    help="levels to use when no selection file is given")
    sp.add_argument("--density", type=int, default=10)
    sp.add_argument("--plot-count", type=int, default=3)
    _add_common(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = parser.subcommands["experiment"] = sub.add_parser(
        "experiment", help="run a named end-to-end protocol"
    )
    sp.add_argument("--preset", choices=PRESETS, required=True)
    sp.add_argument("--data-dir", type=Path, default=Path("data"),
                    help="directory holding dataset files (real-data presets)")
    sp.add_argument("--count", type=int, default=600, help="synthetic dataset size")
    sp.add_argument("--density", type=int, default=10)
    _add_stack_flags(sp)
    _add_train_flags(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_experiment)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    overrides = json.loads(Path(args.config).read_text())
    if not isinstance(overrides, dict):
        raise ValueError(f"{args.config}: config must be a JSON object")
    unknown = set(overrides) - set(vars(args))
    if unknown:
        raise ValueError(f"{args.config}: unknown config keys {sorted(unknown)}")
    # installing config values as subparser defaults makes them behave like
    # defaults: flags given on the command line still win on the re-parse
    parser.subcommands[args.command].set_defaults(
        **{
            key: tuple(value) if isinstance(value, list) else value
            for key, value in overrides.items()
        }
    )
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run = _Run(args.command, args, out_dir)
    try:
        args.func(args, run)
    except (ValueError, OSError) as exc:
        run.discard_partial()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    run.write_manifest()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
