"""Command-line front end.

Two subcommands: ``analyze`` runs the stationary or event-locked analysis
on a series file and emits a JSON result document; ``synth`` generates
synthetic data with planted directed structure from a network spec file.

Exit codes: 0 success, 2 validation or input errors, 3 numerical errors.
Warnings and diagnostics go to stderr; result documents go to the output
file or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io as shrio
from .errors import NumericalError, PipelineError, ShrError, ValidationError
from .pipeline import AnalysisConfig, analyze_event_locked, analyze_stationary
from .synth import expected_roles, generate, spec_from_dict

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _exit_code(err: ShrError) -> int:
    cause = err.cause if isinstance(err, PipelineError) else err
    return EXIT_NUMERICAL if isinstance(cause, NumericalError) else EXIT_VALIDATION


def _parse_tau(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ValidationError(f"--tau expects A:B with integer frames, got {text!r}")


def _read_channel_orders(path) -> tuple[int, ...]:
    try:
        lines = Path(path).read_text(encoding="utf-8").split()
    except OSError as err:
        raise ValidationError(f"cannot read channel orders file: {err}")
    try:
        return tuple(int(tok) for tok in lines)
    except ValueError as err:
        raise ValidationError(f"channel orders file must hold integers: {err}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shrflow",
        description="Localize senders, hubs, and receivers of information "
        "flow in multichannel time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run an analysis on a recording")
    analyze.add_argument("--input", required=True, help="series CSV, or epoch container")
    analyze.add_argument(
        "--mode", choices=("stationary", "event_locked"), default="stationary"
    )
    analyze.add_argument("--order", type=int, required=True, help="global AR order")
    analyze.add_argument(
        "--channel-orders",
        help="file with one per-channel AR order per line (stationary only)",
    )
    analyze.add_argument("--svd", choices=("full", "power", "auto"), default="auto")
    analyze.add_argument(
        "--tol", type=float, default=None, help="power-iteration tolerance"
    )
    analyze.add_argument("--tau", help="target-time range A:B, 1-based inclusive")
    analyze.add_argument("--output", help="result document path (default: stdout)")
    analyze.add_argument("--scores-csv", help="also write a tidy score table here")
    analyze.add_argument(
        "--no-timing", action="store_true", help="omit timing metadata from the document"
    )
    analyze.set_defaults(func=cmd_analyze)

    synth = sub.add_parser("synth", help="generate synthetic data from a network spec")
    synth.add_argument("--spec", required=True, help="network spec JSON file")
    synth.add_argument("--output", required=True, help="CSV path or epoch directory")
    synth.add_argument("--seed", type=int, default=None, help="override the spec seed")
    synth.add_argument(
        "--epochs", type=int, default=None, help="override the spec epoch count"
    )
    synth.set_defaults(func=cmd_synth)
    return parser


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    config_kwargs = {
        "global_order": args.order,
        "svd_mode": args.svd,
    }
    if args.tol is not None:
        config_kwargs["power_tol"] = args.tol
    if args.tau is not None:
        if args.mode != "event_locked":
            raise ValidationError("--tau applies to event_locked mode only")
        config_kwargs["tau_range"] = _parse_tau(args.tau)
    if args.channel_orders is not None:
        if args.mode != "stationary":
            raise ValidationError("--channel-orders applies to stationary mode only")
        config_kwargs["per_channel_orders"] = _read_channel_orders(args.channel_orders)
    config = AnalysisConfig(**config_kwargs)

    if args.mode == "stationary":
        series = shrio.read_series_csv(args.input)
        result = analyze_stationary(series, config)
        echo = shrio.config_echo(
            config,
            n_channels=series.n_channels,
            n_frames=series.n_frames,
            n_epochs=None,
            labels=series.channel_labels,
        )
        elapsed = None if args.no_timing else time.perf_counter() - started
        doc = shrio.stationary_document(result, echo, elapsed=elapsed)
    else:
        epochs = shrio.read_epochs(args.input)
        sweep = analyze_event_locked(epochs, config)
        echo = shrio.config_echo(
            config,
            n_channels=epochs.n_channels,
            n_frames=epochs.n_frames,
            n_epochs=epochs.n_epochs,
            labels=epochs.channel_labels,
        )
        elapsed = None if args.no_timing else time.perf_counter() - started
        doc = shrio.event_locked_document(sweep, echo, elapsed=elapsed)

    text = shrio.dump_document(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.scores_csv:
        shrio.write_scores_csv(doc, args.scores_csv)
    if doc["degenerate_channels"]:
        print(
            f"warning: degenerate (zero-variance) channels: "
            f"{doc['degenerate_channels']}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_synth(args) -> int:
    spec_path = Path(args.spec)
    try:
        data = json.loads(spec_path.read_text(encoding="utf-8"))
    except OSError as err:
        raise ValidationError(f"cannot read spec file: {err}")
    except json.JSONDecodeError as err:
        raise ValidationError(f"{spec_path}: {err}")
    if args.seed is not None:
        data["seed"] = args.seed
    if args.epochs is not None:
        data["n_epochs"] = args.epochs
    spec = spec_from_dict(data)
    roles = expected_roles(spec)
    print("channel  role", file=sys.stderr)
    for channel in sorted(roles):
        print(f"{channel:<8d} {roles[channel].value}", file=sys.stderr)
    output = generate(spec)
    if spec.n_epochs is None:
        shrio.write_series_csv(output, args.output)
    else:
        shrio.write_epochs_dir(output, args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShrError as err:
        print(f"error: {err}", file=sys.stderr)
        return _exit_code(err)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
