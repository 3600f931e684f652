"""Command-line front end.

Subcommands: ``synth`` writes a seeded synthetic dataset, ``bench`` runs
leave-one-out benchmarks and emits a results CSV plus figures, ``gridsearch``
tunes the fusion weights, ``recognize`` classifies a single record and
prints JSON, ``inspect`` dumps a dataset header.

Exit codes are stable for scripting: 0 success, 1 runtime or I/O failure,
2 usage or argument error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .dataio import read_dataset, write_dataset, write_results_csv
from .errors import SsvepError
from .evaluation import Method, compare_methods, evaluate_loocv
from .fusion import (
    DEFAULT_GRID_A1,
    DEFAULT_GRID_A2,
    DEFAULT_GRID_B1,
    DEFAULT_GRID_B2,
    FusionParams,
    grid_search_table,
    recognize,
)
from .synthetic import SynthSpec, generate_ssvep
from .templates import build_templates, extract_window, loocv_folds, window_bounds

_CYCLE4_PHASES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


def parse_frequencies(text: str):
    """Parse ``start:step:end`` (end-inclusive within 1e-9) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"frequency range must be start:step:end, got {text!r}")
        start, step, end = (float(p) for p in parts)
        if step <= 0 or end < start:
            raise ValueError(f"bad frequency range {text!r}")
        freqs = []
        value = start
        while value <= end + 1e-9:
            freqs.append(round(value, 9))
            value = start + len(freqs) * step
        return freqs
    return parse_float_list(text)


def parse_float_list(text: str):
    values = [p for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty value list")
    return [float(p) for p in values]


def _params_from_args(args) -> FusionParams:
    return FusionParams(
        a1=args.a1, b1=args.b1, a2=args.a2, b2=args.b2,
        sn=args.sn, tau=args.tau, ridge=args.ridge,
    )


def _add_param_flags(parser, with_weights=True):
    if with_weights:
        parser.add_argument("--a1", type=float, default=FusionParams().a1,
                            help="channel-weight decay rate")
        parser.add_argument("--b1", type=float, default=FusionParams().b1,
                            help="channel-weight floor")
        parser.add_argument("--a2", type=float, default=FusionParams().a2,
                            help="band-weight decay exponent")
        parser.add_argument("--b2", type=float, default=FusionParams().b2,
                            help="band-weight floor")
    parser.add_argument("--sn", type=int, default=FusionParams().sn,
                        help="number of filterbank subbands")
    parser.add_argument("--tau", type=int, default=FusionParams().tau,
                        help="embedding delay in samples")
    parser.add_argument("--ridge", type=float, default=FusionParams().ridge,
                        help="covariance regularization factor")


def _add_window_flags(parser):
    parser.add_argument("--window", type=float, default=1.0, help="analysis window (s)")
    parser.add_argument("--start", type=float, default=None,
                        help="window start (s); default: the dataset's visual latency")


def cmd_synth(args) -> int:
    freqs = parse_frequencies(args.freqs)
    if args.phases == "cycle4":
        phases = tuple(_CYCLE4_PHASES[i % 4] for i in range(len(freqs)))
    else:
        phases = tuple(parse_float_list(args.phases))
    spec = SynthSpec(
        frequencies_hz=tuple(freqs),
        phases_rad=phases,
        n_channels=args.channels,
        n_trials=args.trials,
        duration_s=args.dur,
        sample_rate_hz=args.fs,
        n_harmonics=args.harmonics,
        snr_db=args.snr,
        seed=args.seed,
        mixing=args.mixing,
    )
    dataset = generate_ssvep(spec)
    write_dataset(dataset, args.out)
    print(f"wrote {args.out} shape={dataset.data.shape} seed={args.seed}")
    return 0


def cmd_bench(args) -> int:
    dataset = read_dataset(args.dataset)
    params = _params_from_args(args)
    windows = parse_float_list(args.windows)
    subject = Path(args.dataset).stem

    if args.method == "both":
        reports = compare_methods(dataset, params, windows, args.start, subject, args.threads)
    else:
        method = Method.PROPOSED_FUSION if args.method == "proposed" else Method.BASELINE_SSCCA
        reports = [
            evaluate_loocv(dataset, method, params, w, args.start, subject, args.threads)
            for w in windows
        ]

    rows = []
    print(f"{'window':>8}  {'method':<16} {'accuracy':>8} {'ITR b/min':>10} {'correct':>9}")
    for report in reports:
        row = report.rows[0]
        rows.append(replace(row, subject_id=f"{row.subject_id}:{report.method.value}"))
        print(
            f"{row.window_s:>7.2f}s  {report.method.value:<16} {row.accuracy:>8.3f} "
            f"{row.itr_bits_per_min:>10.2f} {row.n_correct:>5}/{row.n_total}"
        )
    write_results_csv(rows, args.out)
    print(f"wrote {args.out}")

    if not args.no_figures:
        from .report import render_bench_figures

        out_dir = Path(args.out).resolve().parent
        for path in render_bench_figures(reports, dataset.stim_frequencies_hz, out_dir):
            print(f"wrote {path}")
    return 0


def cmd_gridsearch(args) -> int:
    dataset = read_dataset(args.dataset)
    base = FusionParams(sn=args.sn, tau=args.tau, ridge=args.ridge)
    grids = {
        name: parse_float_list(text)
        for name, text in (
            ("a1", args.a1_grid), ("b1", args.b1_grid),
            ("a2", args.a2_grid), ("b2", args.b2_grid),
        )
    }
    params, accuracy, table = grid_search_table(
        dataset, grids["a1"], grids["b1"], grids["a2"], grids["b2"],
        args.window, args.start, base,
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("a1", "b1", "a2", "b2", "accuracy"))
        writer.writerows(table)
    print(f"wrote {args.out} ({len(table)} grid points)")
    print(
        f"best: a1={params.a1:g} b1={params.b1:g} a2={params.a2:g} b2={params.b2:g} "
        f"accuracy={accuracy:.4f}"
    )
    return 0


def cmd_recognize(args) -> int:
    dataset = read_dataset(args.dataset)
    params = _params_from_args(args)
    start = dataset.visual_latency_s if args.start is None else args.start
    if not 0 <= args.trial < dataset.n_trials:
        raise ValueError(f"trial {args.trial} out of range [0, {dataset.n_trials})")
    if not 0 <= args.freq < dataset.n_frequencies:
        raise ValueError(f"freq {args.freq} out of range [0, {dataset.n_frequencies})")
    train = next(
        train for test, train in loocv_folds(dataset.n_trials).folds if test == args.trial
    )
    window = window_bounds(dataset.sample_rate_hz, start, args.window)
    if window[1] > dataset.n_samples:
        raise ValueError(f"window {window} runs past the record")
    bank = build_templates(dataset, train, window)
    epoch = extract_window(dataset, args.trial, args.freq, start, args.window)
    decision = recognize(epoch, bank, dataset.stim_frequencies_hz[0], params)
    print(json.dumps({
        "chosen_index": decision.chosen,
        "chosen_hz": dataset.stim_frequencies_hz[decision.chosen],
        "psi": list(decision.psi),
    }))
    return 0


def cmd_inspect(args) -> int:
    dataset = read_dataset(args.dataset)
    print(f"file:            {args.dataset}")
    print(f"shape:           channels={dataset.n_channels} samples={dataset.n_samples} "
          f"trials={dataset.n_trials} frequencies={dataset.n_frequencies}")
    print(f"sample rate:     {dataset.sample_rate_hz:g} Hz")
    print(f"visual latency:  {dataset.visual_latency_s:g} s")
    print(f"frequencies:     {', '.join(f'{f:g}' for f in dataset.stim_frequencies_hz)} Hz")
    print(f"phases:          {', '.join(f'{p:.4f}' for p in dataset.stim_phases_rad)} rad")
    print(f"channels:        {', '.join(dataset.channel_labels)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssvepfuse",
        description="SSVEP frequency recognition: filterbank CCA with feature fusion",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--freqs", default="9.25:0.5:14.75",
                   help="stimulus frequencies, start:step:end or comma list")
    p.add_argument("--phases", default="cycle4",
                   help="comma list of phases (rad), or 'cycle4' for 0/0.5pi/pi/1.5pi")
    p.add_argument("--channels", type=int, default=8)
    p.add_argument("--trials", type=int, default=15)
    p.add_argument("--dur", type=float, default=4.0, help="record duration (s)")
    p.add_argument("--fs", type=float, default=256.0, help="sample rate (Hz)")
    p.add_argument("--harmonics", type=int, default=3)
    p.add_argument("--snr", type=float, default=math.inf,
                   help="per-channel SNR in dB ('inf' for noiseless)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mixing", choices=("random", "identity"), default="random")
    p.add_argument("--out", required=True, help="output .ssvp path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="leave-one-out benchmark")
    p.add_argument("dataset", help=".ssvp dataset path")
    p.add_argument("--method", choices=("proposed", "baseline", "both"), default="both")
    p.add_argument("--windows", default="1.0", help="comma list of window lengths (s)")
    p.add_argument("--start", type=float, default=None,
                   help="window start (s); default: the dataset's visual latency")
    _add_param_flags(p)
    p.add_argument("--out", default="results.csv", help="results CSV path")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--threads", type=int, default=1, help="fold workers (0 = auto)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gridsearch", help="tune fusion weights by LOOCV accuracy")
    p.add_argument("dataset")
    p.add_argument("--a1-grid", default=",".join(map(str, DEFAULT_GRID_A1)))
    p.add_argument("--b1-grid", default=",".join(map(str, DEFAULT_GRID_B1)))
    p.add_argument("--a2-grid", default=",".join(map(str, DEFAULT_GRID_A2)))
    p.add_argument("--b2-grid", default=",".join(map(str, DEFAULT_GRID_B2)))
    _add_window_flags(p)
    _add_param_flags(p, with_weights=False)
    p.add_argument("--threads", type=int, default=1, help="accepted for symmetry; search is vectorized")
    p.add_argument("--out", default="grid.csv", help="grid table CSV path")
    p.set_defaults(func=cmd_gridsearch)

    p = sub.add_parser("recognize", help="classify one (trial, frequency) record")
    p.add_argument("dataset")
    p.add_argument("--trial", type=int, required=True, help="held-out trial index")
    p.add_argument("--freq", type=int, required=True, help="true frequency index of the record")
    _add_window_flags(p)
    _add_param_flags(p)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("inspect", help="print a dataset header")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SsvepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
