"""Command-line interface: ``slicqt {spectrogram,roundtrip,oracle,search}``.

Exit codes: 0 success, 1 roundtrip below 100 dB, 2 usage, 3 I/O,
4 file format or consistency, 5 numerical (frame/domain/shape), 6 dataset.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import render
from .audio_io import find_stem_dirs, load_stem_set, read_wav
from .errors import (
    AudioIOError,
    ConsistencyError,
    DatasetError,
    DomainError,
    FormatError,
    FrameError,
    ShapeError,
)
from .oracle import TARGETS, SlicqTransform, StftTransform, evaluate_dataset
from .scales import ScaleKind, build_scale
from .search import SearchConfig, SearchSpace, load_report, run_search
from .slicq import DEFAULT_SLICE_LENGTH, DEFAULT_TRANSITION_LENGTH, SlicqParams
from .stft import StftParams

log = logging.getLogger("slicqt")

EXIT_OK = 0
EXIT_BELOW_THRESHOLD = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_NUMERIC = 5
EXIT_DATASET = 6

DATASET_ENV = ("SLICQT_DATASET_ROOT", "MUSDB_PATH")
ROUNDTRIP_THRESHOLD_DB = 100.0


class UsageError(Exception):
    pass


def _add_transform_flags(p, stft=True):
    g = p.add_argument_group("transform")
    choices = ["slicq", "stft"] if stft else ["slicq"]
    g.add_argument("--transform", choices=choices, default="slicq")
    g.add_argument("--scale", default="bark", help="bark, cqlog, mel or linear")
    g.add_argument("--bins", type=int, default=262)
    g.add_argument("--fmin", type=float, default=32.9)
    g.add_argument("--fmax", type=float, default=None, help="default: Nyquist")
    g.add_argument("--slice-len", type=int, default=DEFAULT_SLICE_LENGTH)
    g.add_argument("--trans-len", type=int, default=DEFAULT_TRANSITION_LENGTH)
    g.add_argument("--window", type=int, default=4096, help="STFT window length")
    g.add_argument("--hop", type=int, default=1024, help="STFT hop")


def _transform(args, sample_rate):
    """Validate transform flags; plan construction errors surface later."""
    try:
        if args.transform == "stft":
            return StftTransform(StftParams(args.window, args.hop))
        fmax = args.fmax if args.fmax is not None else sample_rate / 2
        scale = build_scale(args.scale, args.fmin, fmax, args.bins)
        return SlicqTransform(SlicqParams(scale, sample_rate, args.slice_len, args.trans_len))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _dataset_root(path):
    if path:
        return path
    for var in DATASET_ENV:
        if os.environ.get(var):
            return os.environ[var]
    raise UsageError(f"no dataset path given and none of {', '.join(DATASET_ENV)} is set")


def _targets(value):
    if not value:
        return None
    names = [t.strip() for t in value.split(",") if t.strip()]
    bad = [t for t in names if t not in TARGETS]
    if bad:
        raise UsageError(f"unknown targets {bad}; choose from {', '.join(TARGETS)}")
    return tuple(names)


def cmd_spectrogram(args):
    wav = read_wav(args.input)
    mono = wav.samples.mean(axis=0)
    tf = _transform(args, wav.sample_rate)
    if isinstance(tf, SlicqTransform):
        db, axes = render.slicq_image(tf.params, mono)
    else:
        db, axes = render.stft_image(tf.params, mono, wav.sample_rate)
    out = Path(args.output)
    render.save_png(out, db)
    sidecar = out.with_suffix(".txt")
    sidecar.write_text(render.sidecar_text(db, axes))
    print(f"wrote {out} ({db.shape[1]}x{db.shape[0]}) and {sidecar}")
    return EXIT_OK


def cmd_roundtrip(args):
    wav = read_wav(args.input)
    x = wav.samples
    tf = _transform(args, wav.sample_rate)
    y = tf.inverse(tf.forward(x), x.shape[-1])
    err = float(np.sum((x - y) ** 2))
    ref = float(np.sum(x**2))
    snr = np.inf if err == 0 else 10 * np.log10(max(ref, 1e-300) / err)
    print(f"SNR: {snr:.2f} dB")
    return EXIT_OK if snr >= ROUNDTRIP_THRESHOLD_DB else EXIT_BELOW_THRESHOLD


def cmd_oracle(args):
    root = _dataset_root(args.path)
    targets = _targets(args.targets)
    dirs = find_stem_dirs(root, args.split)
    rate = load_stem_set(dirs[0]).sample_rate
    tf = _transform(args, rate)
    if isinstance(tf, SlicqTransform):
        tf.params.plan
    tracks = (load_stem_set(d) for d in dirs)
    result = evaluate_dataset(tracks, tf, targets)
    text = result.summary() + "\n"
    sys.stdout.write(text)
    if args.report:
        prefix = Path(args.report)
        prefix.with_name(prefix.name + ".txt").write_text(text)
        with open(prefix.with_name(prefix.name + ".jsonl"), "w") as fh:
            for rec in result.records():
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_search(args):
    root = _dataset_root(args.path)
    targets = _targets(args.targets)
    try:
        space = SearchSpace(
            kinds=tuple(ScaleKind.parse(k) for k in args.kinds.split(",")),
            bins=tuple(args.bins_range),
            fmin=tuple(args.fmin_range),
            fmax=args.fmax,
        )
        config = SearchConfig(
            iterations=args.iterations,
            seed=args.seed,
            slice_length=args.slice_len,
            transition_length=args.trans_len,
            targets=targets,
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    tracks = find_stem_dirs(root, args.split)
    resume = load_report(args.resume) if args.resume else None
    report = run_search(space, config, tracks, resume=resume)
    trace, text = report.write(args.out)
    sys.stdout.write(report.summary())
    print(f"wrote {trace} and {text}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="slicqt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrogram", help="render a log-magnitude spectrogram PNG")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="PNG path; axes go to <stem>.txt")
    _add_transform_flags(p)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("roundtrip", help="forward + inverse SNR check")
    p.add_argument("input")
    _add_transform_flags(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("oracle", help="noisy-phase oracle SDR on a stem dir or dataset")
    p.add_argument("path", nargs="?", help="stem directory or dataset root")
    p.add_argument("--split", default=None, help="train, valid, train-only or test (MUSDB18-HQ layout)")
    p.add_argument("--targets", default=None, help="comma-separated subset of targets")
    p.add_argument("--report", default=None, help="write <report>.txt and <report>.jsonl")
    _add_transform_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("search", help="random search over sliced-transform parameters")
    p.add_argument("path", nargs="?", help="stem directory or dataset root")
    p.add_argument("--split", default=None)
    p.add_argument("--targets", default=None)
    p.add_argument("--iterations", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kinds", default="bark,cqlog,mel")
    p.add_argument("--bins-range", type=int, nargs=2, default=[12, 348], metavar=("LO", "HI"))
    p.add_argument("--fmin-range", type=float, nargs=2, default=[10.0, 130.0], metavar=("LO", "HI"))
    p.add_argument("--fmax", type=float, default=22050.0)
    p.add_argument("--slice-len", type=int, default=DEFAULT_SLICE_LENGTH)
    p.add_argument("--trans-len", type=int, default=DEFAULT_TRANSITION_LENGTH)
    p.add_argument("--out", default="search", help="write <out>.jsonl and <out>.txt")
    p.add_argument("--resume", default=None, help="continue from an earlier <out>.jsonl")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"slicqt: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AudioIOError as exc:
        print(f"slicqt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FormatError, ConsistencyError) as exc:
        print(f"slicqt: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except FrameError as exc:
        print(f"slicqt: FrameError: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ShapeError) as exc:
        print(f"slicqt: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DatasetError as exc:
        print(f"slicqt: dataset error: {exc}", file=sys.stderr)
        return EXIT_DATASET


if __name__ == "__main__":
    sys.exit(main())
