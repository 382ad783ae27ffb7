"""Seeded random search over sliced-transform parameters.

Every iteration draws exactly three values from a single PCG64 stream
(scale kind, bin count, fmin), so a trace is fully determined by the seed
and the first records never change when more iterations are requested.
Configurations whose frame cannot be built still consume their draws and
are recorded as failures.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DatasetError, DomainError, FrameError, ShapeError
from .oracle import SlicqTransform, evaluate_dataset
from .scales import ScaleKind, build_scale
from .slicq import DEFAULT_SLICE_LENGTH, DEFAULT_TRANSITION_LENGTH, SlicqParams, check_slicing

__all__ = [
    "SearchSpace",
    "SearchConfig",
    "SearchRecord",
    "SearchReport",
    "sample_params",
    "run_search",
    "load_report",
]

log = logging.getLogger(__name__)

TIE_BREAK = "earliest-iteration"


@dataclass(frozen=True)
class SearchSpace:
    kinds: tuple = (ScaleKind.BARK, ScaleKind.LOGCQ, ScaleKind.MEL)
    bins: tuple = (12, 348)
    fmin: tuple = (10.0, 130.0)
    fmax: float = 22050.0

    def __post_init__(self):
        kinds = tuple(ScaleKind.parse(k) for k in self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if not kinds:
            raise DomainError("search space needs at least one scale kind")
        lo, hi = self.bins
        if int(lo) != lo or int(hi) != hi or lo > hi or lo < 2:
            raise DomainError(f"invalid bins range {self.bins}")
        lo, hi = self.fmin
        if not 0 < lo <= hi:
            raise DomainError(f"invalid fmin range {self.fmin}")
        if hi >= self.fmax:
            raise DomainError(f"fmin upper bound {hi} must be below fmax {self.fmax}")

    def describe(self) -> dict:
        return {
            "kinds": [k.value for k in self.kinds],
            "bins": [int(b) for b in self.bins],
            "fmin": [float(f) for f in self.fmin],
            "fmax": float(self.fmax),
        }


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 60
    seed: int = 0
    sample_rate: float = 44100.0
    slice_length: int = DEFAULT_SLICE_LENGTH
    transition_length: int = DEFAULT_TRANSITION_LENGTH
    targets: tuple | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise DomainError(f"iterations must be >= 1, got {self.iterations}")
        check_slicing(self.slice_length, self.transition_length)


def sample_params(space: SearchSpace, rng: np.random.Generator, config: SearchConfig | None = None):
    """Draw one :class:`SlicqParams`: uniform kind, uniform bins, log-uniform fmin."""
    config = config or SearchConfig()
    k = int(rng.integers(len(space.kinds)))
    bins = int(rng.integers(space.bins[0], space.bins[1] + 1))
    lo, hi = math.log(space.fmin[0]), math.log(space.fmin[1])
    fmin = math.exp(rng.uniform(lo, hi)) if hi > lo else float(space.fmin[0])
    scale = build_scale(space.kinds[k], fmin, space.fmax, bins)
    return SlicqParams(scale, config.sample_rate, config.slice_length, config.transition_length)


@dataclass
class SearchRecord:
    iteration: int
    params: dict
    status: str
    per_target: dict = field(default_factory=dict)
    median_sdr: float | None = None
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "iteration": self.iteration,
                "params": self.params,
                "status": self.status,
                "per_target": self.per_target,
                "median_sdr": self.median_sdr,
                "error": self.error,
            },
            sort_keys=True,
        )


@dataclass
class SearchReport:
    seed: int
    space: dict
    records: list
    tie_break: str = TIE_BREAK

    @property
    def scored(self) -> list:
        return [r for r in self.records if r.status == "ok" and r.median_sdr is not None]

    @property
    def best(self) -> SearchRecord | None:
        best = None
        for r in self.scored:
            # strict comparison keeps the earliest record on ties
            if best is None or r.median_sdr > best.median_sdr:
                best = r
        return best

    def to_jsonl(self) -> str:
        header = json.dumps(
            {"seed": self.seed, "space": self.space, "tie_break": self.tie_break},
            sort_keys=True,
        )
        return "\n".join([header] + [r.to_json() for r in self.records]) + "\n"

    def summary(self) -> str:
        lines = [
            f"seed {self.seed}, {len(self.records)} iterations, "
            f"{len(self.scored)} scored, {len(self.records) - len(self.scored)} failed",
        ]
        for r in self.records:
            p = r.params
            head = f"{r.iteration:4d}  {p['kind']:<6s} bins={p['bins']:<4d} fmin={p['fmin']:8.3f}"
            if r.status == "ok":
                lines.append(f"{head}  median {r.median_sdr:8.3f} dB")
            else:
                lines.append(f"{head}  failed: {r.error}")
        b = self.best
        if b is None:
            lines.append("best: none")
        else:
            p = b.params
            lines.append(
                f"best: iteration {b.iteration}, {p['kind']} {p['bins']} bins "
                f"{p['fmin']:.3f}-{p['fmax']:.1f} Hz, median {b.median_sdr:.3f} dB"
            )
        return "\n".join(lines) + "\n"

    def write(self, prefix) -> tuple:
        """Write ``<prefix>.jsonl`` (trace) and ``<prefix>.txt`` (summary)."""
        prefix = Path(prefix)
        trace = prefix.with_name(prefix.name + ".jsonl")
        text = prefix.with_name(prefix.name + ".txt")
        trace.write_text(self.to_jsonl())
        text.write_text(self.summary())
        return trace, text


def load_report(path) -> SearchReport:
    lines = Path(path).read_text().splitlines()
    header = json.loads(lines[0])
    records = [SearchRecord(**json.loads(line)) for line in lines[1:] if line.strip()]
    return SearchReport(header["seed"], header["space"], records, header.get("tie_break", TIE_BREAK))


def _track_source(tracks):
    """Return a zero-argument callable yielding the stem sets afresh.

    Directories (or a dataset root) are reloaded on every call so that only
    one track is in memory at a time.
    """
    from .audio_io import find_stem_dirs, load_stem_set

    if isinstance(tracks, (str, Path)):
        tracks = find_stem_dirs(tracks)
    tracks = list(tracks)
    if not tracks:
        raise DatasetError("no stem sets to evaluate")
    if all(isinstance(t, (str, Path)) for t in tracks):
        return lambda: (load_stem_set(d) for d in tracks)
    return lambda: iter(tracks)


def run_search(space: SearchSpace, config: SearchConfig, tracks, resume: SearchReport | None = None):
    """Evaluate ``config.iterations`` random configurations on ``tracks``.

    ``tracks`` is a sequence of :class:`StemSet`, a sequence of stem
    directories, or a dataset root.  When
    ``resume`` is given its records are kept and the random stream is
    replayed past them before sampling continues.
    """
    source = _track_source(tracks)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    records = []
    if resume is not None:
        if resume.seed != config.seed or resume.space != space.describe():
            raise DomainError("resume report was produced with a different seed or space")
        records = list(resume.records[:config.iterations])
        for _ in records:
            sample_params(space, rng, config)
    for it in range(len(records), config.iterations):
        params = sample_params(space, rng, config)
        desc = params.scale.describe()
        try:
            params.plan
            result = evaluate_dataset(source(), SlicqTransform(params), config.targets)
        except (FrameError, DomainError, ShapeError) as exc:
            log.warning("iteration %d: %s", it, exc)
            records.append(SearchRecord(it, desc, "failed", error=str(exc)))
            continue
        log.info("iteration %d: %s median %s", it, desc, result.median_sdr)
        records.append(SearchRecord(it, desc, "ok", result.per_target, result.median_sdr))
    return SearchReport(config.seed, space.describe(), records)

