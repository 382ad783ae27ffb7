"""Sliced NSGT: whole-signal analysis by 50%-overlapping tapered slices.

Slice ``k`` covers samples ``[k*hop, k*hop + slice_length)`` with
``hop = slice_length // 2``.  Its taper rises around ``slice_length/4`` and
falls around ``3*slice_length/4`` with raised-cosine transitions of
``transition_length`` samples, so tapers of neighboring slices sum to one.
The outer edge of the first and last slice is left flat, which makes the
tapers a partition of unity over the whole padded signal.  Each tapered
slice goes through the block NSGT of :mod:`slicqt.nsgt`, and bands with
equal time resolution are stacked into groups.

Layout of a group tensor: ``(..., bins_in_group, slices, time_steps)``
where ``...`` are the leading (channel) axes of the input signal.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, ShapeError
from .nsgt import NsgtCoefficients, NsgtPlan, build_plan, forward_nsgt, inverse_nsgt
from .scales import FrequencyScale, build_scale

__all__ = [
    "SlicqParams",
    "Group",
    "RaggedSpectrogram",
    "slice_count",
    "slice_tapers",
    "slice_signal",
    "forward_slicq",
    "inverse_slicq",
    "overlap_add_groups",
    "save_ragged",
    "load_ragged",
]

DEFAULT_SLICE_LENGTH = 18060
DEFAULT_TRANSITION_LENGTH = 4514


def check_slicing(slice_length, transition_length) -> None:
    sl, tr = slice_length, transition_length
    if int(sl) != sl or sl <= 0 or sl % 4:
        raise DomainError(f"slice_length must be a positive multiple of 4, got {sl}")
    if int(tr) != tr or tr < 0 or tr % 2:
        raise DomainError(f"transition_length must be a non-negative even integer, got {tr}")
    if sl < 4 * tr:
        raise DomainError(f"slice_length {sl} must be at least 4 x transition_length {tr}")


@dataclass(frozen=True)
class SlicqParams:
    scale: FrequencyScale
    sample_rate: float = 44100.0
    slice_length: int = DEFAULT_SLICE_LENGTH
    transition_length: int = DEFAULT_TRANSITION_LENGTH

    def __post_init__(self):
        check_slicing(self.slice_length, self.transition_length)
        if not np.isfinite(self.sample_rate) or self.sample_rate <= 0:
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def hop(self) -> int:
        return self.slice_length // 2

    @property
    def plan(self) -> NsgtPlan:
        return _cached_plan(self.scale, float(self.sample_rate), int(self.slice_length))

    def describe(self) -> dict:
        return {
            **self.scale.describe(),
            "sample_rate": float(self.sample_rate),
            "slice_length": int(self.slice_length),
            "transition_length": int(self.transition_length),
        }

    @classmethod
    def from_dict(cls, d: dict) -> SlicqParams:
        scale = build_scale(d["kind"], d["fmin"], d["fmax"], d["bins"])
        return cls(scale, d["sample_rate"], int(d["slice_length"]), int(d["transition_length"]))


@functools.lru_cache(maxsize=32)
def _cached_plan(scale, sample_rate, block_length):
    return build_plan(scale, sample_rate, block_length)


@dataclass(eq=False)
class Group:
    """Contiguous bands that share one time resolution."""

    start: int
    stop: int
    time_steps: int
    tensor: np.ndarray

    @property
    def bins(self) -> range:
        return range(self.start, self.stop)


@dataclass(eq=False)
class RaggedSpectrogram:
    groups: list
    total_slices: int
    original_length: int

    @property
    def n_bands(self) -> int:
        return sum(g.stop - g.start for g in self.groups)

    def layout(self) -> list:
        return [(g.start, g.stop, g.time_steps) for g in self.groups]

    def map(self, fn) -> RaggedSpectrogram:
        """Apply ``fn`` to every group tensor, keeping the layout."""
        groups = [Group(g.start, g.stop, g.time_steps, fn(g.tensor)) for g in self.groups]
        return RaggedSpectrogram(groups, self.total_slices, self.original_length)


def group_layout(plan: NsgtPlan) -> list:
    """Split bands into maximal contiguous runs of equal ``time_steps``."""
    steps = plan.time_steps
    edges = [0] + [k for k in range(1, len(steps)) if steps[k] != steps[k - 1]] + [len(steps)]
    return [(a, b, int(steps[a])) for a, b in zip(edges[:-1], edges[1:])]


def slice_count(length: int, slice_length: int) -> int:
    """Number of slices for a signal of ``length`` samples."""
    hop = slice_length // 2
    return max(1, -(-length // hop) - 1)


def padded_length(length: int, slice_length: int) -> int:
    return (slice_count(length, slice_length) + 1) * (slice_length // 2)


def _taper(slice_length, transition_length):
    quarter = slice_length // 4
    half_tr = transition_length // 2
    w = np.zeros(slice_length)
    w[quarter + half_tr:3 * quarter - half_tr] = 1.0
    if transition_length:
        ramp = np.sin(0.5 * np.pi * (np.arange(transition_length) + 0.5) / transition_length) ** 2
        w[quarter - half_tr:quarter + half_tr] = ramp
        w[3 * quarter - half_tr:3 * quarter + half_tr] = ramp[::-1]
    return w


def slice_tapers(params: SlicqParams, n_slices: int) -> np.ndarray:
    """Per-slice tapers, shape ``(n_slices, slice_length)``."""
    w = _taper(params.slice_length, params.transition_length)
    tapers = np.tile(w, (n_slices, 1))
    half = params.hop
    tapers[0, :half] = 1.0
    tapers[-1, half:] = 1.0
    return tapers


def _check_signal(signal):
    x = np.asarray(signal, dtype=float)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise DomainError("signal is empty")
    return x


def slice_signal(signal, params: SlicqParams) -> np.ndarray:
    """Cut ``signal`` into tapered slices.

    Returns an array of shape ``(..., n_slices, slice_length)``.  The signal
    is zero padded at the end to ``(n_slices + 1) * hop`` samples.
    """
    x = _check_signal(signal)
    n = x.shape[-1]
    s = slice_count(n, params.slice_length)
    pad = padded_length(n, params.slice_length) - n
    xp = np.pad(x, [(0, 0)] * (x.ndim - 1) + [(0, pad)])
    frames = np.lib.stride_tricks.sliding_window_view(xp, params.slice_length, axis=-1)
    return frames[..., ::params.hop, :] * slice_tapers(params, s)


def _overlap_add_halves(segments, hop):
    """Sum ``(..., S, 2*hop)`` segments placed ``hop`` apart into ``(..., (S+1)*hop)``."""
    lead = segments.shape[:-2]
    s = segments.shape[-2]
    halves = segments.reshape(lead + (s, 2, hop))
    out = np.zeros(lead + (s + 1, hop), dtype=segments.dtype)
    out[..., :s, :] += halves[..., 0, :]
    out[..., 1:, :] += halves[..., 1, :]
    return out.reshape(lead + ((s + 1) * hop,))


def forward_slicq(params: SlicqParams, signal) -> RaggedSpectrogram:
    x = _check_signal(signal)
    plan = params.plan
    slices = slice_signal(x, params)
    coefs = forward_nsgt(plan, slices).coefs
    groups = [
        Group(a, b, m, np.stack(coefs[a:b], axis=-3)) for a, b, m in group_layout(plan)
    ]
    return RaggedSpectrogram(groups, slices.shape[-2], x.shape[-1])


def inverse_slicq(params: SlicqParams, spec: RaggedSpectrogram) -> np.ndarray:
    plan = params.plan
    expected = group_layout(plan)
    if spec.layout() != expected:
        raise ShapeError("spectrogram group layout does not match the parameters")
    s = spec.total_slices
    if s != slice_count(spec.original_length, params.slice_length):
        raise ShapeError(
            f"{s} slices inconsistent with original length {spec.original_length}"
        )
    bands = []
    lead = None
    for g in spec.groups:
        t = g.tensor
        if t.ndim < 3 or t.shape[-3:] != (g.stop - g.start, s, g.time_steps):
            raise ShapeError(
                f"group {g.start}:{g.stop} has shape {t.shape}, expected "
                f"(..., {g.stop - g.start}, {s}, {g.time_steps})"
            )
        if lead is None:
            lead = t.shape[:-3]
        elif t.shape[:-3] != lead:
            raise ShapeError("groups disagree on leading (channel) axes")
        bands.extend(np.moveaxis(t, -3, 0))
    slices = inverse_nsgt(plan, NsgtCoefficients(bands, plan))
    return _overlap_add_halves(slices, params.hop)[..., :spec.original_length]


def overlap_add_groups(spec: RaggedSpectrogram) -> list:
    """Flatten each group's slices onto one continuous time axis.

    Adjacent slices overlap by half their frames, and overlapping frames are
    summed.  The result has shape ``(..., bins_in_group, time_steps *
    (total_slices + 1) / 2)`` per group.  This is an analysis view only:
    there is no inverse.
    """
    out = []
    for g in spec.groups:
        t = g.tensor
        if g.time_steps % 2:
            raise ShapeError(f"group {g.start}:{g.stop} has odd time_steps {g.time_steps}")
        out.append(_overlap_add_halves(t, g.time_steps // 2))
    return out


def save_ragged(path, spec: RaggedSpectrogram, params: SlicqParams) -> None:
    """Write a ragged spectrogram to an ``.npz`` container.

    Entries: ``header`` (JSON text with params, slice count, original length
    and group list) and ``group_{i}`` (float64 array of shape ``(..., bins,
    slices, time_steps, 2)`` holding interleaved real/imag values).
    """
    header = {
        "format": "slicqt-ragged",
        "version": 1,
        "params": params.describe(),
        "total_slices": int(spec.total_slices),
        "original_length": int(spec.original_length),
        "groups": [
            {"start": g.start, "stop": g.stop, "time_steps": g.time_steps, "shape": list(g.tensor.shape)}
            for g in spec.groups
        ],
    }
    arrays = {
        f"group_{i}": np.ascontiguousarray(g.tensor, dtype=complex).view(float).reshape(
            g.tensor.shape + (2,)
        )
        for i, g in enumerate(spec.groups)
    }
    with open(path, "wb") as fh:
        np.savez(fh, header=np.array(json.dumps(header)), **arrays)


def load_ragged(path):
    """Read a file written by :func:`save_ragged`; returns ``(spec, params)``."""
    try:
        with np.load(path, allow_pickle=False) as data:
            header = json.loads(str(data["header"]))
            if header.get("format") != "slicqt-ragged":
                raise FormatError(f"{path}: not a slicqt ragged spectrogram")
            groups = []
            for i, g in enumerate(header["groups"]):
                raw = data[f"group_{i}"]
                tensor = np.ascontiguousarray(raw).view(complex)[..., 0]
                groups.append(Group(g["start"], g["stop"], g["time_steps"], tensor))
    except (KeyError, ValueError, OSError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{path}: {exc}") from exc
    params = SlicqParams.from_dict(header["params"])
    return RaggedSpectrogram(groups, header["total_slices"], header["original_length"]), params
