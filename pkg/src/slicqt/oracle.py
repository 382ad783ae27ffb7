"""Noisy-phase oracle and SDR evaluation.

The oracle keeps the true magnitude of each target's coefficients and
borrows the phase of the mixture's coefficients, then inverts the
transform.  Scores use a global SDR pooled over all samples and channels.
"""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError, ShapeError
from .nsgt import NsgtCoefficients
from .slicq import Group, RaggedSpectrogram, SlicqParams, forward_slicq, inverse_slicq
from .stft import StftParams, stft_forward, stft_inverse

__all__ = [
    "TARGETS",
    "StemSet",
    "SlicqTransform",
    "StftTransform",
    "OracleResult",
    "noisy_phase",
    "sdr",
    "evaluate_noisy_phase_oracle",
    "evaluate_dataset",
    "median_over_targets",
]

log = logging.getLogger(__name__)

TARGETS = ("vocals", "drums", "bass", "other")
SDR_EPS = 1e-12


@dataclass(eq=False)
class StemSet:
    """A mixture and its four targets, each shaped ``(channels, samples)``."""

    mixture: np.ndarray
    targets: dict
    sample_rate: float
    name: str = ""

    def __post_init__(self):
        self.mixture = np.atleast_2d(np.asarray(self.mixture, dtype=float))
        self.targets = {k: np.atleast_2d(np.asarray(v, dtype=float)) for k, v in self.targets.items()}
        unknown = set(self.targets) - set(TARGETS)
        if unknown:
            raise DomainError(f"unknown targets {sorted(unknown)}")
        for name, wav in self.targets.items():
            if wav.shape != self.mixture.shape:
                raise ConsistencyError(
                    f"{name} has shape {wav.shape}, mixture has {self.mixture.shape}"
                )
        if self.sample_rate <= 0:
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate}")
        if len(self.targets) == len(TARGETS):
            total = sum(self.targets[t] for t in TARGETS)
            err = np.sum((self.mixture - total) ** 2)
            ref = np.sum(self.mixture ** 2)
            if err > 1e-3 * max(ref, SDR_EPS):
                log.warning(
                    "%s: mixture differs from the sum of targets (relative energy %.3g)",
                    self.name or "stem set", err / max(ref, SDR_EPS),
                )

    @property
    def length(self) -> int:
        return self.mixture.shape[-1]


@dataclass(frozen=True)
class SlicqTransform:
    params: SlicqParams
    name: str = "slicq"

    def forward(self, x):
        return forward_slicq(self.params, x)

    def inverse(self, spec, length):
        return inverse_slicq(self.params, spec)

    def describe(self) -> dict:
        return {"transform": self.name, **self.params.describe()}


@dataclass(frozen=True)
class StftTransform:
    params: StftParams = field(default_factory=StftParams)
    name: str = "stft"

    def forward(self, x):
        return stft_forward(self.params, x)

    def inverse(self, spec, length):
        return stft_inverse(self.params, spec, length)

    def describe(self) -> dict:
        return {"transform": self.name, **self.params.describe()}


def _noisy_phase_array(target, mix):
    target = np.asarray(target)
    mix = np.asarray(mix)
    if target.shape != mix.shape:
        raise ShapeError(f"shape mismatch: target {target.shape} vs mix {mix.shape}")
    mag = np.abs(mix)
    out = np.zeros(mix.shape, dtype=complex)
    nz = mag > 0
    out[nz] = np.abs(target[nz]) * (mix[nz] / mag[nz])
    return out


def noisy_phase(target_spec, mix_spec):
    """Combine the target's magnitude with the mixture's phase.

    Works on STFT arrays, :class:`NsgtCoefficients` and
    :class:`RaggedSpectrogram`; both arguments must come from the same
    transform.  Coefficients where the mixture is exactly zero are set to 0.
    """
    if type(target_spec) is not type(mix_spec):
        raise ShapeError(
            f"spectra from different transforms: {type(target_spec).__name__} "
            f"vs {type(mix_spec).__name__}"
        )
    if isinstance(mix_spec, RaggedSpectrogram):
        if (target_spec.layout(), target_spec.total_slices, target_spec.original_length) != \
                (mix_spec.layout(), mix_spec.total_slices, mix_spec.original_length):
            raise ShapeError("ragged spectrograms have different group layouts")
        groups = [
            Group(gm.start, gm.stop, gm.time_steps, _noisy_phase_array(gt.tensor, gm.tensor))
            for gt, gm in zip(target_spec.groups, mix_spec.groups)
        ]
        return RaggedSpectrogram(groups, mix_spec.total_slices, mix_spec.original_length)
    if isinstance(mix_spec, NsgtCoefficients):
        if target_spec.plan is not mix_spec.plan or len(target_spec) != len(mix_spec):
            raise ShapeError("coefficients come from different plans")
        return NsgtCoefficients(
            [_noisy_phase_array(t, m) for t, m in zip(target_spec.coefs, mix_spec.coefs)],
            mix_spec.plan,
        )
    return _noisy_phase_array(target_spec, mix_spec)


def sdr(reference, estimate) -> float:
    """Global signal-to-distortion ratio in dB, pooled over all channels.

    ``10 * log10((sum(ref**2) + eps) / (sum((ref - est)**2) + eps))`` with
    ``eps = 1e-12``.
    """
    ref = np.asarray(reference, dtype=float)
    est = np.asarray(estimate, dtype=float)
    if ref.shape != est.shape:
        raise ShapeError(f"reference {ref.shape} and estimate {est.shape} differ")
    num = float(np.sum(ref**2))
    if num == 0.0:
        raise DomainError("reference is silent; SDR is undefined")
    den = float(np.sum((ref - est) ** 2))
    return 10.0 * np.log10((num + SDR_EPS) / (den + SDR_EPS))


def median_over_targets(per_target: dict):
    """Median of the defined (non-None) per-target scores, or None."""
    vals = [v for v in per_target.values() if v is not None]
    return float(statistics.median(vals)) if vals else None


@dataclass
class OracleResult:
    """Per-target SDRs (``None`` marks a silent target) and their median.

    In dataset mode ``per_target`` holds the median over tracks for each
    target and ``per_track`` keeps the raw scores, keyed by track name.
    """

    per_target: dict
    median_sdr: float | None
    transform: dict
    per_track: dict = field(default_factory=dict)

    def records(self) -> list:
        """One flat record per track x target."""
        out = []
        tracks = self.per_track or {"": self.per_target}
        for track, scores in tracks.items():
            for target, value in scores.items():
                out.append({
                    "track": track,
                    "target": target,
                    "transform": self.transform.get("transform"),
                    "params": self.transform,
                    "sdr": value,
                })
        return out

    def summary(self) -> str:
        lines = [f"transform: {_describe_line(self.transform)}"]
        if self.per_track:
            lines.append(f"tracks: {len(self.per_track)}")
        for target, value in self.per_target.items():
            lines.append(f"  {target:<8s} {_fmt(value)}")
        lines.append(f"  {'median':<8s} {_fmt(self.median_sdr)}")
        return "\n".join(lines)


def _fmt(value):
    return "undefined" if value is None else f"{value:8.3f} dB"


def _describe_line(d):
    return " ".join(f"{k}={v}" for k, v in d.items())


def evaluate_noisy_phase_oracle(stems: StemSet, transform, targets=None) -> OracleResult:
    """Score the noisy-phase estimate of each target against the true stem."""
    targets = list(targets or [t for t in TARGETS if t in stems.targets])
    mix_spec = transform.forward(stems.mixture)
    per_target = {}
    for name in targets:
        ref = stems.targets[name]
        if not np.any(ref):
            per_target[name] = None
            continue
        estimate_spec = noisy_phase(transform.forward(ref), mix_spec)
        estimate = transform.inverse(estimate_spec, stems.length)
        per_target[name] = sdr(ref, estimate)
    return OracleResult(per_target, median_over_targets(per_target), transform.describe())


def evaluate_dataset(tracks, transform, targets=None) -> OracleResult:
    """Evaluate every stem set in ``tracks`` and aggregate.

    Each target's score is the median over tracks (silent tracks excluded);
    the overall score is the median of those per-target medians.
    """
    per_track = {}
    for i, stems in enumerate(tracks):
        name = stems.name or f"track{i:03d}"
        result = evaluate_noisy_phase_oracle(stems, transform, targets)
        per_track[name] = result.per_target
        log.info("%s: median %s", name, _fmt(result.median_sdr))
    names = list(targets or TARGETS)
    per_target = {}
    for t in names:
        vals = [s[t] for s in per_track.values() if s.get(t) is not None]
        per_target[t] = float(statistics.median(vals)) if vals else None
    return OracleResult(per_target, median_over_targets(per_target), transform.describe(), per_track)
