"""Nonlinear frequency scales used to place transform bins.

A scale is a monotone map from Hz to a perceptual or logarithmic axis.
Bins are spread uniformly on that axis between ``fmin`` and ``fmax`` and
mapped back to Hz, which yields dense low-frequency bins for the Bark, mel
and log scales.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ScaleKind",
    "FrequencyScale",
    "build_scale",
    "center_frequencies",
    "bandwidths",
    "hz_to_bark",
    "bark_to_hz",
    "hz_to_mel",
    "mel_to_hz",
]


class ScaleKind(enum.Enum):
    BARK = "bark"
    LOGCQ = "cqlog"
    MEL = "mel"
    LINEAR = "linear"

    @classmethod
    def parse(cls, name: str | ScaleKind) -> ScaleKind:
        """Case-insensitive lookup by name ("bark", "cqlog", "mel", "linear")."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise DomainError(f"unknown scale kind {name!r} (expected one of {valid})")


def hz_to_bark(f):
    """Zwicker-Terhardt critical band rate."""
    f = np.asarray(f, dtype=float)
    return 13.0 * np.arctan(0.00076 * f) + 3.5 * np.arctan((f / 7500.0) ** 2)


def bark_to_hz(z, tol=1e-10):
    """Invert :func:`hz_to_bark` by vectorized bisection.

    The forward map is strictly increasing on ``f >= 0`` but has no closed
    form inverse.  The bracket is shrunk until it is narrower than ``tol`` Hz.
    """
    z = np.asarray(z, dtype=float)
    lo = np.zeros_like(z)
    hi = np.full_like(z, 1000.0)
    # grow the upper bracket until it encloses every target
    while np.any(hz_to_bark(hi) < z):
        hi = np.where(hz_to_bark(hi) < z, hi * 2.0, hi)
        if np.any(hi > 1e12):
            raise DomainError("bark value outside the invertible range")
    while np.max(hi - lo, initial=0.0) > tol:
        mid = 0.5 * (lo + hi)
        # the bracket stops shrinking once it hits float spacing
        if np.all((mid == lo) | (mid == hi)):
            break
        below = hz_to_bark(mid) < z
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def hz_to_mel(f):
    f = np.asarray(f, dtype=float)
    return 2595.0 * np.log10(1.0 + f / 700.0)


def mel_to_hz(m):
    m = np.asarray(m, dtype=float)
    return 700.0 * (10.0 ** (m / 2595.0) - 1.0)


_FORWARD = {
    ScaleKind.BARK: hz_to_bark,
    ScaleKind.LOGCQ: np.log2,
    ScaleKind.MEL: hz_to_mel,
    ScaleKind.LINEAR: lambda f: np.asarray(f, dtype=float),
}

_INVERSE = {
    ScaleKind.BARK: bark_to_hz,
    ScaleKind.LOGCQ: np.exp2,
    ScaleKind.MEL: mel_to_hz,
    ScaleKind.LINEAR: lambda z: np.asarray(z, dtype=float),
}


@dataclass(frozen=True)
class FrequencyScale:
    """A validated scale discretized into ``bins`` center frequencies.

    Use :func:`build_scale` rather than constructing this directly; the
    constructor validates but does not coerce the kind from a string.
    """

    kind: ScaleKind
    fmin: float
    fmax: float
    bins: int

    def __post_init__(self):
        if not isinstance(self.kind, ScaleKind):
            raise DomainError(f"kind must be a ScaleKind, got {self.kind!r}")
        if not np.isfinite(self.fmin) or self.fmin <= 0:
            raise DomainError(f"fmin must be positive, got {self.fmin}")
        if not np.isfinite(self.fmax) or self.fmin >= self.fmax:
            raise DomainError(f"need fmin < fmax, got {self.fmin} >= {self.fmax}")
        if int(self.bins) != self.bins or self.bins < 2:
            raise DomainError(f"bins must be an integer >= 2, got {self.bins}")

    def to_scale(self, f):
        """Map Hz onto this scale's axis."""
        return _FORWARD[self.kind](f)

    def from_scale(self, z):
        """Map axis values back to Hz."""
        return _INVERSE[self.kind](z)

    def center_frequencies(self) -> np.ndarray:
        z = np.linspace(self.to_scale(self.fmin), self.to_scale(self.fmax), self.bins)
        f = self.from_scale(z)
        # pin the endpoints so inversion error never leaves [fmin, fmax]
        f[0] = self.fmin
        f[-1] = self.fmax
        return f

    def bandwidths(self) -> np.ndarray:
        f = self.center_frequencies()
        gaps = np.diff(f)
        bw = np.empty_like(f)
        bw[1:-1] = 0.5 * (gaps[1:] + gaps[:-1])
        bw[0] = gaps[0]
        bw[-1] = gaps[-1]
        return bw

    def describe(self) -> dict:
        return {
            "kind": self.kind.value,
            "fmin": float(self.fmin),
            "fmax": float(self.fmax),
            "bins": int(self.bins),
        }


def build_scale(kind, fmin: float, fmax: float, bins: int) -> FrequencyScale:
    """Build a frequency scale, accepting the kind as an enum or a name.

    >>> build_scale("linear", 100, 200, 3).center_frequencies()
    array([100., 150., 200.])
    """
    return FrequencyScale(ScaleKind.parse(kind), float(fmin), float(fmax), int(bins))


def center_frequencies(scale: FrequencyScale) -> np.ndarray:
    return scale.center_frequencies()


def bandwidths(scale: FrequencyScale) -> np.ndarray:
    """Per-bin bandwidth in Hz.

    Interior bins get half the distance between their two neighbors; the
    two end bins reuse their single neighbor gap.
    """
    return scale.bandwidths()
