"""Fixed-resolution STFT baseline (periodic Hann, least-squares overlap-add).

The signal is padded with ``window_length // 2`` zeros on both sides, then
with trailing zeros up to a whole number of hops, so every original sample
lies under at least one nonzero window and the inverse is exact on the
full signal, not only its interior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import DomainError, ShapeError

__all__ = ["StftParams", "stft_forward", "stft_inverse", "frame_count", "cola_denominator"]


@dataclass(frozen=True)
class StftParams:
    window_length: int = 4096
    hop: int = 1024

    def __post_init__(self):
        if int(self.window_length) != self.window_length or self.window_length <= 0 \
                or self.window_length % 2:
            raise DomainError(f"window_length must be a positive even integer, got {self.window_length}")
        if int(self.hop) != self.hop or not 0 < self.hop <= self.window_length:
            raise DomainError(f"need 0 < hop <= window_length, got hop={self.hop}")

    @property
    def n_freqs(self) -> int:
        return self.window_length // 2 + 1

    def window(self) -> np.ndarray:
        return scipy.signal.get_window("hann", self.window_length, fftbins=True)

    def bin_frequencies(self, sample_rate: float) -> np.ndarray:
        return np.fft.rfftfreq(self.window_length, 1.0 / sample_rate)

    def describe(self) -> dict:
        return {"window_length": int(self.window_length), "hop": int(self.hop)}


def _padded_length(params: StftParams, n: int) -> int:
    total = n + params.window_length
    excess = (total - params.window_length) % params.hop
    return total + (params.hop - excess) % params.hop


def frame_count(params: StftParams, n: int) -> int:
    """Frames produced for an ``n``-sample signal."""
    return (_padded_length(params, n) - params.window_length) // params.hop + 1


def stft_forward(params: StftParams, signal) -> np.ndarray:
    """Complex STFT of shape ``(..., window_length // 2 + 1, frames)``."""
    x = np.asarray(signal, dtype=float)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise DomainError("signal is empty")
    n = x.shape[-1]
    front = params.window_length // 2
    back = _padded_length(params, n) - n - front
    xp = np.pad(x, [(0, 0)] * (x.ndim - 1) + [(front, back)])
    frames = np.lib.stride_tricks.sliding_window_view(xp, params.window_length, axis=-1)
    frames = frames[..., ::params.hop, :] * params.window()
    return np.swapaxes(np.fft.rfft(frames, axis=-1), -1, -2)


def cola_denominator(params: StftParams, n_frames: int) -> np.ndarray:
    """Sum of squared shifted windows over the padded signal."""
    w2 = params.window() ** 2
    length = (n_frames - 1) * params.hop + params.window_length
    den = np.zeros(length)
    for j in range(n_frames):
        den[j * params.hop:j * params.hop + params.window_length] += w2
    return den


def stft_inverse(params: StftParams, spec, length: int | None = None) -> np.ndarray:
    """Least-squares weighted overlap-add inverse of :func:`stft_forward`.

    ``length`` trims the output to the original signal length; without it
    the output spans every frame minus the front and back half-window pads.
    """
    spec = np.asarray(spec)
    if spec.ndim < 2 or spec.shape[-2] != params.n_freqs:
        raise ShapeError(
            f"expected {params.n_freqs} frequency rows, got shape {spec.shape}"
        )
    n_frames = spec.shape[-1]
    w = params.window()
    frames = np.fft.irfft(np.swapaxes(spec, -1, -2), n=params.window_length, axis=-1) * w
    total = (n_frames - 1) * params.hop + params.window_length
    out = np.zeros(spec.shape[:-2] + (total,))
    for j in range(n_frames):
        out[..., j * params.hop:j * params.hop + params.window_length] += frames[..., j, :]
    den = cola_denominator(params, n_frames)
    nz = den > 1e-10
    out[..., nz] /= den[nz]
    out[..., ~nz] = 0.0
    front = params.window_length // 2
    if length is None:
        length = total - params.window_length
    return out[..., front:front + length]
