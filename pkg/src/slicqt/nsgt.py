"""Nonstationary Gabor transform of a single real block (painless case).

The transform works in the frequency domain.  Each band owns a Hann taper
on a contiguous run of rfft samples; the tapered run is wrapped into a
buffer of ``time_steps[k]`` samples and inverse transformed, which yields
``time_steps[k]`` complex coefficients per band.  Because every taper fits
inside its buffer, the frame operator is diagonal and the canonical dual
is a pointwise division.

Band 0 is an auxiliary DC band below ``fmin`` and the last band is an
auxiliary Nyquist band above ``fmax``; together with the scale bins they
cover the whole spectrum, which is what makes the inverse exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FrameError, ShapeError
from .scales import FrequencyScale

__all__ = ["NsgtPlan", "NsgtCoefficients", "build_plan", "forward_nsgt", "inverse_nsgt"]

# narrowest allowed half-bandwidth, in rfft samples
MIN_BAND_SAMPLES = 2.0


@dataclass(frozen=True, eq=False)
class NsgtPlan:
    """Precomputed analysis and synthesis tapers for one block length.

    Attributes
    ----------
    centers, half_widths : ndarray
        Band centers and taper half-widths in Hz, auxiliary bands included.
    offsets : ndarray of int
        First rfft sample covered by each band's taper.
    windows, dual_windows : tuple of ndarray
        Analysis and synthesis taper values on each band's support.
    time_steps : ndarray of int
        Coefficients per band, always even and at least the support length.
    frame_diagonal : ndarray
        Diagonal of the frame operator, ``sum_k time_steps[k] * w_k**2 /
        block_length``, on every rfft sample.
    """

    scale: FrequencyScale
    sample_rate: float
    block_length: int
    centers: np.ndarray
    half_widths: np.ndarray
    offsets: np.ndarray
    windows: tuple
    dual_windows: tuple
    time_steps: np.ndarray
    frame_diagonal: np.ndarray
    _positions: tuple = field(repr=False)

    @property
    def n_bands(self) -> int:
        return len(self.windows)

    @property
    def support_lengths(self) -> np.ndarray:
        return np.array([len(w) for w in self.windows])

    def painless_sum(self) -> np.ndarray:
        """Evaluate ``sum_k w_k * dual_k * time_steps[k]`` on each rfft sample.

        Equals ``block_length`` everywhere for a correctly built plan.
        """
        acc = np.zeros(self.block_length // 2 + 1)
        for off, w, wd, m in zip(self.offsets, self.windows, self.dual_windows, self.time_steps):
            acc[off:off + len(w)] += w * wd * m
        return acc


@dataclass(eq=False)
class NsgtCoefficients:
    """Per-band complex coefficients; ``coefs[k]`` has shape ``(..., time_steps[k])``."""

    coefs: list
    plan: NsgtPlan

    def __len__(self):
        return len(self.coefs)

    def __getitem__(self, k):
        return self.coefs[k]


def _hann_taper(freqs, center, half_width):
    return 0.5 + 0.5 * np.cos(np.pi * (freqs - center) / half_width)


def build_plan(scale: FrequencyScale, sample_rate: float, block_length: int) -> NsgtPlan:
    """Construct the frame for ``scale`` on blocks of ``block_length`` samples.

    Raises
    ------
    DomainError
        Invalid sample rate or block length, or ``fmax`` above Nyquist.
    FrameError
        The block is too short to resolve the narrowest band: every band
        needs a half-width of at least two frequency samples, i.e.
        ``block_length >= 2 * sample_rate / min(bandwidth)``.
    """
    if not np.isfinite(sample_rate) or sample_rate <= 0:
        raise DomainError(f"sample_rate must be positive, got {sample_rate}")
    if int(block_length) != block_length or block_length < 2 or block_length % 2:
        raise DomainError(f"block_length must be a positive even integer, got {block_length}")
    block_length = int(block_length)
    nyquist = sample_rate / 2.0
    if scale.fmax > nyquist * (1 + 1e-12):
        raise DomainError(f"fmax {scale.fmax} Hz exceeds Nyquist {nyquist} Hz")

    df = sample_rate / block_length
    fc = scale.center_frequencies()
    bw = scale.bandwidths()

    narrowest = float(np.min(bw))
    if narrowest / df < MIN_BAND_SAMPLES:
        need = MIN_BAND_SAMPLES * sample_rate / narrowest
        raise FrameError(
            f"block_length {block_length} too short for {scale.kind.value} scale "
            f"({scale.bins} bins from {scale.fmin:g} Hz): narrowest band is "
            f"{narrowest:.4g} Hz, need block_length >= {int(np.ceil(need))}"
        )

    centers = np.concatenate(([0.0], fc, [nyquist]))
    half_widths = np.concatenate(
        ([max(fc[0], bw[0])], bw, [max(nyquist - fc[-1], bw[-1])])
    )

    n_freq = block_length // 2 + 1
    freqs = np.arange(n_freq) * df
    offsets, windows, positions, steps = [], [], [], []
    for k, (c, h) in enumerate(zip(centers, half_widths)):
        lo = max(int(np.floor((c - h) / df)), 0)
        hi = min(int(np.ceil((c + h) / df)), n_freq - 1)
        idx = np.arange(lo, hi + 1)
        idx = idx[np.abs(freqs[idx] - c) < h]
        w = _hann_taper(freqs[idx], c, h)
        keep = w > 0
        idx, w = idx[keep], w[keep]
        if len(idx) == 0:
            raise FrameError(f"band {k} at {c:.4g} Hz covers no frequency samples")
        n = len(idx)
        if k == 0 or k == len(centers) - 1:
            # auxiliary bands are one-sided halves of a symmetric taper
            n = 2 * n
        m = n + (n % 2)
        center_bin = int(round(c / df))
        offsets.append(int(idx[0]))
        windows.append(w)
        positions.append((idx - center_bin) % m)
        steps.append(m)
    steps = np.array(steps, dtype=int)

    diag = np.zeros(n_freq)
    for off, w, m in zip(offsets, windows, steps):
        diag[off:off + len(w)] += m * w**2
    if np.min(diag) <= 1e-8 * np.max(diag):
        raise FrameError("frame does not cover the full spectrum; the dual is unstable")

    duals = tuple(block_length * w / diag[off:off + len(w)] for off, w in zip(offsets, windows))
    return NsgtPlan(
        scale=scale,
        sample_rate=float(sample_rate),
        block_length=block_length,
        centers=centers,
        half_widths=half_widths,
        offsets=np.array(offsets, dtype=int),
        windows=tuple(windows),
        dual_windows=duals,
        time_steps=steps,
        frame_diagonal=diag / block_length,
        _positions=tuple(positions),
    )


def forward_nsgt(plan: NsgtPlan, signal) -> NsgtCoefficients:
    """Analyze a real block; leading axes of ``signal`` are treated as a batch."""
    x = np.asarray(signal, dtype=float)
    if x.ndim == 0 or x.shape[-1] != plan.block_length:
        raise ShapeError(
            f"signal length {x.shape[-1] if x.ndim else 0} != block_length {plan.block_length}"
        )
    spectrum = np.fft.rfft(x, axis=-1)
    lead = x.shape[:-1]
    coefs = []
    for off, w, pos, m in zip(plan.offsets, plan.windows, plan._positions, plan.time_steps):
        buf = np.zeros(lead + (m,), dtype=complex)
        buf[..., pos] = spectrum[..., off:off + len(w)] * w
        coefs.append(np.fft.ifft(buf, axis=-1))
    return NsgtCoefficients(coefs, plan)


def inverse_nsgt(plan: NsgtPlan, coefs) -> np.ndarray:
    """Synthesize a real block from per-band coefficients via the dual frame."""
    bands = coefs.coefs if isinstance(coefs, NsgtCoefficients) else list(coefs)
    if len(bands) != plan.n_bands:
        raise ShapeError(f"expected {plan.n_bands} bands, got {len(bands)}")
    lead = None
    for k, (c, m) in enumerate(zip(bands, plan.time_steps)):
        c = np.asarray(c)
        if c.ndim == 0 or c.shape[-1] != m:
            raise ShapeError(f"band {k} has {c.shape[-1] if c.ndim else 0} steps, expected {m}")
        if lead is None:
            lead = c.shape[:-1]
        elif c.shape[:-1] != lead:
            raise ShapeError(f"band {k} batch shape {c.shape[:-1]} != {lead}")

    spectrum = np.zeros(lead + (plan.block_length // 2 + 1,), dtype=complex)
    scale = 1.0 / plan.block_length
    for c, off, wd, pos, m in zip(
        bands, plan.offsets, plan.dual_windows, plan._positions, plan.time_steps
    ):
        band = np.fft.fft(c, axis=-1)[..., pos]
        spectrum[..., off:off + len(wd)] += band * (wd * (m * scale))
    return np.fft.irfft(spectrum, n=plan.block_length, axis=-1)
