"""WAV files, MUSDB18-HQ style stem directories and synthetic stem sets."""

from __future__ import annotations

import logging
import os
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.io.wavfile
import scipy.signal

from .errors import AudioIOError, ConsistencyError, DatasetError, DomainError, FormatError
from .oracle import TARGETS, StemSet

__all__ = [
    "Waveform",
    "read_wav",
    "write_wav",
    "load_stem_set",
    "write_stem_set",
    "find_stem_dirs",
    "iter_dataset",
    "synth_stems",
    "STEM_FILES",
    "VALIDATION_TRACKS",
]

log = logging.getLogger(__name__)

STEM_FILES = ("mixture",) + TARGETS

# the 14 tracks of the MUSDB18 validation split (taken from the training set)
VALIDATION_TRACKS = (
    "Actions - One Minute Smile",
    "Clara Berry And Wooldog - Waltz For My Victims",
    "Johnny Lokke - Promises & Lies",
    "Patrick Talbot - A Reason To Leave",
    "Triviul - Angelsaint",
    "Alexander Ross - Goodbye Bolero",
    "Fergessen - Nos Palpitants",
    "Leaf - Summerghost",
    "Skelpolu - Human Mistakes",
    "Young Griffo - Pennies",
    "ANiMAL - Rockshow",
    "James May - On The Line",
    "Meaxic - Take A Step",
    "Traffic Experiment - Sirens",
)


@dataclass(eq=False)
class Waveform:
    """Channel-major samples, shape ``(channels, n)``."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if self.samples.ndim != 2 or self.samples.shape[0] not in (1, 2):
            raise DomainError(f"expected 1 or 2 channels, got shape {self.samples.shape}")
        if self.sample_rate <= 0:
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def length(self) -> int:
        return self.samples.shape[1]


def read_wav(path) -> Waveform:
    """Read a PCM (16, 24 or 32 bit) or float WAV file into ``[-1, 1]`` doubles.

    Integer PCM is divided by ``2**(bits - 1)``, so 16-bit 32767 becomes
    ``32767 / 32768``.  Float data is passed through unchanged.
    """
    path = Path(path)
    if not path.is_file():
        raise AudioIOError(f"{path}: no such file")
    try:
        rate, data = scipy.io.wavfile.read(path)
    except (ValueError, EOFError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise AudioIOError(f"{path}: {exc}") from exc
    if data.dtype == np.int16:
        x = data / 32768.0
    elif data.dtype == np.int32:
        # 24-bit PCM arrives left-justified in int32
        x = data / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        x = data.astype(float)
    else:
        raise FormatError(f"{path}: unsupported sample type {data.dtype}")
    x = x.T if x.ndim == 2 else x[np.newaxis]
    if x.shape[0] > 2:
        raise FormatError(f"{path}: {x.shape[0]} channels, only mono or stereo supported")
    if rate != 44100:
        log.warning("%s: sample rate %d Hz, only 44100 Hz is first-class", path, rate)
    return Waveform(x, int(rate))


def write_wav(path, waveform: Waveform, bit_depth=32) -> None:
    """Write ``waveform`` as 16/24-bit PCM or (``bit_depth=32``) 32-bit float.

    Samples outside ``[-1, 1]`` are clipped with a warning.
    """
    x = waveform.samples
    if np.any(np.abs(x) > 1.0):
        log.warning("%s: clipping %d samples outside [-1, 1]", path, int(np.sum(np.abs(x) > 1)))
        x = np.clip(x, -1.0, 1.0)
    try:
        if bit_depth == 32:
            scipy.io.wavfile.write(path, waveform.sample_rate, x.T.astype(np.float32))
        elif bit_depth == 16:
            q = np.clip(np.round(x * 32768.0), -32768, 32767).astype("<i2")
            scipy.io.wavfile.write(path, waveform.sample_rate, q.T)
        elif bit_depth == 24:
            q = np.clip(np.round(x * 8388608.0), -8388608, 8388607).astype("<i4")
            raw = q.T.reshape(-1, 1).view(np.uint8)[:, :3]
            with wave.open(os.fspath(path), "wb") as fh:
                fh.setnchannels(waveform.channels)
                fh.setsampwidth(3)
                fh.setframerate(waveform.sample_rate)
                fh.writeframes(raw.tobytes())
        else:
            raise DomainError(f"unsupported bit depth {bit_depth}")
    except OSError as exc:
        raise AudioIOError(f"{path}: {exc}") from exc


def load_stem_set(directory) -> StemSet:
    directory = Path(directory)
    waves = {}
    for stem in STEM_FILES:
        f = directory / f"{stem}.wav"
        if not f.is_file():
            raise AudioIOError(f"{directory}: missing stem '{stem}' ({f.name})")
        waves[stem] = read_wav(f)
    ref = waves["mixture"]
    for stem, w in waves.items():
        if w.sample_rate != ref.sample_rate:
            raise ConsistencyError(f"{directory}: {stem} is {w.sample_rate} Hz, mixture {ref.sample_rate} Hz")
        if w.samples.shape != ref.samples.shape:
            raise ConsistencyError(
                f"{directory}: {stem} has shape {w.samples.shape}, mixture {ref.samples.shape}"
            )
    return StemSet(
        ref.samples,
        {t: waves[t].samples for t in TARGETS},
        ref.sample_rate,
        name=directory.name,
    )


def write_stem_set(directory, stems: StemSet, bit_depth=32) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rate = int(stems.sample_rate)
    write_wav(directory / "mixture.wav", Waveform(stems.mixture, rate), bit_depth)
    for t in TARGETS:
        write_wav(directory / f"{t}.wav", Waveform(stems.targets[t], rate), bit_depth)


def find_stem_dirs(root, split=None) -> list:
    """Locate stem directories below ``root``.

    ``root`` may itself be a stem directory.  With the MUSDB18-HQ layout
    (``root/train``, ``root/test``) ``split`` selects ``"train"``,
    ``"valid"`` (the 14 validation tracks), ``"train-only"`` or ``"test"``.
    Without a split every directory holding a ``mixture.wav`` is returned.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"{root}: not a directory")
    if (root / "mixture.wav").is_file():
        return [root]
    if split is None:
        dirs = sorted(p.parent for p in root.rglob("mixture.wav"))
    else:
        sub = "test" if split == "test" else "train"
        dirs = sorted(p for p in (root / sub).glob("*") if (p / "mixture.wav").is_file())
        if split == "valid":
            dirs = [p for p in dirs if p.name in VALIDATION_TRACKS]
        elif split == "train-only":
            dirs = [p for p in dirs if p.name not in VALIDATION_TRACKS]
        elif split not in ("train", "test"):
            raise DatasetError(f"unknown split {split!r}")
    if not dirs:
        raise DatasetError(f"{root}: no stem directories found (split={split})")
    return dirs


def iter_dataset(root, split=None):
    """Yield stem sets one at a time, so only one track is held in memory."""
    for d in find_stem_dirs(root, split):
        yield load_stem_set(d)


def _pan(rng, x, channels):
    if channels == 1:
        return x[np.newaxis]
    p = rng.uniform(0.25, 0.75)
    return np.stack([np.sqrt(1 - p) * x, np.sqrt(p) * x])


def _normalize(x, peak=0.25):
    return x * (peak / max(np.max(np.abs(x)), 1e-12))


def synth_stems(seed, duration_s, sample_rate=44100, channels=2) -> StemSet:
    """Deterministic four-stem fixture for tests that cannot use MUSDB18-HQ.

    bass: sinusoids below 200 Hz; drums: filtered noise bursts; vocals: a
    vibrato harmonic tone with partials in 200-1000 Hz; other: a broadband
    chord pad.  The mixture is ``vocals + drums + bass + other`` summed in
    that order.
    """
    if duration_s < 1:
        raise DomainError(f"duration must be at least 1 s, got {duration_s}")
    rng = np.random.default_rng(seed)
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate
    note_len = 0.5

    # bass: one note per half second, fundamental and octave stay < 200 Hz
    roots = rng.uniform(41.0, 95.0, size=int(np.ceil(duration_s / note_len)))
    f_bass = roots[np.minimum((t / note_len).astype(int), len(roots) - 1)]
    phase = 2 * np.pi * np.cumsum(f_bass) / sample_rate
    env = 0.6 + 0.4 * np.cos(2 * np.pi * t / note_len) ** 2
    bass = env * (np.sin(phase) + 0.4 * np.sin(2 * phase))

    # drums: decaying noise bursts on an eighth-note grid, high-passed
    drums = np.zeros(n)
    b_hat, a_hat = scipy.signal.butter(4, 5000, "highpass", fs=sample_rate)
    b_sn, a_sn = scipy.signal.butter(2, [1500, 6000], "bandpass", fs=sample_rate)
    burst_len = int(0.08 * sample_rate)
    decay = np.exp(-np.arange(burst_len) / (0.015 * sample_rate))
    for k, start in enumerate(range(0, n, int(0.25 * sample_rate))):
        seg = rng.standard_normal(burst_len) * decay
        b, a = (b_sn, a_sn) if k % 2 else (b_hat, a_hat)
        seg = scipy.signal.lfilter(b, a, seg)
        stop = min(start + burst_len, n)
        drums[start:stop] += seg[:stop - start]

    # vocals: vibrato tone, partials kept inside 200-1000 Hz
    f0 = rng.uniform(220.0, 300.0)
    vib = 1 + 0.02 * np.sin(2 * np.pi * 5.5 * t + rng.uniform(0, 2 * np.pi))
    vphase = 2 * np.pi * np.cumsum(f0 * vib) / sample_rate
    vocals = sum(np.sin(h * vphase) / h for h in range(1, int(1000 // (f0 * 1.02)) + 1))
    vocals = vocals * (0.5 + 0.5 * np.sin(2 * np.pi * 0.7 * t) ** 2)

    # other: sustained chord, many partials with a gentle roll-off
    chord = 130.81 * np.array([1.0, 1.26, 1.5, 2.0]) * rng.uniform(0.95, 1.05)
    other = np.zeros(n)
    for f in chord:
        ph = rng.uniform(0, 2 * np.pi)
        for h in range(1, int(8000 // f) + 1):
            other += np.sin(2 * np.pi * h * f * t + ph * h) / h**1.5

    stems = {}
    for name, x in (("vocals", vocals), ("drums", drums), ("bass", bass), ("other", other)):
        stems[name] = _pan(rng, _normalize(x), channels)
    mixture = stems["vocals"] + stems["drums"] + stems["bass"] + stems["other"]
    return StemSet(mixture, stems, sample_rate, name=f"synth-{seed}")
