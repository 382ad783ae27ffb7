"""Log-magnitude spectrogram images for the STFT and the sliced transform."""

from __future__ import annotations

import numpy as np
from PIL import Image

from .slicq import SlicqParams, forward_slicq, overlap_add_groups
from .stft import StftParams, stft_forward

__all__ = ["DB_FLOOR", "to_db", "slicq_image", "stft_image", "to_pixels", "save_png", "sidecar_text"]

DB_FLOOR = -120.0


def to_db(mag):
    mag = np.asarray(mag, dtype=float)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag)
    return np.maximum(db, DB_FLOOR)


def slicq_image(params: SlicqParams, signal):
    """Return ``(db, axes)`` for a mono signal.

    Rows are plan bands, lowest frequency first.  Each group's overlap-added
    frames are stretched to the widest group by nearest-neighbor repetition.
    """
    spec = forward_slicq(params, signal)
    mats = overlap_add_groups(spec)
    width = max(m.shape[-1] for m in mats)
    rows = []
    for m in mats:
        cols = (np.arange(width) * m.shape[-1]) // width
        rows.append(np.abs(m)[:, cols])
    plan = params.plan
    axes = {
        "transform": "slicq",
        "params": params.describe(),
        "row_hz": plan.centers.tolist(),
        "row_time_steps": plan.time_steps.tolist(),
        "seconds_per_column": (spec.total_slices + 1) * params.hop / params.sample_rate / width,
    }
    return to_db(np.concatenate(rows, axis=0)), axes


def stft_image(params: StftParams, signal, sample_rate):
    spec = stft_forward(params, signal)
    axes = {
        "transform": "stft",
        "params": params.describe(),
        "row_hz": params.bin_frequencies(sample_rate).tolist(),
        "seconds_per_column": params.hop / sample_rate,
    }
    return to_db(np.abs(spec)), axes


def to_pixels(db):
    """Map dB values to 8-bit gray, high frequencies on top."""
    top = float(np.max(db))
    if top <= DB_FLOOR:
        pix = np.zeros(db.shape)
    else:
        pix = (db - DB_FLOOR) / (top - DB_FLOOR) * 255.0
    return np.flipud(np.round(pix).astype(np.uint8))


def save_png(path, db) -> None:
    Image.fromarray(to_pixels(db)).save(path, format="PNG")


def sidecar_text(db, axes) -> str:
    lines = [
        f"transform {axes['transform']}",
        "params " + " ".join(f"{k}={v}" for k, v in axes["params"].items()),
        f"height {db.shape[0]}",
        f"width {db.shape[1]}",
        f"db_floor {DB_FLOOR}",
        f"db_max {float(np.max(db)):.6f}",
        f"seconds_per_column {axes['seconds_per_column']:.9g}",
        "# row (0 = bottom of image) center_hz"
        + (" time_steps" if "row_time_steps" in axes else ""),
    ]
    steps = axes.get("row_time_steps")
    for i, hz in enumerate(axes["row_hz"]):
        extra = f" {steps[i]}" if steps else ""
        lines.append(f"{i} {hz:.6f}{extra}")
    return "\n".join(lines) + "\n"
