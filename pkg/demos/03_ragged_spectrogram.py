# %% [markdown]
# # The ragged spectrogram
#
# Bands whose windows need the same number of time steps are grouped into
# one complex tensor of shape ``(bands, slices, time_steps)``.  Low bands
# get few time steps (good frequency resolution), high bands get many
# (good time resolution).  For display each group is overlap-added across
# slices and stretched to a common width.

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slicqt import SlicqParams, StftParams, build_scale, forward_slicq
from slicqt import render

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)
sr = 44100

# %% [markdown]
# A glockenspiel-like test signal: four struck notes with fast decays.

# %%
t = np.arange(2 * sr) / sr
x = np.zeros_like(t)
for k, f in enumerate([1568.0, 2093.0, 2637.0, 3136.0]):
    on = t >= 0.4 * k + 0.1
    tau = t[on] - t[on][0]
    for h, a in ((1, 1.0), (2.76, 0.4), (5.4, 0.2)):
        x[on] += a * np.exp(-tau * 8 * h) * np.sin(2 * np.pi * f * h * tau)

params = SlicqParams(build_scale("bark", 32.9, 22050, 262), sr)
spec = forward_slicq(params, x)
for g in spec.groups[:3] + spec.groups[-3:]:
    print(f"bands {g.start:3d}-{g.stop - 1:3d}: tensor {g.tensor.shape}")

# %% [markdown]
# Side by side with a 4096-sample STFT.  Onsets in the top bands are
# much sharper in the sliced transform.

# %%
db_slicq, _ = render.slicq_image(params, x)
db_stft, _ = render.stft_image(StftParams(), x, sr)
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for ax, db, title in ((axes[0], db_stft, "STFT 4096/1024"), (axes[1], db_slicq, "sliCQT Bark 262")):
    ax.imshow(db, origin="lower", aspect="auto", vmin=-100, cmap="magma")
    ax.set_title(title)
    ax.set_xlabel("frame")
axes[0].set_ylabel("bin")
fig.tight_layout()
fig.savefig(OUT / "glockenspiel.png", dpi=120)
