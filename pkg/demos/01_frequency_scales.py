# %% [markdown]
# # Frequency scales
#
# A sliced transform is only as good as the frequency axis it samples.
# Here we build the four supported scales over the same range and look
# at how their bins are spread: Bark and mel crowd the low end, the
# constant-Q scale is uniform in octaves, and the linear scale mirrors
# an STFT.

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from slicqt import ScaleKind, build_scale

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)

# %% [markdown]
# The default configuration: 262 Bark bins from 32.9 Hz to Nyquist.

# %%
bark = build_scale("bark", 32.9, 22050, 262)
fc = bark.center_frequencies()
bw = bark.bandwidths()
print(bark.describe())
print("first centers:", np.round(fc[:5], 2))
print("last centers: ", np.round(fc[-3:], 1))
print(f"bandwidth grows from {bw[0]:.1f} Hz to {bw[-2]:.0f} Hz")

# %% [markdown]
# Bins per octave for each scale, 60 bins from 30 Hz.

# %%
edges = 30.0 * 2.0 ** np.arange(10)
fig, ax = plt.subplots(figsize=(7, 4))
for kind in ScaleKind:
    centers = build_scale(kind, 30.0, 22050, 60).center_frequencies()
    counts, _ = np.histogram(centers, bins=edges)
    ax.plot(edges[:-1], counts, marker="o", label=kind.value)
ax.set_xscale("log")
ax.set_xlabel("octave starting at (Hz)")
ax.set_ylabel("bins in octave")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "bins_per_octave.png", dpi=120)

# %% [markdown]
# Bark is nearly linear below 500 Hz and nearly logarithmic above it,
# which is the compromise the default configuration relies on.
