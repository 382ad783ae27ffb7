# %% [markdown]
# # Noisy-phase oracle
#
# The oracle keeps each target's true magnitude and takes the phase from
# the mixture.  It bounds what a magnitude-only separator could reach in
# a given transform.  With MUSDB18-HQ set up, point ``SLICQT_DATASET_ROOT``
# at it to score the validation split; otherwise a synthetic four-stem
# fixture stands in.

# %%
import os

from slicqt import SlicqParams, SlicqTransform, StftTransform, build_scale, evaluate_dataset
from slicqt.audio_io import iter_dataset, synth_stems

root = os.environ.get("SLICQT_DATASET_ROOT")
if root:
    tracks = lambda: iter_dataset(root, "valid")  # noqa: E731
else:
    tracks = lambda: (synth_stems(seed, 5.0) for seed in range(3))  # noqa: E731

# %%
slicq = SlicqTransform(SlicqParams(build_scale("bark", 32.9, 22050, 262)))
for transform in (slicq, StftTransform()):
    result = evaluate_dataset(tracks(), transform)
    print(result.summary())
    print()

# %% [markdown]
# On the synthetic fixture the numbers only show that the pipeline is
# finite and deterministic; the fixture's stems are not real music.
