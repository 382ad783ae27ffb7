"""Sliced nonstationary Gabor transform, noisy-phase oracle and parameter search."""

from .errors import (
    AudioIOError,
    ConsistencyError,
    DatasetError,
    DomainError,
    FormatError,
    FrameError,
    ShapeError,
    SlicqtError,
)
from .nsgt import NsgtCoefficients, NsgtPlan, build_plan, forward_nsgt, inverse_nsgt
from .oracle import (
    TARGETS,
    OracleResult,
    SlicqTransform,
    StemSet,
    StftTransform,
    evaluate_dataset,
    evaluate_noisy_phase_oracle,
    noisy_phase,
    sdr,
)
from .scales import FrequencyScale, ScaleKind, bandwidths, build_scale, center_frequencies
from .search import SearchConfig, SearchReport, SearchSpace, run_search, sample_params
from .slicq import (
    RaggedSpectrogram,
    SlicqParams,
    forward_slicq,
    inverse_slicq,
    overlap_add_groups,
    slice_signal,
)
from .stft import StftParams, stft_forward, stft_inverse

__version__ = "0.1.0"
