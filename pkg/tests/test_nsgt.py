import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from slicqt.errors import DomainError, FrameError, ShapeError
from slicqt.nsgt import NsgtCoefficients, build_plan, forward_nsgt, inverse_nsgt
from slicqt.scales import ScaleKind, build_scale
from slicqt.slicq import group_layout

SR = 44100


@pytest.fixture(scope="module")
def bark_plan():
    return build_plan(build_scale("bark", 32.9, 22050, 262), SR, 18060)


PLAN_MATRIX = [
    ("bark", 32.9, 22050, 262, 18060),
    ("bark", 50.0, 16000, 100, 8192),
    ("cqlog", 65.0, 22050, 96, 32768),
    ("mel", 20.0, 22050, 200, 18060),
    ("linear", 100.0, 20000, 50, 4096),
]


def painless_sum_direct(plan):
    """Accumulate w * dual * steps sample by sample from the stored tapers."""
    acc = np.zeros(plan.block_length // 2 + 1)
    for k in range(plan.n_bands):
        for j, (w, wd) in enumerate(zip(plan.windows[k], plan.dual_windows[k])):
            acc[plan.offsets[k] + j] += w * wd * plan.time_steps[k]
    return acc


def snr_db(x, y):
    return 10 * np.log10(np.sum(x**2) / np.sum((x - y) ** 2))


def test_bark_plan_band_count(bark_plan):
    assert bark_plan.n_bands == 264
    assert len(bark_plan.time_steps) == 264


def test_low_bins_coarser_in_time_than_high_bins(bark_plan):
    sup = bark_plan.support_lengths[1:-1]
    steps = bark_plan.time_steps[1:-1]
    assert sup[:10].max() < sup[-20:].min()
    assert steps[:10].max() < steps[-20:].min()
    # narrower supports imply finer frequency resolution at the bottom
    assert bark_plan.half_widths[1] < bark_plan.half_widths[-2]


def test_time_steps_even_and_painless(bark_plan):
    assert np.all(bark_plan.time_steps % 2 == 0)
    assert np.all(bark_plan.support_lengths <= bark_plan.time_steps)


def test_redundant_not_undercomplete(bark_plan):
    assert bark_plan.time_steps.sum() >= bark_plan.block_length


def test_frame_diagonal_positive(bark_plan):
    assert np.all(bark_plan.frame_diagonal > 0)


def test_block_too_short():
    with pytest.raises(FrameError):
        build_plan(build_scale("linear", 100, 200, 2), SR, 64)


def test_invalid_arguments():
    scale = build_scale("linear", 100, 200, 2)
    with pytest.raises(DomainError):
        build_plan(scale, 0, 4096)
    with pytest.raises(DomainError):
        build_plan(scale, SR, 4095)
    with pytest.raises(DomainError):
        build_plan(build_scale("linear", 100, 30000, 2), SR, 4096)


@pytest.mark.parametrize("kind,fmin,fmax,bins,block", PLAN_MATRIX)
def test_painless_identity(kind, fmin, fmax, bins, block):
    plan = build_plan(build_scale(kind, fmin, fmax, bins), SR, block)
    direct = painless_sum_direct(plan)
    np.testing.assert_allclose(direct, block, rtol=1e-12)
    np.testing.assert_allclose(plan.painless_sum(), block, rtol=1e-12)


def test_zero_signal(bark_plan):
    c = forward_nsgt(bark_plan, np.zeros(18060))
    assert all(np.all(ck == 0) for ck in c.coefs)
    assert np.all(inverse_nsgt(bark_plan, c) == 0)


def test_coefficient_shapes(bark_plan):
    c = forward_nsgt(bark_plan, np.random.default_rng(0).standard_normal((2, 18060)))
    assert len(c) == 264
    for ck, m in zip(c.coefs, bark_plan.time_steps):
        assert ck.shape == (2, m)


def test_linearity(bark_plan):
    rng = np.random.default_rng(1)
    x, y = rng.standard_normal((2, 18060))
    a, b = 0.7, -2.3
    lhs = forward_nsgt(bark_plan, a * x + b * y).coefs
    cx, cy = forward_nsgt(bark_plan, x).coefs, forward_nsgt(bark_plan, y).coefs
    num = sum(np.sum(np.abs(l - (a * p + b * q)) ** 2) for l, p, q in zip(lhs, cx, cy))
    den = sum(np.sum(np.abs(l) ** 2) for l in lhs)
    assert np.sqrt(num / den) < 1e-10


@pytest.mark.parametrize("band", [5, 60, 150, 240])
def test_sinusoid_energy_concentrates_in_its_group(bark_plan, band):
    f = bark_plan.centers[band]
    t = np.arange(18060) / SR
    c = forward_nsgt(bark_plan, np.sin(2 * np.pi * f * t)).coefs
    energy = np.array([np.sum(np.abs(ck) ** 2) for ck in c])
    for a, b, _ in group_layout(bark_plan):
        if a <= band < b:
            frac = energy[a:b].sum() / energy.sum()
            break
    assert frac >= 0.9


def test_random_roundtrip(bark_plan):
    x = np.random.default_rng(2).standard_normal(18060)
    y = inverse_nsgt(bark_plan, forward_nsgt(bark_plan, x))
    assert snr_db(x, y) >= 100


def test_impulse_roundtrip(bark_plan):
    x = np.zeros(18060)
    x[4321] = 1.0
    y = inverse_nsgt(bark_plan, forward_nsgt(bark_plan, x))
    assert snr_db(x, y) >= 100
    assert np.max(np.abs(x - y)) < 1e-8


def test_shape_errors(bark_plan):
    with pytest.raises(ShapeError):
        forward_nsgt(bark_plan, np.zeros(18000))
    c = forward_nsgt(bark_plan, np.zeros(18060))
    with pytest.raises(ShapeError):
        inverse_nsgt(bark_plan, NsgtCoefficients(c.coefs[:-1], bark_plan))
    bad = list(c.coefs)
    bad[3] = bad[3][:-2]
    with pytest.raises(ShapeError):
        inverse_nsgt(bark_plan, bad)


def test_transform_is_deterministic(bark_plan):
    x = np.random.default_rng(3).standard_normal(18060)
    a = forward_nsgt(bark_plan, x).coefs
    b = forward_nsgt(bark_plan, x).coefs
    assert all(np.array_equal(p, q) for p, q in zip(a, b))


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(list(ScaleKind)),
    st.floats(20.0, 200.0),
    st.integers(8, 200),
    st.sampled_from([8192, 12000, 18060, 32768]),
    st.integers(0, 2**32 - 1),
)
def test_roundtrip_property(kind, fmin, bins, block, seed):
    try:
        plan = build_plan(build_scale(kind, fmin, 22050, bins), SR, block)
    except FrameError:
        assume(False)
    x = np.random.default_rng(seed).uniform(-1, 1, block)
    y = inverse_nsgt(plan, forward_nsgt(plan, x))
    assert snr_db(x, y) >= 100
    np.testing.assert_allclose(plan.painless_sum(), block, rtol=1e-12)
    assert plan.time_steps.sum() >= block
