import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicqt.errors import DomainError
from slicqt.scales import ScaleKind, bark_to_hz, build_scale, hz_to_bark


def bark_direct(f):
    return 13.0 * math.atan(0.00076 * f) + 3.5 * math.atan((f / 7500.0) ** 2)


def test_paper_bark_scale_endpoints():
    s = build_scale("bark", 32.9, 22050, 262)
    fc = s.center_frequencies()
    assert len(fc) == 262
    assert fc[0] == 32.9
    assert fc[-1] == 22050.0
    assert np.all(np.diff(fc) > 0)


def test_fmin_zero_rejected():
    with pytest.raises(DomainError):
        build_scale("linear", 0.0, 22050, 100)


@pytest.mark.parametrize("fmin,fmax,bins", [(100, 100, 10), (200, 100, 10), (-1, 100, 10), (10, 100, 1)])
def test_invalid_scales(fmin, fmax, bins):
    with pytest.raises(DomainError):
        build_scale("mel", fmin, fmax, bins)


def test_logcq_is_geometric():
    fc = build_scale("cqlog", 32.7, 22050, 120).center_frequencies()
    ratio = (22050 / 32.7) ** (1 / 119)
    expected = 32.7 * ratio ** np.arange(120)
    np.testing.assert_allclose(fc, expected, rtol=1e-12)


def test_linear_centers():
    fc = build_scale("linear", 100, 200, 3).center_frequencies()
    assert fc.tolist() == [100.0, 150.0, 200.0]


def test_linear_arithmetic_sequence_exact():
    fc = build_scale("linear", 50, 1050, 11).center_frequencies()
    np.testing.assert_array_equal(fc, 50.0 + 100.0 * np.arange(11))


def test_bark_at_1khz():
    assert bark_direct(1000.0) == pytest.approx(8.51, abs=0.005)
    assert hz_to_bark(1000.0) == pytest.approx(bark_direct(1000.0), abs=1e-12)


def test_bark_roundtrip_paper_scale():
    fc = build_scale("bark", 32.9, 22050, 262).center_frequencies()
    back = bark_to_hz(hz_to_bark(fc))
    np.testing.assert_allclose(back, fc, rtol=1e-6)


def test_bark_centers_uniform_in_bark():
    s = build_scale("bark", 32.9, 22050, 262)
    z = hz_to_bark(s.center_frequencies())
    np.testing.assert_allclose(np.diff(z), np.diff(z).mean(), rtol=1e-8)


def test_bandwidths_linear():
    bw = build_scale("linear", 100, 200, 3).bandwidths()
    np.testing.assert_allclose(bw, [50, 50, 50])


def test_bandwidths_constant_q():
    s = build_scale("cqlog", 32.7, 22050, 120)
    q = s.bandwidths()[1:-1] / s.center_frequencies()[1:-1]
    assert np.max(np.abs(q / q.mean() - 1)) < 0.01


def test_bark_bandwidths_nondecreasing_above_500hz():
    s = build_scale("bark", 32.9, 22050, 262)
    fc, bw = s.center_frequencies(), s.bandwidths()
    # interior bins only: the top bin mirrors its single gap
    sel = (fc > 500)[:-1]
    assert np.all(np.diff(bw[:-1][sel]) >= 0)


@pytest.mark.parametrize("name,kind", [("BARK", ScaleKind.BARK), ("CqLog", ScaleKind.LOGCQ),
                                       (" mel ", ScaleKind.MEL), ("linear", ScaleKind.LINEAR)])
def test_parse_case_insensitive(name, kind):
    assert ScaleKind.parse(name) is kind


def test_parse_unknown():
    with pytest.raises(DomainError):
        ScaleKind.parse("erb")


kinds = st.sampled_from(list(ScaleKind))


@settings(max_examples=60, deadline=None)
@given(kinds, st.floats(1.0, 500.0), st.floats(600.0, 22050.0), st.integers(2, 400))
def test_centers_increasing_and_bounded(kind, fmin, fmax, bins):
    s = build_scale(kind, fmin, fmax, bins)
    fc = s.center_frequencies()
    assert len(fc) == bins
    assert np.all(np.diff(fc) > 0)
    assert fc[0] >= fmin and fc[-1] <= fmax
    assert np.all(s.bandwidths() > 0)


@settings(max_examples=60, deadline=None)
@given(kinds, st.floats(1.0, 22050.0))
def test_scale_roundtrip(kind, f):
    s = build_scale(kind, 1.0, 22050.0, 2)
    back = float(s.from_scale(s.to_scale(f)))
    assert back == pytest.approx(f, rel=1e-6)
