import numpy as np
import pytest
from PIL import Image

from slicqt.audio_io import Waveform, synth_stems, write_stem_set, write_wav
from slicqt.cli import main

SR = 44100


@pytest.fixture(scope="module")
def wav(tmp_path_factory):
    d = tmp_path_factory.mktemp("wav")
    t = np.arange(SR) / SR
    x = np.zeros(SR)
    for k, f in enumerate((1568.0, 2093.0, 2637.0, 3136.0)):
        start = k * SR // 4
        env = np.exp(-(t[: SR - start]) * 12)
        x[start:] += 0.2 * env * np.sin(2 * np.pi * f * t[: SR - start])
    path = d / "glock.wav"
    write_wav(path, Waveform(np.stack([x, 0.5 * x]), SR))
    return path


@pytest.fixture(scope="module")
def stem_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("stems") / "synth"
    write_stem_set(d, synth_stems(0, 1.0))
    return d


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrogram_slicq(tmp_path, capsys, wav):
    out = tmp_path / "s.png"
    code, _, _ = run(capsys, "spectrogram", wav, "-o", out, "--scale", "bark", "--bins", 262, "--fmin", 32.9)
    assert code == 0
    img = np.asarray(Image.open(out))
    assert img.shape[0] == 264
    side = out.with_suffix(".txt").read_text()
    assert "height 264" in side and "transform slicq" in side


def test_spectrogram_stft(tmp_path, capsys, wav):
    out = tmp_path / "t.png"
    assert run(capsys, "spectrogram", wav, "-o", out, "--transform", "stft")[0] == 0
    assert np.asarray(Image.open(out)).shape[0] == 2049


@pytest.mark.parametrize("transform", ["slicq", "stft"])
def test_spectrogram_zero_signal_uniform(tmp_path, capsys, transform):
    src = tmp_path / "z.wav"
    write_wav(src, Waveform(np.zeros((1, SR)), SR))
    out = tmp_path / "z.png"
    assert run(capsys, "spectrogram", src, "-o", out, "--transform", transform)[0] == 0
    img = np.asarray(Image.open(out))
    assert np.all(img == img.flat[0])
    assert "db_max -120" in out.with_suffix(".txt").read_text()


@pytest.mark.parametrize("transform", ["slicq", "stft"])
def test_roundtrip_ok(capsys, wav, transform):
    code, out, _ = run(capsys, "roundtrip", wav, "--transform", transform)
    assert code == 0
    assert float(out.split()[1]) >= 100


def test_roundtrip_frame_error(capsys, wav):
    code, _, err = run(capsys, "roundtrip", wav, "--scale", "cqlog", "--bins", 300, "--fmin", 10, "--slice-len", 4096,
                       "--trans-len", 1024)
    assert code == 5
    assert "FrameError" in err


def test_usage_errors(capsys, wav):
    assert run(capsys, "roundtrip", wav, "--fmin", 0)[0] == 2
    assert run(capsys, "roundtrip", wav, "--slice-len", 18060, "--trans-len", 4516)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["roundtrip"])
    assert exc.value.code == 2


def test_missing_input(tmp_path, capsys):
    assert run(capsys, "roundtrip", tmp_path / "missing.wav")[0] == 3


def test_bad_format(tmp_path, capsys):
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"RIFF\x24\x00\x00\x00WAVEfm")
    assert run(capsys, "roundtrip", bad)[0] == 4


def test_oracle_both_transforms_deterministic(tmp_path, capsys, stem_dir):
    outputs = {}
    for tf in ("slicq", "stft"):
        first = run(capsys, "oracle", stem_dir, "--transform", tf, "--report", tmp_path / tf)
        second = run(capsys, "oracle", stem_dir, "--transform", tf)
        assert first[0] == second[0] == 0
        assert first[1] == second[1]
        median = [line for line in first[1].splitlines() if "median" in line][0]
        outputs[tf] = float(median.split()[1])
        assert np.isfinite(outputs[tf])
        assert (tmp_path / f"{tf}.jsonl").read_text().count("\n") == 4


def test_oracle_single_target(capsys, stem_dir):
    code, out, _ = run(capsys, "oracle", stem_dir, "--transform", "stft", "--targets", "vocals")
    assert code == 0
    assert "vocals" in out and "drums" not in out
    assert run(capsys, "oracle", stem_dir, "--targets", "piano")[0] == 2


def test_oracle_env_root(monkeypatch, capsys, stem_dir):
    monkeypatch.setenv("SLICQT_DATASET_ROOT", str(stem_dir.parent))
    assert run(capsys, "oracle", "--transform", "stft", "--targets", "bass")[0] == 0


def test_oracle_dataset_errors(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SLICQT_DATASET_ROOT", raising=False)
    monkeypatch.delenv("MUSDB_PATH", raising=False)
    assert run(capsys, "oracle")[0] == 2
    assert run(capsys, "oracle", tmp_path)[0] == 6


def test_search_degenerate_byte_identical(tmp_path, capsys, stem_dir):
    args = ["search", stem_dir, "--iterations", 1, "--seed", 7, "--kinds", "bark",
            "--bins-range", 262, 262, "--fmin-range", 32.9, 32.9]
    assert run(capsys, *args, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, *args, "--out", tmp_path / "b")[0] == 0
    for ext in (".jsonl", ".txt"):
        assert (tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()
    lines = (tmp_path / "a.jsonl").read_text().splitlines()
    assert len(lines) == 2
    assert "best: iteration 0, bark 262 bins" in (tmp_path / "a.txt").read_text()


def test_search_resume(tmp_path, capsys, stem_dir):
    base = ["search", stem_dir, "--seed", 3, "--kinds", "bark,mel", "--bins-range", 20, 60]
    assert run(capsys, *base, "--iterations", 2, "--out", tmp_path / "part")[0] == 0
    assert run(capsys, *base, "--iterations", 3, "--out", tmp_path / "full")[0] == 0
    assert run(capsys, *base, "--iterations", 3, "--out", tmp_path / "res",
               "--resume", tmp_path / "part.jsonl")[0] == 0
    assert (tmp_path / "res.jsonl").read_bytes() == (tmp_path / "full.jsonl").read_bytes()


def test_search_usage(tmp_path, capsys, stem_dir):
    assert run(capsys, "search", stem_dir, "--iterations", 0)[0] == 2
    assert run(capsys, "search", stem_dir, "--kinds", "erb")[0] == 2
