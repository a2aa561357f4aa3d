import struct

import numpy as np
import pytest

from emdshrink.io_wav import (AudioFile, MalformedWavError,
                              UnsupportedEncodingError, WavError, encode_wav,
                              load_wav, parse_wav, save_wav)
from emdshrink.signal_core import Signal


def pcm16(samples, rate=8000, channels=1, extra_chunks=b"", tag=1, bits=16):
    payload = np.asarray(samples, dtype="<i2").tobytes()
    align = channels * bits // 8
    fmt = struct.pack("<HHIIHH", tag, channels, rate, rate * align, align, bits)
    body = (b"WAVE" + b"fmt " + struct.pack("<I", 16) + fmt + extra_chunks
            + b"data" + struct.pack("<I", len(payload)) + payload)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def test_silence(tmp_path):
    p = tmp_path / "s.wav"
    p.write_bytes(pcm16(np.zeros(8000)))
    a = load_wav(p)
    assert a.sample_rate_hz == 8000 and a.channels == 1
    np.testing.assert_array_equal(a.samples, np.zeros(8000))


def test_normalization():
    a = parse_wav(pcm16([32767, -32768]))
    assert a.samples.tolist() == [32767 / 32768, -1.0]


def test_stereo_is_averaged():
    frames = np.array([[100, 100], [-7, -7], [32767, 32767]]).ravel()
    a = parse_wav(pcm16(frames, channels=2))
    assert a.samples.tolist() == [100 / 32768, -7 / 32768, 32767 / 32768]
    assert a.warnings and "averaged" in a.warnings[0]


def test_skips_list_and_fact_chunks():
    extra = (b"LIST" + struct.pack("<I", 5) + b"INFOx\x00"
             + b"fact" + struct.pack("<I", 4) + struct.pack("<I", 3))
    a = parse_wav(pcm16([1, 2, 3], extra_chunks=extra))
    assert a.samples.tolist() == [1 / 32768, 2 / 32768, 3 / 32768]


def test_round_trip(tmp_path):
    for seed in range(20):
        x = np.random.default_rng(seed).uniform(-0.9, 0.9, 2000)
        save_wav(Signal(x, 8000), tmp_path / "r.wav")
        y = load_wav(tmp_path / "r.wav").samples
        assert np.abs(y - x).max() <= 1 / 32767


def test_clamp_and_save_variants(tmp_path):
    save_wav([1.5, -2.0, 0.0], tmp_path / "c.wav", 16000)
    raw = (tmp_path / "c.wav").read_bytes()
    assert np.frombuffer(raw[44:], dtype="<i2").tolist() == [32767, -32768, 0]
    audio = load_wav(tmp_path / "c.wav")
    assert audio.sample_rate_hz == 16000
    save_wav(audio, tmp_path / "d.wav")
    assert (tmp_path / "d.wav").read_bytes() == raw


def test_save_errors(tmp_path):
    with pytest.raises(ValueError, match="empty signal"):
        save_wav(np.zeros(0), tmp_path / "e.wav", 8000)
    with pytest.raises(ValueError):
        save_wav([0.1], tmp_path / "e.wav")
    with pytest.raises(OSError):
        save_wav([0.1], tmp_path / "missing" / "e.wav", 8000)


def test_load_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_wav(tmp_path / "nope.wav")
    with pytest.raises(UnsupportedEncodingError) as e:
        parse_wav(pcm16([1, 2], tag=3, bits=32))
    assert e.value.offset is not None and "byte offset" in str(e.value)
    with pytest.raises(UnsupportedEncodingError):
        parse_wav(pcm16(np.zeros(4, dtype=np.int16).view(np.uint8), bits=8))
    with pytest.raises(MalformedWavError):
        parse_wav(b"RIFX" + bytes(40))
    with pytest.raises(MalformedWavError):
        parse_wav(pcm16([1, 2, 3])[:-2])


def test_errors_are_distinct_types():
    assert issubclass(MalformedWavError, WavError)
    assert issubclass(UnsupportedEncodingError, WavError)
    assert not issubclass(MalformedWavError, UnsupportedEncodingError)


def test_fuzzed_headers_only_raise_wav_errors():
    rng = np.random.default_rng(0)
    base = bytearray(encode_wav(np.linspace(-0.5, 0.5, 64), 8000))
    outcomes = {"ok": 0, "rejected": 0}
    for _ in range(1000):
        blob = bytearray(base)
        kind = rng.integers(3)
        if kind == 0:
            for pos in rng.integers(0, 44, size=rng.integers(1, 6)):
                blob[pos] = rng.integers(256)
        elif kind == 1:
            blob = blob[:rng.integers(0, len(blob))]
        else:
            pos = rng.integers(0, 44)
            blob[pos:pos] = bytes(rng.integers(0, 256, size=rng.integers(1, 9)).tolist())
        try:
            parse_wav(bytes(blob))
            outcomes["ok"] += 1
        except WavError:
            outcomes["rejected"] += 1
    assert outcomes["rejected"] > 0
