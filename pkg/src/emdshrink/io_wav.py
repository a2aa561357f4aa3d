"""PCM16 RIFF/WAVE reading and writing.

The reader walks the chunk list itself so malformed files fail with the
byte offset of the problem; ``LIST``, ``fact`` and other unknown chunks are
skipped.
"""

from __future__ import annotations

import logging
import os
import struct
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .signal_core import Signal

logger = logging.getLogger(__name__)

PCM_SCALE = 32768.0
WAVE_FORMAT_PCM = 1
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class WavError(ValueError):
    """Base class for unreadable or unsupported WAV data."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class MalformedWavError(WavError):
    pass


class UnsupportedEncodingError(WavError):
    pass


@dataclass
class AudioFile:
    signal: Signal
    source_path: str = ""
    bit_depth: int = 16
    channels: int = 1
    warnings: List[str] = field(default_factory=list)

    @property
    def samples(self) -> np.ndarray:
        return self.signal.samples

    @property
    def sample_rate_hz(self) -> int:
        return self.signal.sample_rate_hz


def parse_wav(data: bytes, source_path: str = "") -> AudioFile:
    """Decode an in-memory PCM16 WAV image."""
    if len(data) < 12:
        raise MalformedWavError("file too short for a RIFF header", 0)
    if data[0:4] != b"RIFF":
        raise MalformedWavError("missing RIFF signature", 0)
    if data[8:12] != b"WAVE":
        raise MalformedWavError("RIFF form type is not WAVE", 8)

    fmt = None
    pcm = None
    pos = 12
    while pos < len(data):
        if pos + 8 > len(data):
            raise MalformedWavError("truncated chunk header", pos)
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = pos + 8
        if body + size > len(data):
            if cid == b"data" and fmt is not None:
                raise MalformedWavError(
                    f"data chunk declares {size} bytes, {len(data) - body} present", pos)
            raise MalformedWavError(f"chunk {cid!r} overruns end of file", pos)
        if cid == b"fmt ":
            if size < 16:
                raise MalformedWavError("fmt chunk shorter than 16 bytes", pos)
            tag, channels, rate, _, align, bits = struct.unpack_from("<HHIIHH", data, body)
            if tag == WAVE_FORMAT_EXTENSIBLE and size >= 26:
                (tag,) = struct.unpack_from("<H", data, body + 24)
            if tag != WAVE_FORMAT_PCM or bits != 16:
                raise UnsupportedEncodingError(
                    f"only PCM16 is supported (format tag {tag}, {bits} bits)", body)
            if channels < 1:
                raise MalformedWavError("fmt chunk declares zero channels", body + 2)
            if rate < 1:
                raise MalformedWavError("fmt chunk declares zero sample rate", body + 4)
            if align != 2 * channels:
                raise MalformedWavError(
                    f"block align {align} inconsistent with {channels} channel(s)", body + 12)
            fmt = (channels, rate)
        elif cid == b"data":
            if fmt is None:
                raise MalformedWavError("data chunk precedes fmt chunk", pos)
            pcm = (body, size)
        pos = body + size + (size & 1)

    if fmt is None:
        raise MalformedWavError("no fmt chunk", len(data))
    if pcm is None:
        raise MalformedWavError("no data chunk", len(data))
    channels, rate = fmt
    body, size = pcm
    frame_bytes = 2 * channels
    if size % frame_bytes:
        raise MalformedWavError(
            f"data size {size} is not a multiple of the {frame_bytes}-byte frame", body - 4)
    if size == 0:
        raise MalformedWavError("data chunk is empty", body - 4)
    raw = np.frombuffer(data, dtype="<i2", count=size // 2, offset=body)
    x = raw.astype(np.float64).reshape(-1, channels) / PCM_SCALE
    warnings = []
    if channels > 1:
        msg = f"{source_path or 'input'}: averaged {channels} channels to mono"
        logger.warning(msg)
        warnings.append(msg)
        x = x.mean(axis=1)
    else:
        x = x[:, 0]
    return AudioFile(Signal(x, rate), source_path, 16, 1, warnings)


def load_wav(path) -> AudioFile:
    """Read a PCM16 WAV file as mono float samples in [-1, 1)."""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_wav(data, path)


def encode_wav(samples, sample_rate_hz: int) -> bytes:
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("empty signal")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains non-finite samples")
    q = np.clip(np.round(x * PCM_SCALE), -32768, 32767).astype("<i2")
    payload = q.tobytes()
    header = struct.pack("<4sI4s4sIHHIIHH4sI",
                         b"RIFF", 36 + len(payload), b"WAVE",
                         b"fmt ", 16, WAVE_FORMAT_PCM, 1, int(sample_rate_hz),
                         2 * int(sample_rate_hz), 2, 16,
                         b"data", len(payload))
    return header + payload


def save_wav(audio, path, sample_rate_hz: int | None = None) -> None:
    """Write mono PCM16, quantizing as ``round(x * 32768)`` clipped to int16.

    Using the reader's scale keeps the round-trip error within half a step.

    ``audio`` may be an :class:`AudioFile`, a :class:`Signal`, or raw
    samples together with ``sample_rate_hz``.
    """
    if isinstance(audio, AudioFile):
        audio = audio.signal
    if isinstance(audio, Signal):
        samples, rate = audio.samples, audio.sample_rate_hz
    else:
        if sample_rate_hz is None:
            raise ValueError("sample_rate_hz is required for raw samples")
        samples, rate = audio, sample_rate_hz
    blob = encode_wav(samples, rate)
    with open(os.fspath(path), "wb") as fh:
        fh.write(blob)
