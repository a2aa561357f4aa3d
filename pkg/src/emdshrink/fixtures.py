"""Synthetic test corpus: tonal and speech-like signals at 8 kHz.

Every generator is deterministic. Signals are scaled to a 0.8 peak so they
survive PCM16 quantization without clipping.
"""

from __future__ import annotations

from typing import Callable, Dict

import numpy as np
from scipy.signal import butter, lfilter, sosfilt

SAMPLE_RATE = 8000
LENGTH = 8192
PEAK = 0.8


def _time(n=LENGTH, fs=SAMPLE_RATE):
    return np.arange(n) / fs


def _normalize(x):
    return PEAK * x / np.max(np.abs(x))


def _syllable_envelope(n, fs, onsets, durations, rise=0.02):
    """Sum of raised-cosine-edged on/off gates."""
    env = np.zeros(n)
    ramp = int(rise * fs)
    for start, dur in zip(onsets, durations):
        a = int(start * fs)
        b = min(n, a + int(dur * fs))
        gate = np.ones(b - a)
        r = min(ramp, (b - a) // 2)
        edge = 0.5 - 0.5 * np.cos(np.pi * np.arange(r) / r)
        gate[:r] = edge
        gate[b - a - r:] = edge[::-1]
        env[a:b] = np.maximum(env[a:b], gate)
    return env


def two_tone_am(n=LENGTH, fs=SAMPLE_RATE):
    t = _time(n, fs)
    carrier = np.sin(2 * np.pi * 220 * t) + 0.6 * np.sin(2 * np.pi * 700 * t + 0.3)
    return _normalize((1.0 + 0.8 * np.sin(2 * np.pi * 3 * t)) * carrier)


def two_tone_am_low(n=LENGTH, fs=SAMPLE_RATE):
    t = _time(n, fs)
    carrier = np.sin(2 * np.pi * 120 * t) + 0.5 * np.sin(2 * np.pi * 360 * t + 1.1)
    return _normalize((1.0 + 0.9 * np.sin(2 * np.pi * 2 * t + 0.5)) * carrier)


def chirp(n=LENGTH, fs=SAMPLE_RATE):
    t = _time(n, fs)
    f0, f1 = 150.0, 1500.0
    phase = 2 * np.pi * (f0 * t + 0.5 * (f1 - f0) / t[-1] * t ** 2)
    env = _syllable_envelope(n, fs, [0.05, 0.55], [0.4, 0.4])
    return _normalize(env * np.sin(phase))


def voiced_bursts(n=LENGTH, fs=SAMPLE_RATE, seed=7):
    """Vowel-like bursts: jittered pulse train through formant resonators."""
    rng = np.random.default_rng(seed)
    pulses = np.zeros(n)
    pos = 0.0
    while pos < n:
        f0 = 110.0 + 20.0 * np.sin(2 * np.pi * pos / n)
        pulses[int(pos)] = 1.0
        pos += fs / f0 * (1.0 + 0.01 * rng.standard_normal())
    # Glottal roll-off then three formants.
    x = lfilter([1.0], [1.0, -0.95], pulses)
    for fc, bw in ((700.0, 90.0), (1220.0, 110.0), (2600.0, 160.0)):
        r = np.exp(-np.pi * bw / fs)
        a = [1.0, -2 * r * np.cos(2 * np.pi * fc / fs), r * r]
        x = lfilter([1.0 - r], a, x)
    env = _syllable_envelope(n, fs, [0.04, 0.38, 0.72], [0.26, 0.24, 0.25])
    return _normalize(env * x)


def noise_bursts(n=LENGTH, fs=SAMPLE_RATE, seed=11):
    """Fricative-like band-passed noise bursts separated by silence."""
    rng = np.random.default_rng(seed)
    sos = butter(4, [300.0, 1800.0], btype="band", fs=fs, output="sos")
    x = sosfilt(sos, rng.standard_normal(n))
    env = _syllable_envelope(n, fs, [0.08, 0.5], [0.3, 0.35], rise=0.04)
    return _normalize(env * x)


def mixed_utterance(n=LENGTH, fs=SAMPLE_RATE):
    """Voiced segment, fricative segment, then a low AM tone."""
    t = _time(n, fs)
    v = voiced_bursts(n, fs, seed=3) * _syllable_envelope(n, fs, [0.0], [0.35])
    f = noise_bursts(n, fs, seed=5) * _syllable_envelope(n, fs, [0.4], [0.25])
    tone = (np.sin(2 * np.pi * 180 * t) * (0.5 + 0.5 * np.sin(2 * np.pi * 4 * t))
            * _syllable_envelope(n, fs, [0.7], [0.3]))
    return _normalize(v + 0.6 * f + 0.7 * tone)


FIXTURES: Dict[str, Callable[[], np.ndarray]] = {
    "two_tone_am": two_tone_am,
    "two_tone_am_low": two_tone_am_low,
    "chirp": chirp,
    "voiced_bursts": voiced_bursts,
    "noise_bursts": noise_bursts,
    "mixed_utterance": mixed_utterance,
}


def make_corpus() -> Dict[str, np.ndarray]:
    return {name: gen() for name, gen in FIXTURES.items()}
