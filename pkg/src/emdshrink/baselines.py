"""Comparison denoisers: short-time spectral Wiener gain and Haar-wavelet
universal-threshold shrinkage (soft and hard)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .shrinkage import Flavor, mad_sigma, shrink, universal_threshold
from .signal_core import as_samples

WINDOW_NAME = "periodic-hann"


@dataclass(frozen=True)
class WienerConfig:
    """``noise_power`` is the per-sample noise variance; ``None`` estimates it
    from the first ``estimate_frames`` frames of the input."""

    fft_frame_length: int = 256
    overlap_fraction: float = 0.5
    noise_power: Optional[float] = None
    estimate_frames: int = 4

    def __post_init__(self):
        L = self.fft_frame_length
        if L < 2 or L & (L - 1):
            raise ValueError("fft_frame_length must be a power of two")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError("overlap_fraction must be in [0, 1)")
        if self.noise_power is not None and self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")
        if self.estimate_frames < 1:
            raise ValueError("estimate_frames must be >= 1")

    @property
    def hop(self) -> int:
        return max(1, int(round(self.fft_frame_length * (1.0 - self.overlap_fraction))))

    def as_dict(self):
        return {"fft_frame_length": self.fft_frame_length,
                "overlap_fraction": self.overlap_fraction,
                "noise_power": self.noise_power,
                "estimate_frames": self.estimate_frames,
                "window": WINDOW_NAME}


def _window(config: WienerConfig) -> np.ndarray:
    L = config.fft_frame_length
    if config.overlap_fraction == 0.0:
        return np.ones(L)
    return 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(L) / L)


def _periodograms(frames: np.ndarray, w: np.ndarray):
    """Spectra of windowed frames and periodograms scaled so white noise of
    variance s2 has expectation ``s2 * L`` in every bin."""
    L = w.size
    X = np.fft.rfft(frames * w, axis=-1)
    P = (np.abs(X) ** 2) * (L / np.dot(w, w))
    return X, P


def estimate_noise_power(noisy, config: WienerConfig = WienerConfig()) -> float:
    """Mean periodogram level of the leading frames, per sample."""
    x = as_samples(noisy)
    L, hop = config.fft_frame_length, config.hop
    starts = [s for s in range(0, x.size - L + 1, hop)][:config.estimate_frames]
    frames = np.stack([x[s:s + L] for s in starts])
    _, P = _periodograms(frames, _window(config))
    return float(P.mean() / L)


def _frame_layout(n: int, config: WienerConfig):
    """Zero-pad ``L - hop`` samples on each side so every input sample is
    covered by the same number of frames as an interior one."""
    L, hop = config.fft_frame_length, config.hop
    front = L - hop
    count = int(np.ceil((n + front) / hop))
    return front, (count - 1) * hop + L, count


def wiener_gains(noisy, config: WienerConfig = WienerConfig()):
    """Per-frame spectral gains and the framing used to compute them."""
    x = as_samples(noisy)
    L, hop = config.fft_frame_length, config.hop
    if x.size < L:
        raise ValueError("signal shorter than one Wiener frame")
    sigma2 = (config.noise_power if config.noise_power is not None
              else estimate_noise_power(x, config))
    front, padded_len, count = _frame_layout(x.size, config)
    xp = np.zeros(padded_len)
    xp[front:front + x.size] = x
    idx = np.arange(count)[:, None] * hop + np.arange(L)[None, :]
    w = _window(config)
    X, P = _periodograms(xp[idx], w)
    floor = sigma2 * L
    with np.errstate(divide="ignore", invalid="ignore"):
        G = np.where(P > 0, np.maximum(0.0, (P - floor) / P), 1.0)
    return G, X, idx, xp.size, front


def wiener_denoise(noisy, config: WienerConfig = WienerConfig()) -> np.ndarray:
    """Short-time spectral Wiener gain ``max(0, (P - s2 L) / P)``.

    Frames are analysed with a periodic Hann window (rectangular when the
    overlap is zero) and overlap-added, then divided by the overlapped
    window sum so that a unit gain reproduces the input exactly.
    """
    x = as_samples(noisy)
    G, X, idx, padded_len, front = wiener_gains(x, config)
    L = config.fft_frame_length
    frames = np.fft.irfft(G * X, n=L, axis=-1)
    w = _window(config)
    out = np.zeros(padded_len)
    wsum = np.zeros(padded_len)
    np.add.at(out, idx, frames)
    np.add.at(wsum, idx, np.broadcast_to(w, idx.shape))
    out = out[front:front + x.size]
    wsum = wsum[front:front + x.size]
    return out / wsum


@dataclass(frozen=True)
class DwtConfig:
    """``levels=None`` picks ``floor(log2 N) - 4`` (at least 1)."""

    levels: Optional[int] = None
    wavelet: str = "haar"

    def __post_init__(self):
        if self.wavelet != "haar":
            raise ValueError("only the Haar wavelet is supported")
        if self.levels is not None and self.levels < 1:
            raise ValueError("levels must be >= 1")

    def resolve_levels(self, n: int) -> int:
        if self.levels is not None:
            return self.levels
        return max(1, int(np.floor(np.log2(n))) - 4)

    def as_dict(self):
        return {"levels": self.levels, "wavelet": self.wavelet}


@dataclass
class HaarPyramid:
    """``details[0]`` is the finest level."""

    approx: np.ndarray
    details: List[np.ndarray] = field(default_factory=list)
    length: int = 0

    @property
    def levels(self) -> int:
        return len(self.details)


_SQRT2 = np.sqrt(2.0)


def dwt_forward(signal, config: DwtConfig = DwtConfig()) -> HaarPyramid:
    """Orthonormal multilevel Haar analysis.

    Inputs whose length is not a multiple of ``2**levels`` are zero-padded;
    the original length is kept for :func:`dwt_inverse`.
    """
    x = as_samples(signal)
    levels = config.resolve_levels(x.size)
    block = 2 ** levels
    if block > x.size:
        raise ValueError(f"{levels} levels too deep for {x.size} samples")
    padded = int(np.ceil(x.size / block)) * block
    a = np.zeros(padded)
    a[:x.size] = x
    details = []
    for _ in range(levels):
        even, odd = a[0::2], a[1::2]
        details.append((even - odd) / _SQRT2)
        a = (even + odd) / _SQRT2
    return HaarPyramid(a, details, x.size)


def dwt_inverse(pyramid: HaarPyramid) -> np.ndarray:
    a = np.asarray(pyramid.approx, dtype=np.float64)
    for d in reversed(pyramid.details):
        out = np.empty(2 * a.size)
        out[0::2] = (a + d) / _SQRT2
        out[1::2] = (a - d) / _SQRT2
        a = out
    return a[:pyramid.length] if pyramid.length else a


def universal_dwt_denoise(noisy, flavor=Flavor.SOFT,
                          config: DwtConfig = DwtConfig()) -> np.ndarray:
    """Universal-threshold wavelet shrinkage.

    Sigma is the MAD estimate of the finest detail band; every detail band
    is shrunk at ``sigma * sqrt(2 ln N)``, the approximation band is kept.
    """
    x = as_samples(noisy)
    pyr = dwt_forward(x, config)
    sigma = mad_sigma(pyr.details[0])
    t = universal_threshold(sigma, x.size)
    pyr.details = [shrink(d, t, flavor) for d in pyr.details]
    return dwt_inverse(pyr)
