"""Signal containers, AWGN injection at a target SNR, framing and SNR metrics.

Numerical routines throughout the package operate on 1-D float64 numpy
arrays; :class:`Signal` pairs samples with a sample rate where the rate
matters (file I/O, the CLI).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real-valued signal."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64).ravel()
        if x.size < 1:
            raise ValueError("signal must contain at least one sample")
        if not np.all(np.isfinite(x)):
            raise ValueError("signal contains non-finite samples")
        if int(self.sample_rate_hz) <= 0:
            raise ValueError("sample_rate_hz must be positive")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class Frame:
    start_index: int
    values: np.ndarray

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class NoiseSpec:
    target_input_snr_db: float
    seed: int = 0


def as_samples(x) -> np.ndarray:
    """Return the samples of ``x`` (a :class:`Signal` or array-like) as float64."""
    if isinstance(x, Signal):
        return x.samples
    return np.asarray(x, dtype=np.float64).ravel()


def gaussian_noise(n: int, seed: int) -> np.ndarray:
    """Unit-variance white Gaussian noise from a PCG64 stream.

    PCG64 plus numpy's ziggurat normal sampler are both specified
    algorithms, so a given seed produces the same draws on every platform.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal(n)


def add_awgn(clean, spec: NoiseSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Corrupt ``clean`` with white Gaussian noise at an exact input SNR.

    The noise draw is rescaled against its realized energy, so
    ``snr_db(clean, noisy)`` equals ``spec.target_input_snr_db`` up to
    rounding rather than only in expectation.

    Returns
    -------
    noisy, noise : ndarray
        ``noisy == clean + noise`` elementwise.
    """
    x = as_samples(clean)
    e_clean = float(np.dot(x, x))
    if e_clean == 0.0:
        raise ValueError("cannot define SNR: clean signal has zero energy")
    w = gaussian_noise(x.size, spec.seed)
    e_w = float(np.dot(w, w))
    scale = np.sqrt(e_clean / e_w) * 10.0 ** (-spec.target_input_snr_db / 20.0)
    noise = scale * w
    return x + noise, noise


def _check_pair(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")


def snr_db(reference, estimate) -> float:
    """Conventional SNR, reference energy over error energy, in dB."""
    ref = as_samples(reference)
    est = as_samples(estimate)
    _check_pair(ref, est)
    e_ref = float(np.dot(ref, ref))
    if e_ref == 0.0:
        raise ValueError("cannot define SNR: reference has zero energy")
    err = ref - est
    e_err = float(np.dot(err, err))
    if e_err == 0.0:
        return float("inf")
    return 10.0 * np.log10(e_ref / e_err)


def snr_out_paper(clean, denoised) -> float:
    """Output SNR with the denoised energy in the numerator.

    ``10 log10(sum(denoised**2) / sum((clean - denoised)**2))``. Returns
    ``+inf`` for a zero error and ``-inf`` for an all-zero output.
    """
    x = as_samples(clean)
    y = as_samples(denoised)
    _check_pair(x, y)
    err = x - y
    e_err = float(np.dot(err, err))
    if e_err == 0.0:
        return float("inf")
    e_y = float(np.dot(y, y))
    if e_y == 0.0:
        return float("-inf")
    return 10.0 * np.log10(e_y / e_err)


def segment(signal, frame_length: int) -> List[Frame]:
    """Split into consecutive non-overlapping frames; the last may be short."""
    if frame_length < 1:
        raise ValueError("frame_length must be >= 1")
    x = as_samples(signal)
    return [Frame(start, x[start:start + frame_length])
            for start in range(0, x.size, frame_length)]


def concatenate(frames: List[Frame]) -> np.ndarray:
    if not frames:
        return np.zeros(0)
    return np.concatenate([f.values for f in frames])
