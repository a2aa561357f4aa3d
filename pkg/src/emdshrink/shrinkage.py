"""Threshold rules and shrinkage functions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# Median of |N(0, 1)|; turns a median absolute value into a Gaussian sigma.
MAD_GAUSSIAN = 0.6745


class ThresholdMethod(str, enum.Enum):
    NORMAL_SHRINK = "normalshrink"
    UNIVERSAL = "universal"


class Flavor(str, enum.Enum):
    SOFT = "soft"
    HARD = "hard"


@dataclass(frozen=True)
class ThresholdSpec:
    value: float
    method: ThresholdMethod
    flavor: Flavor = Flavor.SOFT

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value >= 0):
            raise ValueError("threshold must be finite and non-negative")

    def apply(self, values):
        return shrink(values, self.value, self.flavor)


def mad_sigma(values) -> float:
    """Robust noise sigma: ``median(|x|) / 0.6745``."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("mad_sigma of an empty sequence")
    return float(np.median(np.abs(x)) / MAD_GAUSSIAN)


def normal_shrink_beta(frame_length: int, num_imfs: int) -> float:
    """Scale parameter ``sqrt(ln(L / J))``; undefined unless ``L > J``."""
    if frame_length <= num_imfs or num_imfs < 1:
        raise ValueError(
            f"scale parameter undefined for frame_length={frame_length}, "
            f"num_imfs={num_imfs}")
    return float(np.sqrt(np.log(frame_length / num_imfs)))


def normal_shrink_threshold(values, frame_length: int, num_imfs: int,
                            square_variance: bool = True) -> float:
    """NormalShrink threshold ``beta * sigma_hat**2 / sigma_y``.

    ``sigma_hat`` is the MAD estimate over ``values`` and ``sigma_y`` their
    population standard deviation. With ``square_variance=False`` the MAD
    estimate is used unsquared in the numerator.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("normal_shrink_threshold of an empty sequence")
    beta = normal_shrink_beta(frame_length, num_imfs)
    sigma_y = float(np.std(x))
    if sigma_y < 1e-15:
        return 0.0
    sigma_hat = mad_sigma(x)
    var = sigma_hat ** 2 if square_variance else sigma_hat
    return beta * var / sigma_y


def universal_threshold(noise_sigma: float, n: int) -> float:
    """Donoho-Johnstone universal threshold ``sigma * sqrt(2 ln n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 0.0
    return float(noise_sigma * np.sqrt(2.0 * np.log(n)))


def soft_threshold(values, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("threshold must be non-negative")
    x = np.asarray(values, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def hard_threshold(values, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("threshold must be non-negative")
    x = np.asarray(values, dtype=np.float64)
    return np.where(np.abs(x) > t, x, 0.0)


def shrink(values, t: float, flavor=Flavor.SOFT) -> np.ndarray:
    if Flavor(flavor) is Flavor.SOFT:
        return soft_threshold(values, t)
    return hard_threshold(values, t)
