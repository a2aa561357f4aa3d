"""Empirical Mode Decomposition.

Extrema detection, natural cubic spline envelopes, sifting with the
pointwise SD stopping test, and the outer loop that peels IMFs off the
residue until it has fewer than three extrema.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_banded

from .signal_core import as_samples

logger = logging.getLogger(__name__)

# SD terms are skipped where the previous iterate is this close to zero.
SD_GUARD = 1e-12


class InsufficientExtrema(ValueError):
    """Raised when an envelope cannot be built from the available extrema."""


class BoundaryPolicy(str, enum.Enum):
    MIRROR_EXTREMA = "mirror"
    CLAMP_ENDPOINTS = "clamp"


@dataclass(frozen=True)
class SiftConfig:
    sd_threshold: float = 0.3
    max_sift_iterations: int = 100
    max_imfs: int = 20
    boundary_policy: BoundaryPolicy = BoundaryPolicy.MIRROR_EXTREMA

    def __post_init__(self):
        if not self.sd_threshold > 0:
            raise ValueError("sd_threshold must be positive")
        if self.max_sift_iterations < 1:
            raise ValueError("max_sift_iterations must be >= 1")
        if self.max_imfs < 1:
            raise ValueError("max_imfs must be >= 1")
        object.__setattr__(self, "boundary_policy",
                           BoundaryPolicy(self.boundary_policy))

    def as_dict(self):
        return {
            "sd_threshold": self.sd_threshold,
            "max_sift_iterations": self.max_sift_iterations,
            "max_imfs": self.max_imfs,
            "boundary_policy": self.boundary_policy.value,
        }


@dataclass(frozen=True)
class ExtremaSet:
    max_indices: np.ndarray
    max_values: np.ndarray
    min_indices: np.ndarray
    min_values: np.ndarray

    @property
    def maxima(self) -> List[Tuple[int, float]]:
        return list(zip(self.max_indices.tolist(), self.max_values.tolist()))

    @property
    def minima(self) -> List[Tuple[int, float]]:
        return list(zip(self.min_indices.tolist(), self.min_values.tolist()))

    def __len__(self):
        return self.max_indices.size + self.min_indices.size


@dataclass
class ImfDecomposition:
    """IMFs ordered fast to slow plus the final residue.

    ``sift_counts[j]`` is the number of sifting iterations spent on IMF j and
    ``final_sd[j]`` the SD value between its last two iterates.
    """

    imfs: List[np.ndarray]
    residue: np.ndarray
    sift_counts: List[int] = field(default_factory=list)
    final_sd: List[float] = field(default_factory=list)
    stopped_by_max_imfs: bool = False

    @property
    def num_imfs(self) -> int:
        return len(self.imfs)

    def __len__(self):
        return self.residue.size


def find_extrema(signal) -> ExtremaSet:
    """Interior strict local maxima and minima.

    A plateau (run of equal samples) bounded on both sides by lower (higher)
    samples counts as one maximum (minimum) located at the run's midpoint,
    rounded down. Endpoints are never extrema.
    """
    x = as_samples(signal)
    empty = np.zeros(0, dtype=np.int64)
    if x.size < 3:
        return ExtremaSet(empty, np.zeros(0), empty, np.zeros(0))
    # Collapse runs of equal samples.
    starts = np.concatenate(([0], np.flatnonzero(np.diff(x) != 0) + 1))
    ends = np.concatenate((starts[1:] - 1, [x.size - 1]))
    vals = x[starts]
    if vals.size < 3:
        return ExtremaSet(empty, np.zeros(0), empty, np.zeros(0))
    mid = vals[1:-1]
    is_max = (mid > vals[:-2]) & (mid > vals[2:])
    is_min = (mid < vals[:-2]) & (mid < vals[2:])
    rep = (starts[1:-1] + ends[1:-1]) // 2
    imax = rep[is_max]
    imin = rep[is_min]
    return ExtremaSet(imax, x[imax], imin, x[imin])


def natural_spline(kx: np.ndarray, ky: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate the natural cubic spline through ``(kx, ky)`` at ``t``.

    Second derivatives at the knots come from the usual tridiagonal system
    with zero curvature at both ends. Points outside the knot span continue
    linearly, which is the natural spline's own extension.
    """
    kx = np.asarray(kx, dtype=np.float64)
    ky = np.asarray(ky, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    m = kx.size
    if m < 2:
        raise InsufficientExtrema("insufficient extrema: need at least 2 knots")
    h = np.diff(kx)
    if np.any(h <= 0):
        raise ValueError("knot positions must be strictly increasing")
    slope = np.diff(ky) / h

    M = np.zeros(m)
    if m > 2:
        ab = np.zeros((3, m - 2))
        ab[0, 1:] = h[1:-1]
        ab[1, :] = 2.0 * (h[:-1] + h[1:])
        ab[2, :-1] = h[1:-1]
        rhs = 6.0 * np.diff(slope)
        M[1:-1] = solve_banded((1, 1), ab, rhs)

    # Per-segment polynomial in the local coordinate s = t - kx[i].
    c1 = slope - h * (2.0 * M[:-1] + M[1:]) / 6.0
    c2 = 0.5 * M[:-1]
    c3 = (M[1:] - M[:-1]) / (6.0 * h)
    seg = np.clip(np.searchsorted(kx, t, side="right") - 1, 0, m - 2)
    s = t - kx[seg]
    out = ((c3[seg] * s + c2[seg]) * s + c1[seg]) * s + ky[seg]

    left = t < kx[0]
    if np.any(left):
        d0 = slope[0] - h[0] * (2.0 * M[0] + M[1]) / 6.0
        out[left] = ky[0] + d0 * (t[left] - kx[0])
    right = t > kx[-1]
    if np.any(right):
        d1 = slope[-1] + h[-1] * (M[-2] + 2.0 * M[-1]) / 6.0
        out[right] = ky[-1] + d1 * (t[right] - kx[-1])
    return out


def _mirror(idx: np.ndarray, val: np.ndarray, n: int):
    """Reflect the two knots nearest each end across that end of the domain."""
    last = n - 1
    li = idx[:2]
    lv = val[:2]
    keep = li > 0
    left_i = -li[keep][::-1]
    left_v = lv[keep][::-1]
    ri = idx[-2:]
    rv = val[-2:]
    keep = ri < last
    right_i = (2 * last - ri[keep])[::-1]
    right_v = rv[keep][::-1]
    return (np.concatenate((left_i, idx, right_i)),
            np.concatenate((left_v, val, right_v)))


def _integer_knot_spline(kx: np.ndarray, ky: np.ndarray, n: int) -> np.ndarray:
    """Natural spline through integer knots spanning ``[0, n-1]``, sampled at 0..n-1.

    Same system as :func:`natural_spline`; per-segment coefficients are
    expanded to samples with ``np.repeat`` over the integer gaps instead of
    a search.
    """
    m = kx.size
    gaps = np.diff(kx)
    h = gaps.astype(np.float64)
    slope = np.diff(ky) / h
    M = np.zeros(m)
    if m > 2:
        ab = np.empty((3, m - 2))
        ab[0, 1:] = h[1:-1]
        ab[1, :] = 2.0 * (h[:-1] + h[1:])
        ab[2, :-1] = h[1:-1]
        ab[0, 0] = ab[2, -1] = 0.0
        M[1:-1] = solve_banded((1, 1), ab, 6.0 * np.diff(slope),
                               check_finite=False)
    C = np.empty((m - 1, 5))
    C[:, 0] = (M[1:] - M[:-1]) / (6.0 * h)
    C[:, 1] = 0.5 * M[:-1]
    C[:, 2] = slope - h * (2.0 * M[:-1] + M[1:]) / 6.0
    C[:, 3] = ky[:-1]
    C[:, 4] = kx[:-1]
    gaps[-1] += 1  # the last segment also covers the final knot
    R = np.repeat(C, gaps, axis=0)[-kx[0]:n - kx[0]]
    s = np.arange(n) - R[:, 4]
    return ((R[:, 0] * s + R[:, 1]) * s + R[:, 2]) * s + R[:, 3]


def _envelope(idx, val, n, policy) -> np.ndarray:
    idx = np.asarray(idx)
    val = np.asarray(val, dtype=np.float64)
    if idx.size == 0:
        raise InsufficientExtrema("insufficient extrema: no knots")
    if policy is BoundaryPolicy.MIRROR_EXTREMA:
        idx, val = _mirror(idx, val, n)
    if idx.size < 2:
        raise InsufficientExtrema("insufficient extrema: need at least 2 knots")
    if (np.issubdtype(idx.dtype, np.integer) and idx[0] <= 0
            and idx[-1] >= n - 1 and np.all(np.diff(idx) > 0)):
        return _integer_knot_spline(idx, val, n)
    return natural_spline(idx, val, np.arange(n, dtype=np.float64))


def spline_envelope(knots: Sequence[Tuple[float, float]], domain_length: int,
                    boundary_policy=BoundaryPolicy.MIRROR_EXTREMA) -> np.ndarray:
    """Natural cubic spline through ``knots`` sampled at ``0 .. domain_length-1``.

    With ``MIRROR_EXTREMA`` the two knots nearest each boundary are reflected
    across it first. ``CLAMP_ENDPOINTS`` uses the knots as given; adding the
    signal endpoints as knots is the caller's job (see :func:`mean_envelope`).
    """
    k = np.asarray(knots, dtype=np.float64).reshape(-1, 2)
    return _envelope(k[:, 0], k[:, 1], int(domain_length),
                     BoundaryPolicy(boundary_policy))


def _mean_envelope(x: np.ndarray, ext: ExtremaSet, policy) -> np.ndarray:
    if ext.max_indices.size == 0 or ext.min_indices.size == 0:
        raise InsufficientExtrema("insufficient extrema: need a maximum and a minimum")
    n = x.size
    imax, vmax = ext.max_indices, ext.max_values
    imin, vmin = ext.min_indices, ext.min_values
    if policy is BoundaryPolicy.CLAMP_ENDPOINTS:
        ends_i = np.array([0, n - 1])
        ends_v = x[ends_i]
        imax = np.concatenate(([0], imax, [n - 1]))
        vmax = np.concatenate((ends_v[:1], vmax, ends_v[1:]))
        imin = np.concatenate(([0], imin, [n - 1]))
        vmin = np.concatenate((ends_v[:1], vmin, ends_v[1:]))
    upper = _envelope(imax, vmax, n, policy)
    lower = _envelope(imin, vmin, n, policy)
    return 0.5 * (upper + lower)


def mean_envelope(signal, config: SiftConfig = SiftConfig()) -> np.ndarray:
    """Average of the upper (maxima) and lower (minima) spline envelopes."""
    x = as_samples(signal)
    return _mean_envelope(x, find_extrema(x), config.boundary_policy)


def sd_criterion(prev: np.ndarray, new: np.ndarray) -> float:
    """Sum over samples of ``(prev - new)**2 / prev**2``.

    Samples where ``|prev|`` is below ``SD_GUARD * max|prev|`` are left out,
    since the ratio is undefined at zeros of ``prev``.
    """
    a = np.abs(prev)
    peak = a.max() if a.size else 0.0
    if peak == 0.0:
        return 0.0
    mask = a >= SD_GUARD * peak
    d = prev[mask] - new[mask]
    return float(np.sum(d * d / (prev[mask] * prev[mask])))


def _sift(x: np.ndarray, config: SiftConfig) -> Tuple[np.ndarray, int, float]:
    policy = config.boundary_policy
    h = x
    sd = np.inf
    k = 0
    while k < config.max_sift_iterations:
        ext = find_extrema(h)
        try:
            m = _mean_envelope(h, ext, policy)
        except InsufficientExtrema:
            if k == 0:
                raise
            logger.debug("extrema vanished after %d sift iterations", k)
            break
        h_new = h - m
        k += 1
        sd = sd_criterion(h, h_new)
        h = h_new
        if sd < config.sd_threshold:
            break
    return h, k, sd


def sift_one_imf(signal, config: SiftConfig = SiftConfig()) -> Tuple[np.ndarray, int]:
    """Sift ``signal`` into one IMF.

    Repeats ``h <- h - mean_envelope(h)`` until the SD between consecutive
    iterates drops below ``config.sd_threshold`` or the iteration cap is
    reached. Returns the IMF and the number of iterations used.
    """
    imf, k, _ = _sift(as_samples(signal), config)
    return imf, k


def decompose(signal, config: SiftConfig = SiftConfig()) -> ImfDecomposition:
    """Decompose ``signal`` into IMFs and a residue.

    IMFs are extracted until the residue has fewer than three extrema
    (maxima and minima counted together) or ``config.max_imfs`` is reached.
    """
    x = as_samples(signal)
    if x.size < 4:
        raise ValueError("decompose needs at least 4 samples")
    residue = x.copy()
    imfs, counts, sds = [], [], []
    capped = False
    while True:
        if len(find_extrema(residue)) < 3:
            break
        if len(imfs) >= config.max_imfs:
            capped = True
            break
        imf, k, sd = _sift(residue, config)
        imfs.append(imf)
        counts.append(k)
        sds.append(sd)
        residue = residue - imf
    logger.debug("decomposed %d samples into %d IMFs", x.size, len(imfs))
    return ImfDecomposition(imfs, residue, counts, sds, capped)


def reconstruct(decomp: ImfDecomposition) -> np.ndarray:
    """Sum of all IMFs plus the residue."""
    out = np.array(decomp.residue, dtype=np.float64, copy=True)
    for imf in decomp.imfs:
        if imf.shape != out.shape:
            raise ValueError("IMF and residue lengths differ")
        out = out + imf
    return out
