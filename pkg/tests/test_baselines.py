import numpy as np
import pytest
from hypothesis import given, strategies as st

from emdshrink.baselines import (DwtConfig, HaarPyramid, WienerConfig,
                                 dwt_forward, dwt_inverse, estimate_noise_power,
                                 universal_dwt_denoise, wiener_denoise,
                                 wiener_gains)
from emdshrink.shrinkage import Flavor
from emdshrink.signal_core import snr_db

S2 = np.sqrt(2.0)


def energy(x):
    return float(np.dot(x, x))


@pytest.mark.parametrize("overlap", [0.0, 0.5, 0.75])
@pytest.mark.parametrize("n", [256, 1000, 4096])
def test_wiener_zero_noise_identity(rng, n, overlap):
    x = rng.standard_normal(n)
    y = wiener_denoise(x, WienerConfig(noise_power=0.0, overlap_fraction=overlap))
    assert y.shape == x.shape
    assert np.linalg.norm(y - x) <= 1e-8 * np.linalg.norm(x)


def test_wiener_gain_range(rng):
    x = np.sin(np.arange(3000) * 0.3) + rng.standard_normal(3000)
    for cfg in (WienerConfig(noise_power=1.0), WienerConfig(), WienerConfig(noise_power=50.0)):
        G = wiener_gains(x, cfg)[0]
        assert G.min() >= 0.0 and G.max() <= 1.0


def test_wiener_suppresses_white_noise():
    ratios = []
    for seed in range(5):
        w = np.random.default_rng(seed).normal(0, 0.7, 8192)
        ratios.append(energy(wiener_denoise(w, WienerConfig(noise_power=0.49))) / energy(w))
    assert max(ratios) < 0.25


def test_wiener_keeps_strong_tone():
    rng = np.random.default_rng(2)
    t = np.arange(8192)
    clean = np.sin(2 * np.pi * 440 * t / 8000)
    sigma = np.sqrt(energy(clean) / t.size / 100.0)
    noisy = clean + sigma * rng.standard_normal(t.size)
    out = wiener_denoise(noisy, WienerConfig(noise_power=sigma ** 2))
    assert snr_db(clean, out) > snr_db(clean, noisy)


def test_noise_power_estimate():
    w = np.random.default_rng(4).normal(0, 0.5, 8192)
    assert estimate_noise_power(w, WienerConfig(estimate_frames=16)) == pytest.approx(0.25, rel=0.15)


def test_wiener_config_errors():
    for kw in ({"fft_frame_length": 100}, {"overlap_fraction": 1.0},
               {"noise_power": -1.0}, {"estimate_frames": 0}):
        with pytest.raises(ValueError):
            WienerConfig(**kw)
    with pytest.raises(ValueError):
        wiener_denoise(np.ones(100))


def test_haar_pairs():
    p = dwt_forward([1.0, 1.0], DwtConfig(1))
    np.testing.assert_allclose(p.approx, [S2])
    np.testing.assert_allclose(p.details[0], [0.0])
    p = dwt_forward([1.0, -1.0], DwtConfig(1))
    np.testing.assert_allclose(p.approx, [0.0])
    np.testing.assert_allclose(p.details[0], [S2])


@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(1, 40))
def test_parseval_and_round_trip(seed, levels, blocks):
    x = np.random.default_rng(seed).standard_normal(blocks * 2 ** levels)
    p = dwt_forward(x, DwtConfig(levels))
    coef_energy = energy(p.approx) + sum(energy(d) for d in p.details)
    assert coef_energy == pytest.approx(energy(x), rel=1e-10)
    assert np.linalg.norm(dwt_inverse(p) - x) <= 1e-10 * np.linalg.norm(x)


@given(st.integers(0, 10_000), st.integers(40, 3000))
def test_round_trip_with_padding(seed, n):
    x = np.random.default_rng(seed).standard_normal(n)
    p = dwt_forward(x)
    assert p.levels == max(1, int(np.log2(n)) - 4)
    np.testing.assert_allclose(dwt_inverse(p), x, atol=1e-12)


def test_inverse_of_zero_and_atom():
    z = HaarPyramid(np.zeros(2), [np.zeros(8), np.zeros(4), np.zeros(2)], 16)
    np.testing.assert_array_equal(dwt_inverse(z), np.zeros(16))
    for level, k in ((0, 3), (1, 0), (2, 1)):
        atom = HaarPyramid(np.zeros(2), [np.zeros(8), np.zeros(4), np.zeros(2)], 16)
        atom.details[level][k] = 1.0
        y = dwt_inverse(atom)
        assert np.linalg.norm(y) == pytest.approx(1.0, abs=1e-12)
        assert np.count_nonzero(y) == 2 ** (level + 1)


def test_dwt_errors():
    with pytest.raises(ValueError):
        dwt_forward(np.ones(8), DwtConfig(4))
    with pytest.raises(ValueError):
        DwtConfig(wavelet="db4")
    with pytest.raises(ValueError):
        DwtConfig(levels=0)


def test_dwt_denoise_smooth_ramp():
    x = np.linspace(-0.5, 0.5, 4096)
    for flavor in Flavor:
        assert snr_db(x, universal_dwt_denoise(x, flavor)) > 30.0


def test_dwt_denoise_white_noise():
    w = np.random.default_rng(9).standard_normal(8192)
    p = dwt_forward(w)
    finest = p.details[0]
    t = np.median(np.abs(finest)) / 0.6745 * np.sqrt(2 * np.log(8192))
    assert t / (np.median(np.abs(finest)) / 0.6745) == pytest.approx(4.2452, abs=1e-4)
    out = universal_dwt_denoise(w, Flavor.SOFT, DwtConfig())
    assert energy(out) < 0.1 * energy(w)


def test_hard_keeps_more_energy_than_soft(rng):
    x = np.sin(np.arange(4096) / 40.0) + 0.5 * rng.standard_normal(4096)
    assert energy(universal_dwt_denoise(x, Flavor.HARD)) >= energy(universal_dwt_denoise(x, Flavor.SOFT))


def test_baselines_deterministic(rng):
    x = rng.standard_normal(3000)
    assert wiener_denoise(x).tobytes() == wiener_denoise(x).tobytes()
    assert universal_dwt_denoise(x).tobytes() == universal_dwt_denoise(x).tobytes()
