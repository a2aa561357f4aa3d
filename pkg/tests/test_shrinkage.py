import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from emdshrink.shrinkage import (Flavor, ThresholdMethod, ThresholdSpec,
                                 hard_threshold, mad_sigma, normal_shrink_beta,
                                 normal_shrink_threshold, shrink, soft_threshold,
                                 universal_threshold)

finite = st.floats(-1e3, 1e3, allow_nan=False)
vectors = arrays(np.float64, st.integers(1, 300), elements=finite)


def test_mad_examples():
    assert mad_sigma(np.zeros(7)) == 0.0
    assert mad_sigma([-0.6745, 0.6745, 0.6745]) == pytest.approx(1.0, abs=1e-15)
    # even length: mean of the two middle order statistics
    assert mad_sigma([1.0, -3.0]) == pytest.approx(2.0 / 0.6745)
    with pytest.raises(ValueError):
        mad_sigma([])


@pytest.mark.parametrize("seed", range(3))
def test_mad_gaussian_consistency(seed):
    x = np.random.default_rng(seed).normal(0, 2, 100_000)
    assert 1.9 <= mad_sigma(x) <= 2.1


@given(vectors, st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_mad_scaling_and_sign(x, c):
    assert mad_sigma(-x) == mad_sigma(x)
    assert mad_sigma(c * x) == pytest.approx(abs(c) * mad_sigma(x), rel=1e-12, abs=1e-300)


def test_beta():
    assert abs(normal_shrink_beta(128, 8) - math.sqrt(math.log(16))) <= 1e-12
    assert normal_shrink_beta(128, 8) == pytest.approx(1.6651, abs=1e-4)
    for L, J in ((8, 8), (4, 9)):
        with pytest.raises(ValueError, match="scale parameter undefined"):
            normal_shrink_beta(L, J)


def test_normal_shrink_examples():
    assert normal_shrink_threshold(np.zeros(128), 128, 8) == 0.0
    assert normal_shrink_threshold(np.full(128, 3.0), 128, 8) == 0.0
    ts = [normal_shrink_threshold(np.random.default_rng(s).standard_normal(128), 128, 8)
          for s in range(50)]
    assert abs(np.mean(ts) - 1.67) <= 0.15
    with pytest.raises(ValueError, match="scale parameter undefined"):
        normal_shrink_threshold(np.ones(5), 5, 8)


def test_normal_shrink_formula():
    x = np.array([0.3, -1.2, 2.0, -0.1, 0.7, 0.05, -0.4, 1.1])
    s_hat = np.median(np.abs(x)) / 0.6745
    beta = math.sqrt(math.log(64 / 4))
    assert normal_shrink_threshold(x, 64, 4) == pytest.approx(beta * s_hat ** 2 / x.std())
    assert normal_shrink_threshold(x, 64, 4, square_variance=False) == pytest.approx(
        beta * s_hat / x.std())


@given(arrays(np.float64, st.integers(2, 200), elements=st.floats(-100, 100)),
       st.floats(-20, 20).filter(lambda c: abs(c) > 1e-2))
def test_normal_shrink_scales_linearly(x, c):
    if x.std() < 1e-6:
        return
    t = normal_shrink_threshold(x, 128, 8)
    assert normal_shrink_threshold(c * x, 128, 8) == pytest.approx(abs(c) * t, rel=1e-9, abs=1e-12)


def test_universal_examples():
    assert universal_threshold(0.0, 1000) == 0.0
    assert universal_threshold(3.0, 1) == 0.0
    assert universal_threshold(1.0, 7) == pytest.approx(math.sqrt(2 * math.log(7)), abs=1e-12)
    assert abs(universal_threshold(1.0, 8192) - math.sqrt(2 * math.log(8192))) <= 1e-12
    with pytest.raises(ValueError):
        universal_threshold(1.0, 0)


@given(st.floats(0, 100), st.floats(0, 100), st.integers(1, 10**6), st.integers(1, 10**6))
def test_universal_monotone(s1, s2, n1, n2):
    (s1, s2), (n1, n2) = sorted((s1, s2)), sorted((n1, n2))
    assert universal_threshold(s1, n1) <= universal_threshold(s2, n2)


def test_soft_hard_examples():
    x = np.array([2.0, -2.0, 0.5])
    assert soft_threshold(x, 1.0).tolist() == [1.0, -1.0, 0.0]
    assert hard_threshold(x, 1.0).tolist() == [2.0, -2.0, 0.0]
    assert soft_threshold(x, 0.0).tolist() == x.tolist()
    assert hard_threshold(np.array([0.0, 1.0, -3.0]), 0.0).tolist() == [0.0, 1.0, -3.0]
    assert soft_threshold(x, 5.0).tolist() == [0.0, 0.0, 0.0]
    assert hard_threshold(x, 2.0).tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(ValueError):
        soft_threshold(x, -1.0)


@given(vectors, st.floats(0, 1e3))
def test_shrinkage_magnitudes(x, t):
    s = soft_threshold(x, t)
    h = hard_threshold(x, t)
    assert np.all(np.abs(s) <= np.abs(x))
    assert np.all((h == 0) | (h == x))
    assert np.all(np.sign(s) * np.sign(x) >= 0)


@given(vectors, st.floats(0, 1e3), st.floats(-1, 1))
def test_soft_is_lipschitz(x, t, d):
    y = x + d
    assert np.all(np.abs(soft_threshold(x, t) - soft_threshold(y, t)) <= np.abs(x - y) + 1e-9)


def test_threshold_spec():
    spec = ThresholdSpec(1.0, ThresholdMethod.UNIVERSAL, Flavor.HARD)
    assert spec.apply([2.0, 0.5]).tolist() == [2.0, 0.0]
    assert shrink([2.0], 1.0, "soft").tolist() == [1.0]
    for bad in (-1.0, float("inf"), float("nan")):
        with pytest.raises(ValueError):
            ThresholdSpec(bad, ThresholdMethod.NORMAL_SHRINK)
