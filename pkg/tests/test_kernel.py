import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats
from scipy.special import erfc

from tsabm.errors import ValidationError
from tsabm.kernel import (
    RandomStream,
    StableParams,
    TemperParams,
    sample_positive_stable,
    sample_standard_gaussian,
    sample_tempered_stable_increment,
    split_counts,
)


def test_stream_is_reproducible():
    a = RandomStream(7, 3).generator.random(5)
    b = RandomStream(7, 3).generator.random(5)
    np.testing.assert_array_equal(a, b)


def test_streams_with_different_index_differ():
    a = RandomStream(7, 3).generator.random(5)
    b = RandomStream(7, 4).generator.random(5)
    assert not np.array_equal(a, b)


def test_substreams_do_not_depend_on_parent_consumption():
    s1 = RandomStream(11, 2)
    s1.generator.random(1000)
    x = s1.substream(1).generator.random(3)
    y = RandomStream(11, 2).substream(1).generator.random(3)
    np.testing.assert_array_equal(x, y)
    z = RandomStream(11, 2).substream(0).generator.random(3)
    assert not np.array_equal(x, z)


def test_negative_seed_is_accepted_and_masked():
    RandomStream(-5, 0).generator.random()


def test_negative_stream_index_rejected():
    with pytest.raises(ValidationError):
        RandomStream(1, -1)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, float("nan")])
def test_stable_params_reject_bad_alpha(alpha):
    with pytest.raises(ValidationError):
        StableParams(alpha)


@pytest.mark.parametrize("lam", [-1.0, float("inf"), float("nan")])
def test_temper_params_reject_bad_lambda(lam):
    with pytest.raises(ValidationError):
        TemperParams(0.5, lam)


def test_gaussian_shape_and_scalar():
    s = RandomStream(1)
    assert sample_standard_gaussian(s, (4, 2)).shape == (4, 2)
    assert np.ndim(sample_standard_gaussian(s)) == 0


def test_half_stable_matches_levy_distribution():
    # exp(-sqrt(z)) is the transform of the Levy law with CDF erfc(1 / (2 sqrt(x)))
    x = sample_positive_stable(RandomStream(2024), StableParams(0.5), 20000)
    res = stats.kstest(x, lambda v: erfc(1.0 / (2.0 * np.sqrt(v))))
    assert res.pvalue > 1e-3


@pytest.mark.parametrize("alpha", [0.2, 0.6, 0.9])
def test_positive_stable_laplace_transform(alpha):
    x = sample_positive_stable(RandomStream(5, int(alpha * 10)), StableParams(alpha), 40000)
    for z in (0.3, 1.0, 3.0):
        e = np.exp(-z * x)
        se = e.std() / math.sqrt(x.size)
        assert abs(e.mean() - math.exp(-z**alpha)) < 4 * se


def test_positive_stable_scalar_draw():
    v = sample_positive_stable(RandomStream(3), StableParams(0.4))
    assert isinstance(v, float) and v > 0


def test_untempered_increment_is_scaled_stable_draw():
    p = TemperParams(0.7, 0.0)
    dt = 0.37
    a = sample_tempered_stable_increment(RandomStream(9), p, dt, size=50)
    b = dt ** (1 / 0.7) * sample_positive_stable(RandomStream(9), p.stable, 50)
    np.testing.assert_allclose(a, b, rtol=1e-14)


@pytest.mark.parametrize("alpha,lam,dt", [(0.3, 2.0, 1.0), (0.7, 0.5, 0.1), (0.5, 5.0, 10.0)])
def test_tempered_increment_moments(alpha, lam, dt):
    p = TemperParams(alpha, lam)
    x = sample_tempered_stable_increment(RandomStream(17), p, dt, size=40000)
    mean = dt * alpha * lam ** (alpha - 1)
    var = dt * alpha * (1 - alpha) * lam ** (alpha - 2)
    assert abs(x.mean() - mean) < 4 * math.sqrt(var / x.size)
    # Laplace transform of T(dt)
    for z in (0.5, 2.0):
        e = np.exp(-z * x)
        assert abs(e.mean() - math.exp(dt * (lam**alpha - (lam + z) ** alpha))) < 4 * e.std() / math.sqrt(x.size)


def test_split_increment_shapes_and_positivity():
    p = TemperParams(0.5, 4.0)
    dt = np.array([[0.1, 3.0], [12.0, 0.5]])
    x = sample_tempered_stable_increment(RandomStream(1), p, dt)
    assert x.shape == dt.shape and np.all(x > 0)


@pytest.mark.parametrize("dt", [0.0, -1.0, np.inf])
def test_increment_rejects_bad_durations(dt):
    with pytest.raises(ValidationError):
        sample_tempered_stable_increment(RandomStream(1), TemperParams(0.5, 1.0), dt)


@given(st.floats(0.05, 0.95), st.floats(0.0, 50.0), st.floats(1e-3, 1e3))
def test_split_counts_bound_the_tilt_mass(alpha, lam, dt):
    n = split_counts(TemperParams(alpha, lam), np.array([dt]))[0]
    assert n >= 1
    assert lam**alpha * dt / n <= 1.0 + 1e-12
    if n > 1:
        assert lam**alpha * dt / (n - 1) > 1.0
