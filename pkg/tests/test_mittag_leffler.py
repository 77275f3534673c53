import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfc, gamma

from tsabm.analytics.mittag_leffler import log_mittag_leffler, mittag_leffler, scaled_mittag_leffler
from tsabm.errors import ValidationError


def series_oracle(a, b, x, terms=200, g=1):
    with mpmath.workdps(60):
        return float(mpmath.fsum(mpmath.rf(g, k) / mpmath.factorial(k) * mpmath.mpf(x) ** k
                                 * mpmath.rgamma(a * k + b) for k in range(terms)))


@pytest.mark.parametrize("x", [-30.0, -12.5, -3.0, -0.1, 0.0, 0.7, 5.0, 40.0])
def test_e11_is_exp(x):
    assert mittag_leffler(1.0, 1.0, x) == pytest.approx(math.exp(x), rel=1e-9)


@pytest.mark.parametrize("x", [-4.0, -1.3, 0.5, 2.0, 6.0])
def test_e21_is_cos_or_cosh(x):
    ref = math.cos(math.sqrt(-x)) if x < 0 else math.cosh(math.sqrt(x))
    assert mittag_leffler(2.0, 1.0, x) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("x", [-8.0, -2.0, -0.3, 0.4, 3.0])
def test_e_half_is_scaled_erfc(x):
    assert mittag_leffler(0.5, 1.0, x) == pytest.approx(math.exp(x * x) * erfc(-x), rel=1e-9)


@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_value_at_zero_is_reciprocal_gamma(a, b):
    assert mittag_leffler(a, b, 0.0) == pytest.approx(1.0 / gamma(b), rel=1e-12)


@pytest.mark.parametrize("a,b,x", [(0.3, 0.3, 0.9), (0.4, 1.0, -0.8), (0.6, 0.6, 2.5), (0.8, 1.6, -3.0),
                                   (1.5, 1.0, 3.0), (0.9, 2.0, -2.2)])
def test_matches_series_oracle(a, b, x):
    assert mittag_leffler(a, b, x) == pytest.approx(series_oracle(a, b, x), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("a,b,x", [(0.4, 0.8, 3.0), (0.7, 1.4, 20.0), (0.5, 0.5, 1.2)])
def test_three_parameter_log_form(a, b, x):
    ref = series_oracle(a, b, x, terms=600, g=2)
    assert math.exp(log_mittag_leffler(a, b, x, g=2.0)) == pytest.approx(ref, rel=1e-10)


def test_log_form_handles_huge_arguments():
    # E_{1,1}(x) = exp(x) far beyond double range
    assert log_mittag_leffler(1.0, 1.0, 5000.0) == pytest.approx(5000.0, rel=1e-12)


def test_log_form_rejects_non_positive():
    with pytest.raises(ValidationError):
        log_mittag_leffler(0.5, 1.0, 0.0)


def test_large_negative_argument_decays_like_asymptotic():
    # E_{a,1}(-y) ~ y**-1 / Gamma(1 - a) for y -> inf
    y = 1e4
    assert mittag_leffler(0.6, 1.0, -y) == pytest.approx(1.0 / (y * gamma(0.4)), rel=1e-3)


def test_scaled_form_matches_direct_product():
    x = np.array([0.5, 2.0, 9.0])
    shift = np.array([0.3, 1.0, 4.0])
    got = scaled_mittag_leffler(0.5, 0.5, x, shift)
    ref = [math.exp(-s) * series_oracle(0.5, 0.5, v, terms=800) for v, s in zip(x, shift)]
    np.testing.assert_allclose(got, ref, rtol=1e-10)
