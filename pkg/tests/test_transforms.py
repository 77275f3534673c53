import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsabm.analytics import (
    LaplaceQuery,
    cov_nts,
    laplace_nts,
    laplace_nts_values,
    laplace_subordinator,
    mean_nts,
    msd_nts,
    msd_nts_coefficients,
    nts_domain_bound,
    survival_ts_asymptotic,
)
from tsabm.errors import DomainError
from tsabm.kernel import TemperParams
from tsabm.paths import ModelParams

params = st.builds(ModelParams, st.floats(0.1, 0.9), st.floats(0.1, 10.0), st.floats(-1.0, 1.0))


def test_query_rejects_negative_arguments():
    with pytest.raises(DomainError):
        LaplaceQuery(-1.0, 1.0)
    with pytest.raises(DomainError):
        LaplaceQuery(1.0, -1.0)


def test_subordinator_transform_closed_form():
    p = TemperParams(0.5, 4.0)
    assert laplace_subordinator(p, LaplaceQuery(5.0, 2.0)) == pytest.approx(math.exp(2 * (2 - 3)))
    assert laplace_subordinator(p, LaplaceQuery(0.0, 2.0)) == 1.0


@given(params, st.floats(0.0, 5.0))
def test_transform_at_zero_is_one(p, t):
    assert laplace_nts(p, LaplaceQuery(0.0, t)) == pytest.approx(1.0)


def test_transform_outside_domain_raises():
    p = ModelParams(0.5, 1.0, 0.0)
    zd = nts_domain_bound(p)
    assert zd == pytest.approx(math.sqrt(2))
    with pytest.raises(DomainError):
        laplace_nts(p, LaplaceQuery(zd * 1.01, 1.0))


@given(params)
def test_moments_from_transform_derivatives(p):
    # -phi'(0) = <Y_T(t)> and phi''(0) = <Y_T(t)**2>
    t, h = 2.0, 1e-4
    phi = lambda z: laplace_nts_values(p, np.array([z]), t)[0]
    d1 = (phi(h) - phi(-h)) / (2 * h)
    d2 = (phi(h) - 2 * phi(0.0) + phi(-h)) / (h * h)
    assert -d1 == pytest.approx(mean_nts(p, t), rel=1e-5, abs=1e-7)
    assert d2 == pytest.approx(msd_nts(p, t), rel=1e-3)


def test_msd_coefficients_decompose_mean_and_variance():
    p = ModelParams(0.8, 1.0, 0.01)
    a, b = msd_nts_coefficients(p)
    assert a == pytest.approx((0.01 * 0.8) ** 2)
    assert b == pytest.approx(0.8 + 0.01**2 * 0.8 * 0.2)
    assert msd_nts(p, 3.0) == pytest.approx(9 * a + 3 * b)
    assert cov_nts(p, 3.0, 1.0) == pytest.approx(b)


def test_untempered_moments_raise():
    with pytest.raises(DomainError):
        mean_nts(ModelParams(0.5, 0.0, 0.1), 1.0)


def test_tail_approximant_form_and_domain():
    p = TemperParams(0.4, 0.2)
    x = np.array([1.0, 10.0])
    ref = np.exp(-0.2 * x + 0.2**0.4 * 2.0) * (2.0 / x) ** 0.4
    np.testing.assert_allclose(survival_ts_asymptotic(p, 2.0, x), ref)
    with pytest.raises(DomainError):
        survival_ts_asymptotic(p, 2.0, np.array([0.0]))
