import math

import numpy as np
import pytest
from scipy.integrate import quad, simpson

from tsabm.analytics import (
    inverse_subordinator_pdf,
    laplace_inverse_subordinator,
    laplace_ys,
    mean_of_s,
    moment_inverse_subordinator,
    nts_pdf,
    survival_inverse_subordinator,
    tempered_stable_pdf,
    ys_pdf,
)
from tsabm.kernel import TemperParams
from tsabm.paths import ModelParams

X = np.array([0.3, 1.0, 2.5, 7.0])


def test_untempered_clock_density_is_levy():
    t = 1.5
    ref = t * X**-1.5 * np.exp(-t * t / (4 * X)) / (2 * math.sqrt(math.pi))
    np.testing.assert_allclose(tempered_stable_pdf(TemperParams(0.5, 0.0), t, X), ref, rtol=1e-9)


@pytest.mark.parametrize("alpha,lam,t", [(0.3, 2.0, 1.0), (0.7, 0.5, 3.0)])
def test_tempered_density_normalises_and_has_right_mean(alpha, lam, t):
    p = TemperParams(alpha, lam)
    f = lambda x: float(tempered_stable_pdf(p, t, np.array([x]))[0])
    edges = [0, 1e-3, 0.1, 1, 10, 100, np.inf]
    mass = sum(quad(f, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
    mean = sum(quad(lambda x: x * f(x), a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:]))
    assert mass == pytest.approx(1.0, abs=1e-7)
    assert mean == pytest.approx(t * alpha * lam ** (alpha - 1), rel=1e-6)


def test_inverse_density_half_stable_is_half_normal():
    # for alpha = 1/2, lambda = 0, S(tau) is |N(0, 2 tau)|
    tau = 2.0
    ref = np.exp(-X**2 / (4 * tau)) / math.sqrt(math.pi * tau)
    np.testing.assert_allclose(inverse_subordinator_pdf(TemperParams(0.5, 0.0), tau, X), ref, rtol=1e-9)
    surv = [math.erfc(x / (2 * math.sqrt(tau))) for x in X]
    np.testing.assert_allclose(survival_inverse_subordinator(TemperParams(0.5, 0.0), tau, X), surv, rtol=1e-9)


def test_inverse_transform_half_stable():
    tau, z = 2.0, 0.7
    ref = math.exp(z * z * tau) * math.erfc(z * math.sqrt(tau))
    assert laplace_inverse_subordinator(TemperParams(0.5, 0.0), tau, z) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("alpha,lam,tau", [(0.4, 0.2, 1.0), (0.8, 1.0, 3.0), (0.3, 5.0, 0.5)])
def test_inverse_density_normalises_and_mean_matches_renewal_route(alpha, lam, tau):
    p = TemperParams(alpha, lam)
    assert moment_inverse_subordinator(p, tau, 0) == pytest.approx(1.0, abs=1e-9)
    assert moment_inverse_subordinator(p, tau, 1) == pytest.approx(mean_of_s(p, tau), rel=1e-8)


def test_inverse_survival_is_tail_integral_of_density():
    p = TemperParams(0.6, 1.5)
    x0 = 0.8
    tail = quad(lambda x: float(inverse_subordinator_pdf(p, 2.0, np.array([x]))[0]), x0, np.inf, limit=200)[0]
    assert float(survival_inverse_subordinator(p, 2.0, np.array([x0]))[0]) == pytest.approx(tail, rel=1e-7)


def test_nts_density_half_stable_is_cauchy():
    # B(T(t)) with T Levy has characteristic function exp(-t |u| / sqrt 2)
    t = 1.5
    s = t / math.sqrt(2)
    ref = 1.0 / (math.pi * s * (1 + (X / s) ** 2))
    np.testing.assert_allclose(nts_pdf(ModelParams(0.5, 0.0, 0.0), t, X), ref, rtol=1e-8)


def test_nts_density_normalises_with_drift():
    p = ModelParams(0.26, 6.0, 0.11)
    f = lambda x: float(nts_pdf(p, 1.0, np.array([x]))[0])
    mass = sum(quad(f, a, b, limit=400)[0] for a, b in [(-np.inf, -1), (-1, 0), (0, 1), (1, np.inf)])
    assert mass == pytest.approx(1.0, abs=1e-6)


def test_subdiffusive_transform_half_stable():
    # beta = 0: <exp(z**2 S / 2)> = E_{1/2}(z**2 sqrt(tau) / 2)
    tau, z = 2.0, 0.7
    y = z * z * math.sqrt(tau) / 2
    assert laplace_ys(ModelParams(0.5, 0.0, 0.0), tau, z) == pytest.approx(math.exp(y * y) * math.erfc(-y), rel=1e-9)


def test_subdiffusive_density_matches_direct_mixture():
    tau = 2.0
    x = 0.9

    def integrand(s):
        return math.exp(-x * x / (2 * s)) / math.sqrt(2 * math.pi * s) * math.exp(-s * s / (4 * tau)) / math.sqrt(math.pi * tau)

    ref = quad(integrand, 0, np.inf, limit=200)[0]
    assert float(ys_pdf(ModelParams(0.5, 0.0, 0.0), tau, np.array([x]))[0]) == pytest.approx(ref, rel=1e-7)


def test_subdiffusive_density_normalises():
    p = ModelParams(0.4, 0.2, 0.3)
    x = np.linspace(-14.0, 16.0, 6001)
    assert simpson(ys_pdf(p, 1.0, x), x=x) == pytest.approx(1.0, abs=1e-6)
