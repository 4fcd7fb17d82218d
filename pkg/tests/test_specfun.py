import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_gegenbauer

from mfsusy.errors import DomainError, ExtrapolationWarning, SingularityError
from mfsusy.specfun import (
    GegenbauerIndex,
    gegenbauer,
    gegenbauer_deriv,
    gegenbauer_deriv2,
    ultraspherical_coefficients,
    ultraspherical_residual,
    ultraspherical_terms,
)


def series_oracle(p, q, x):
    # explicit sum: C_p^q(x) = sum_k (-1)^k Gamma(p-k+q) / (Gamma(q) k! (p-2k)!) (2x)^(p-2k)
    total = 0.0
    for k in range(p // 2 + 1):
        c = math.exp(math.lgamma(p - k + q) - math.lgamma(q) - math.lgamma(k + 1) - math.lgamma(p - 2 * k + 1))
        total += (-1) ** k * c * (2 * x) ** (p - 2 * k)
    return total


def test_constant_polynomial():
    assert gegenbauer(GegenbauerIndex(0, 5), 0.3) == 1.0


def test_linear_polynomial():
    assert gegenbauer(GegenbauerIndex(1, 2), 0.5) == pytest.approx(2.0, abs=1e-15)


def test_cubic_against_series():
    assert gegenbauer(GegenbauerIndex(3, 2), 0.25) == pytest.approx(series_oracle(3, 2, 0.25), rel=1e-13)


@pytest.mark.parametrize("p", range(13))
@pytest.mark.parametrize("q", [0.5, 1, 2.5, 6, 11])
def test_recurrence_matches_series(p, q):
    xs = np.linspace(-0.99, 0.99, 23)
    got = np.asarray(gegenbauer(GegenbauerIndex(p, q), xs))
    want = np.array([series_oracle(p, q, x) for x in xs])
    scale = max(1.0, np.max(np.abs(want)))
    assert np.max(np.abs(got - want)) <= 1e-10 * scale


def test_matches_scipy():
    xs = np.linspace(-1, 1, 41)
    for p in range(0, 21, 4):
        for q in (1, 4, 11):
            np.testing.assert_allclose(
                gegenbauer(GegenbauerIndex(p, q), xs), eval_gegenbauer(p, q, xs), rtol=1e-11, atol=1e-11
            )


def test_derivative_examples():
    assert gegenbauer_deriv(GegenbauerIndex(0, 3), 0.7) == 0.0
    for x in (-0.8, 0.0, 0.4):
        assert gegenbauer_deriv(GegenbauerIndex(1, 2), x) == pytest.approx(4.0)


def test_derivative_finite_difference():
    idx = GegenbauerIndex(4, 3)
    h = 1e-5
    fd = (gegenbauer(idx, 0.1 + h) - gegenbauer(idx, 0.1 - h)) / (2 * h)
    assert gegenbauer_deriv(idx, 0.1) == pytest.approx(fd, rel=1e-8)


def test_second_derivative_finite_difference():
    idx = GegenbauerIndex(6, 2.5)
    h = 1e-4
    x = -0.35
    fd = (gegenbauer(idx, x + h) - 2 * gegenbauer(idx, x) + gegenbauer(idx, x - h)) / h**2
    assert gegenbauer_deriv2(idx, x) == pytest.approx(fd, rel=1e-6)


def test_residual_examples():
    assert ultraspherical_residual(GegenbauerIndex(0, 4), 0.5) == 0.0
    assert abs(ultraspherical_residual(GegenbauerIndex(2, 2), 0.3)) < 1e-10
    assert abs(ultraspherical_residual(GegenbauerIndex(10, 6), 0.9, relative=True)) < 1e-7


def test_residual_sweep():
    xs = np.linspace(-0.98, 0.98, 50)
    worst = 0.0
    for p in range(21):
        for l in range(11):
            r = np.asarray(ultraspherical_residual(GegenbauerIndex(p, l + 1), xs, relative=True))
            worst = max(worst, float(np.max(np.abs(r))))
    assert worst <= 1e-8


def test_terms_sum_to_residual():
    idx = GegenbauerIndex(5, 3)
    t = ultraspherical_terms(idx, 0.2)
    assert sum(t) == pytest.approx(ultraspherical_residual(idx, 0.2), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    p=st.integers(0, 20),
    q=st.floats(0.5, 12.0),
    x=st.floats(-1.0, 1.0),
)
def test_parity(p, q, x):
    idx = GegenbauerIndex(p, q)
    a, b = gegenbauer(idx, -x), gegenbauer(idx, x)
    assert a == pytest.approx((-1) ** p * b, rel=1e-12, abs=1e-12 * max(1.0, abs(gegenbauer(idx, 1.0))))


def test_endpoint_value():
    # C_p^q(1) = (2q)_p / p!
    for p in range(8):
        for q in (1, 3):
            want = math.gamma(2 * q + p) / (math.gamma(2 * q) * math.factorial(p))
            assert gegenbauer(GegenbauerIndex(p, q), 1.0) == pytest.approx(want, rel=1e-13)


def test_index_validation():
    with pytest.raises(DomainError):
        GegenbauerIndex(-1, 2)
    with pytest.raises(DomainError):
        GegenbauerIndex(1.5, 2)
    with pytest.raises(DomainError):
        GegenbauerIndex(2, 0)
    idx = GegenbauerIndex.for_state(2, 3)
    assert (idx.p, idx.q, idx.l) == (2, 4, 3)


def test_outside_interval_warns():
    with pytest.warns(ExtrapolationWarning):
        gegenbauer(GegenbauerIndex(2, 1), 1.5)


def test_coefficients_singular_at_ends():
    with pytest.raises(SingularityError):
        ultraspherical_coefficients(GegenbauerIndex(2, 2), 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ultraspherical_coefficients(GegenbauerIndex(2, 2), 0.999)
