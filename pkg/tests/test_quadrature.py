import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfsusy.errors import AccuracyError, DomainError
from mfsusy.numeric.quadrature import compactify, quadrature, quadrature_semi_infinite


def test_constant():
    assert quadrature(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1.0, rel=1e-14)


def test_sine():
    assert quadrature(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-12)


def test_compactified_rational():
    assert quadrature_semi_infinite(lambda r: r * r / (1 + r * r) ** 3) == pytest.approx(math.pi / 16, rel=1e-10)


def test_compactify_jacobian():
    # on [0, pi/2] the map covers rho in [0, 1]; check against a direct integral
    g = compactify(lambda r: np.exp(-r))
    assert quadrature(g, 0.0, math.pi / 2) == pytest.approx(1 - math.exp(-1), rel=1e-12)


def test_divergent_raises():
    with pytest.raises(AccuracyError):
        quadrature_semi_infinite(lambda r: 1.0 / (1 + r) ** 0.5, tol=1e-12, limit=50)


def test_validation():
    with pytest.raises(DomainError):
        quadrature(math.sin, 0.0, math.inf)
    with pytest.raises(DomainError):
        quadrature(math.sin, 0.0, 1.0, tol=0.0)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.2, 5.0), p=st.integers(2, 6))
def test_power_laws(a, p):
    # int_0^inf dr / (a^2 + r^2)^(p/2) against Gauss-Legendre on the same map
    f = lambda r: 1.0 / (a * a + r * r) ** (p / 2)
    x, w = np.polynomial.legendre.leggauss(200)
    th = 0.5 * math.pi * (x + 1)
    ref = 0.5 * math.pi * np.sum(w * compactify(f)(th))
    assert quadrature_semi_infinite(f) == pytest.approx(ref, rel=1e-9)
