import numpy as np
import pytest
import sympy

from mfsusy.errors import DomainError
from mfsusy.grid import RadialGrid
from mfsusy.numeric.critical import (
    find_critical_l,
    partner_l_derivatives,
    partner_rho_derivatives,
    pocket_analysis,
    stationary_points,
)
from mfsusy.susy import u_plus


@pytest.fixture(scope="module")
def cp():
    return find_critical_l()


def brute_pocket(l):
    # dense grid oracle: interior local extrema of U+ on [0.5, 5]
    rho = np.linspace(0.5, 5.0, 400001)
    u = np.asarray(u_plus(l, rho))
    i = np.nonzero((u[1:-1] < u[:-2]) & (u[1:-1] < u[2:]))[0] + 1
    j = np.nonzero((u[1:-1] > u[:-2]) & (u[1:-1] > u[2:]))[0] + 1
    return (u[j[0]] - u[i[0]]) if len(i) and len(j) else None


def test_published_values(cp):
    assert cp.l_cr == pytest.approx(6.876, abs=0.01)
    assert cp.rho_cr == pytest.approx(1.599, abs=0.01)
    assert max(abs(r) for r in cp.grad_residuals) < 1e-8


def test_symbolic_oracle(cp):
    r, l = sympy.symbols("rho l")
    U = l * (l - 1) / r**2 - (2 * l + 1) * (2 * l - 3) / (1 + r**2) ** 2 + 2 * (2 * l + 1) / (r**2 * (1 + r**2) ** 2)
    sol = sympy.nsolve([sympy.diff(U, r), sympy.diff(U, r, 2)], [l, r], [7.0, 1.6], prec=30)
    assert cp.l_cr == pytest.approx(float(sol[0]), abs=1e-9)
    assert cp.rho_cr == pytest.approx(float(sol[1]), abs=1e-9)


def test_bisection_agrees(cp):
    b = find_critical_l(method="bisection")
    assert b.method == "bisection"
    assert b.l_cr == pytest.approx(cp.l_cr, abs=1e-8)
    assert b.rho_cr == pytest.approx(cp.rho_cr, abs=1e-6)


def test_pocket_birth(cp):
    assert len(pocket_analysis(cp.l_cr - 0.5).stationary) == 0
    assert len(pocket_analysis(cp.l_cr + 0.5).stationary) == 2


def test_single_stationary_point_and_sign_change(cp):
    near = np.linspace(cp.rho_cr - 0.3, cp.rho_cr + 0.3, 2001)
    d1 = partner_rho_derivatives(cp.l_cr, near, 1)[1]
    assert np.all(d1 <= 1e-9)
    assert np.min(np.abs(d1)) < 1e-6
    lo = partner_rho_derivatives(cp.l_cr - 0.2, cp.rho_cr, 2)[2]
    hi = partner_rho_derivatives(cp.l_cr + 0.2, cp.rho_cr, 2)[2]
    assert lo * hi < 0


def test_derivatives_against_differences():
    l, r, h = 7.3, 1.4, 1e-5
    d = partner_rho_derivatives(l, r, 3)
    U = lambda x: u_plus(l, x)
    assert d[0] == pytest.approx(U(r))
    assert d[1] == pytest.approx((U(r + h) - U(r - h)) / (2 * h), rel=1e-7)
    assert d[2] == pytest.approx((U(r + h) - 2 * U(r) + U(r - h)) / h**2, rel=1e-4)
    dl = partner_l_derivatives(l, r)
    fd = (u_plus(l + h, r) - u_plus(l - h, r)) / (2 * h)
    assert np.ravel(dl)[0] == pytest.approx(fd, rel=1e-7)


class TestPocket:
    def test_no_pocket_at_6(self):
        rep = pocket_analysis(6)
        assert not rep.has_pocket and rep.depth is None

    def test_pocket_at_8(self):
        rep = pocket_analysis(8)
        assert rep.has_pocket and rep.minimum[0] < rep.maximum[0] and rep.depth > 0

    def test_shallow_at_7(self):
        rep = pocket_analysis(7)
        assert rep.has_pocket
        assert rep.depth == pytest.approx(brute_pocket(7), rel=1e-6)
        assert rep.depth < 0.05

    def test_depth_monotone(self):
        ls = np.arange(7.0, 10.01, 0.5)
        depths = [pocket_analysis(l).depth for l in ls]
        assert all(b > a for a, b in zip(depths, depths[1:]))
        for l, d in zip(ls[::2], depths[::2]):
            assert d == pytest.approx(brute_pocket(l), rel=1e-6)

    def test_scan_must_cover(self):
        with pytest.raises(DomainError):
            pocket_analysis(8, RadialGrid.logarithmic(0.5, 10, 100))

    def test_stationary_kinds(self):
        kinds = [k for _, k in stationary_points(9, np.geomspace(0.2, 10, 3000))]
        assert kinds == ["min", "max"]
