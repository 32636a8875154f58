"""Bound derivatives, Taylor expansions, bound integration, differential laws."""

import math
import random

import pytest

from fracsum.calculus import (
    PDE_IDS,
    central_diff,
    d_lower,
    d_prod,
    d_upper,
    eval_taylor,
    integrate_lower,
    integrate_upper,
    pde_residual,
    taylor_lower,
    taylor_upper,
)
from fracsum.core import FracSumRequest, frac_prod, frac_sum
from fracsum.engine import EngineError
from fracsum.expr import make_summand
from fracsum.special import EULER_GAMMA, hurwitz_zeta, riemann_zeta

INV_K = make_summand("1/k", limit=0.0)
INV_K2 = make_summand("1/k^2", limit=0.0)
EXP_NEG = make_summand("exp(-k)", limit=0.0)
PROD_RAT = make_summand("1+1/k", limit=1.0)


def req(spec, y, x, tol=1e-12):
    return FracSumRequest(spec, y, x, tol, 1 << 20)


def test_central_diff():
    assert central_diff(math.sin, 1.0) == pytest.approx(math.cos(1.0), abs=1e-10)
    assert central_diff(lambda t: t**3, 2.0) == pytest.approx(12.0, abs=1e-8)


def test_d_upper_closed_form():
    # d/dx H_x = zeta(2) - zeta(2, x+1) computed via the Hurwitz oracle
    for x in (0.5, 2.0, 4.75):
        want = hurwitz_zeta(2.0, x + 1.0)
        got = d_upper(req(INV_K, 1.0, x)).value
        assert got == pytest.approx(want, abs=1e-10)


def test_d_upper_matches_numeric():
    for spec in (INV_K2, EXP_NEG):
        for x in (1.3, 3.8):
            got = d_upper(req(spec, 1.0, x)).value
            num = central_diff(lambda t: frac_sum(req(spec, 1.0, t)).value, x)
            assert got == pytest.approx(num, abs=1e-7)


def test_d_lower_matches_numeric():
    for spec in (INV_K2, EXP_NEG):
        for y in (0.8, 2.4):
            got = d_lower(req(spec, y, 5.0)).value
            num = central_diff(lambda t: frac_sum(req(spec, t, 5.0)).value, y)
            assert got == pytest.approx(num, abs=1e-7)


def test_d_prod_constant_derivative():
    # prod_{k=1}^{x} (1+1/k) = x + 1, so the upper derivative is exactly 1
    for x in (0.5, 2.25, 6.0):
        got = d_prod(req(PROD_RAT, 1.0, x), "upper").value
        assert got == pytest.approx(1.0, abs=1e-8)


def test_d_prod_lower_matches_numeric():
    got = d_prod(req(PROD_RAT, 1.5, 5.0), "lower").value
    num = central_diff(lambda t: frac_prod(req(PROD_RAT, t, 5.0)).value, 1.5)
    assert got == pytest.approx(num, abs=1e-7)


def test_d_prod_rejects_bad_wrt():
    with pytest.raises(EngineError):
        d_prod(req(PROD_RAT, 1.0, 2.0), "sideways")


def test_taylor_upper_zeta_coefficients():
    t = taylor_upper(INV_K, 1.0, order=8, tol=1e-13)
    assert t.center == 0.0
    assert t.coefficients[0] == 0.0
    for k in range(2, 9):
        want = (-1.0) ** k * riemann_zeta(float(k))
        assert t.coefficients[k - 1] == pytest.approx(want, abs=1e-11)


def test_taylor_upper_evaluates_to_sum():
    # unit radius of convergence: the truncation error grows with |x|
    t = taylor_upper(INV_K2, 1.0, order=14, tol=1e-13)
    for x, tol in ((0.25, 1e-7), (0.5, 1e-3)):
        want = frac_sum(req(INV_K2, 1.0, x)).value
        assert eval_taylor(t, x) == pytest.approx(want, abs=tol)


def test_taylor_lower_evaluates_to_sum():
    t = taylor_lower(INV_K2, 4.0, order=14, tol=1e-13)
    for y in (4.6, 5.0):
        want = frac_sum(req(INV_K2, y, 4.0)).value
        assert eval_taylor(t, y) == pytest.approx(want, abs=1e-6)


def test_taylor_rejects_bad_order():
    with pytest.raises(EngineError):
        taylor_upper(INV_K, 1.0, order=0)


def test_integrate_upper_gamma_identity():
    res = integrate_upper(INV_K, 1.0, 0.0, 1.0, tol=1e-12)
    assert res.value == pytest.approx(EULER_GAMMA, abs=1e-10)


def test_integrate_upper_zeta_identity():
    # int_0^1 of the order-m harmonic continuation is zeta(m) - 1/(m-1)
    for m in (2, 3, 4):
        spec = make_summand(f"1/k^{m}", limit=0.0)
        res = integrate_upper(spec, 1.0, 0.0, 1.0, tol=1e-12)
        want = riemann_zeta(float(m)) - 1.0 / (m - 1.0)
        assert res.value == pytest.approx(want, abs=1e-9)


def test_integrate_upper_matches_quadrature():
    from fracsum.engine import integrate

    got = integrate_upper(INV_K2, 1.0, 0.5, 2.5, tol=1e-11).value
    num = integrate(lambda t: frac_sum(req(INV_K2, 1.0, t)).value, 0.5, 2.5, tol=1e-10)
    assert got == pytest.approx(num.value, abs=1e-8)


def test_integrate_lower_matches_quadrature():
    from fracsum.engine import integrate

    got = integrate_lower(INV_K2, 5.0, 1.0, 2.5, tol=1e-11).value
    num = integrate(lambda t: frac_sum(req(INV_K2, t, 5.0)).value, 1.0, 2.5, tol=1e-10)
    assert got == pytest.approx(num.value, abs=1e-8)


def test_integrate_empty_range():
    assert integrate_upper(INV_K, 1.0, 2.0, 2.0).value == 0.0
    assert integrate_lower(INV_K, 5.0, 1.5, 1.5).value == 0.0


def test_pde_residuals_small():
    rng = random.Random(31415)
    for spec in (INV_K, INV_K2, EXP_NEG):
        y = rng.uniform(0.8, 2.0)
        x = y + rng.uniform(0.5, 3.0)
        assert pde_residual("sum-transport", spec, x, y) < 1e-9
        assert pde_residual("sum-mixed-zero", spec, x, y) < 1e-8
    y = rng.uniform(1.0, 2.0)
    x = y + rng.uniform(0.5, 3.0)
    assert pde_residual("prod-transport", PROD_RAT, x, y) < 1e-8
    assert pde_residual("prod-mixed", PROD_RAT, x, y) < 1e-7


def test_pde_unknown_kind():
    with pytest.raises(EngineError):
        pde_residual("heat-equation", INV_K, 2.0, 1.0)
    assert len(PDE_IDS) == 4
