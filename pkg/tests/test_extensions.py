"""Function approximation, antiderivative summation, Faulhaber continuation."""

import math
import random

import pytest

from fracsum.engine import DivergenceError, EngineError
from fracsum.expr import make_summand
from fracsum.extensions import (
    PowerSeriesSpec,
    curve_to_csv,
    em_approx_curve,
    em_approximation,
    faulhaber_sum,
    sum_antiderivative,
    sum_antiderivative_lower,
)
from fracsum.special import hurwitz_zeta, riemann_zeta

INV_K = make_summand("1/k", limit=0.0)
INV_K2 = make_summand("1/k^2", limit=0.0)
EXP_NEG = make_summand("exp(-k)", limit=0.0)
ONE = make_summand("1", limit=1.0)


def test_em_approximation_at_integers_is_zeta_tail():
    # for f = 1/k at integer x the approximation collapses to zeta(2, x+1)
    for x in (1, 3, 7):
        got = em_approximation(INV_K, float(x))
        assert got == pytest.approx(hurwitz_zeta(2.0, x + 1.0), abs=1e-6)


def test_em_approximation_error_shrinks_with_x():
    errs = [abs(em_approximation(INV_K, float(x)) - 1.0 / x) for x in (2, 5, 10)]
    assert errs[0] > errs[1] > errs[2]


def test_em_approximation_exp():
    got = em_approximation(EXP_NEG, 5.0)
    assert abs(got - math.exp(-5.0)) < 0.05


def test_em_approx_curve_grid():
    samples = em_approx_curve(INV_K2, 1.0, 2.0, 0.25)
    assert [s.x for s in samples] == pytest.approx([1.0, 1.25, 1.5, 1.75, 2.0])
    for s in samples:
        assert s.abs_err == pytest.approx(abs(s.f_true - s.f_approx))


def test_em_approx_curve_empty():
    assert em_approx_curve(INV_K, 3.0, 1.0, 0.5) == []


def test_em_approx_curve_bad_step():
    with pytest.raises(EngineError):
        em_approx_curve(INV_K, 1.0, 2.0, 0.0)


def test_curve_to_csv_format():
    samples = em_approx_curve(EXP_NEG, 1.0, 1.5, 0.5)
    text = curve_to_csv(samples)
    lines = text.strip().split("\n")
    assert lines[0] == "x,f_true,f_approx,abs_err"
    assert len(lines) == 3
    assert len(lines[1].split(",")) == 4


def test_antiderivative_constant_summand():
    # sum of F = k with f = 1 is the triangular closed form
    for x in (4.0, 2.5, 7.75):
        res = sum_antiderivative(ONE, make_summand("k", limit=0.0), 1.0, x)
        assert res.value == pytest.approx((x * x + x) / 2.0, abs=1e-10)


def test_antiderivative_second_level():
    # feed the triangular closed form back in as the inner sum
    f = make_summand("k", limit=0.0)
    F = make_summand("k^2/2", limit=0.0)
    for x in (3.0, 5.5):
        res = sum_antiderivative(f, F, 1.0, x, inner_sum=lambda t: t * (t + 1.0) / 2.0)
        assert res.value == pytest.approx(x * (x + 1.0) * (2.0 * x + 1.0) / 12.0, abs=1e-9)


def test_antiderivative_log_gamma():
    # summing ln k continues to ln Gamma(x+1)
    F = make_summand("ln(k)", limit=0.0)
    for x in (0.5, 2.5, 5.0):
        res = sum_antiderivative(INV_K, F, 1.0, x, tol=1e-10)
        assert res.value == pytest.approx(math.lgamma(x + 1.0), abs=1e-8)


def test_antiderivative_lower_route_agrees():
    rng = random.Random(8675309)
    cases = [
        (ONE, make_summand("k", limit=0.0)),
        (INV_K, make_summand("ln(k)", limit=0.0)),
        (INV_K2, make_summand("-1/k", limit=0.0)),
    ]
    for f, F in cases:
        for _ in range(3):
            y = rng.uniform(0.5, 2.5)
            x = y + rng.uniform(0.5, 4.0)
            up = sum_antiderivative(f, F, y, x, tol=1e-9).value
            lo = sum_antiderivative_lower(f, F, y, x, tol=1e-9).value
            assert up == pytest.approx(lo, abs=1e-7)


def test_antiderivative_empty_sum():
    F = make_summand("k", limit=0.0)
    assert sum_antiderivative(ONE, F, 1.0, 0.0).value == pytest.approx(0.0, abs=1e-10)
    assert sum_antiderivative_lower(ONE, F, 1.0, 0.0).value == pytest.approx(0.0, abs=1e-10)


def test_antiderivative_mismatch_rejected():
    # F = k^2 does not differentiate to f = 1
    with pytest.raises(EngineError):
        sum_antiderivative(ONE, make_summand("k^2", limit=0.0), 1.0, 3.0)


def test_integral_of_gen_harmonic_identity():
    # int_0^x of the order-m continuation equals zeta(m) x - H_x^(m-1)/(m-1)
    from fracsum.calculus import integrate_upper
    from fracsum.continuations import gen_harmonic

    m = 3
    spec = make_summand("1/k^3", limit=0.0)
    for x in (0.5, 1.0, 2.5):
        integral = integrate_upper(spec, 1.0, 0.0, x, tol=1e-12).value
        want = riemann_zeta(float(m)) * x - gen_harmonic(x, float(m - 1)) / (m - 1.0)
        assert integral == pytest.approx(want, abs=1e-9)


def test_faulhaber_monomials_closed_forms():
    sq = PowerSeriesSpec(0.0, (0.0, 0.0, 1.0), 2)
    cu = PowerSeriesSpec(0.0, (0.0, 0.0, 0.0, 1.0), 3)
    for x in (4.0, 2.5, 6.75):
        assert faulhaber_sum(sq, 1.0, x).value == pytest.approx(
            x * (x + 1.0) * (2.0 * x + 1.0) / 6.0, abs=1e-12
        )
        assert faulhaber_sum(cu, 1.0, x).value == pytest.approx(
            (x * (x + 1.0) / 2.0) ** 2, abs=1e-11
        )


def test_faulhaber_empty_sum():
    sq = PowerSeriesSpec(0.0, (0.0, 0.0, 1.0), 2)
    assert faulhaber_sum(sq, 1.0, 0.0).value == 0.0


def test_faulhaber_shifted_center():
    # k^2 expanded around a = 1: 1 + 2(k-1) + (k-1)^2
    shifted = PowerSeriesSpec(1.0, (1.0, 2.0, 1.0), 2)
    assert faulhaber_sum(shifted, 1.0, 4.0).value == pytest.approx(30.0, abs=1e-11)


def test_faulhaber_exponential():
    coeffs = tuple(1.0 / math.factorial(i) for i in range(41))
    spec = PowerSeriesSpec(0.0, coeffs, 40)
    for x in (3.0, 5.0):
        want = math.e * (math.e**x - 1.0) / (math.e - 1.0)
        assert faulhaber_sum(spec, 1.0, float(x)).value == pytest.approx(want, rel=1e-10)


def test_faulhaber_divergence_detected():
    # unit coefficients have radius 1; the bound terms blow up
    spec = PowerSeriesSpec(0.0, tuple(1.0 for _ in range(60)), 59)
    with pytest.raises(DivergenceError):
        faulhaber_sum(spec, 1.0, 5.0)


def test_power_series_spec_validation():
    with pytest.raises(EngineError):
        PowerSeriesSpec(0.0, (1.0, 2.0), 2)
    with pytest.raises(EngineError):
        PowerSeriesSpec(0.0, (1.0, math.inf), 1)
