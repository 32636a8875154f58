"""Acceptance criteria for the fractional-sum package.

Each test covers one acceptance criterion, prints a single PASS/FAIL
line, and asserts the stated tolerance.  Random points use fixed seeds
so every run checks the identical set.
"""

import math
import random

import pytest

from fracsum.calculus import (
    central_diff,
    d_lower,
    d_prod,
    d_upper,
    eval_taylor,
    integrate_upper,
    pde_residual,
    taylor_upper,
)
from fracsum.continuations import (
    ROOT_OFFSET,
    alt_harmonic,
    alt_harmonic_reflection_residual,
    alt_harmonic_roots,
    zeta_series_identity,
)
from fracsum.core import FracSumRequest, frac_prod, frac_sum
from fracsum.expr import evaluate, make_summand
from fracsum.extensions import (
    PowerSeriesSpec,
    em_approx_curve,
    faulhaber_sum,
    sum_antiderivative,
    sum_antiderivative_lower,
)
from fracsum.special import EULER_GAMMA, riemann_zeta

SUM_SET = [("1/k", 0.0), ("1/k^2", 0.0), ("exp(-k)", 0.0), ("(-1)^(k+1)/k", 0.0)]
PROD_SET = [("1+1/k", 1.0), ("exp(1/k)", 1.0)]


def report(number: int, ok: bool, description: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"acceptance criterion {number}: {verdict} - {description}")
    assert ok, f"criterion {number} failed: {description}"


def _req(spec, y, x, tol=1e-10):
    return FracSumRequest(spec, y, x, tol, 1 << 20)


def test_criterion_01_integer_bound_oracle_equivalence():
    worst = 0.0
    for src, limit in SUM_SET:
        spec = make_summand(src, limit=limit)
        for y in range(1, 21):
            direct = 0.0
            for x in range(y, 21):
                direct += evaluate(spec.body, float(x))
                got = frac_sum(_req(spec, float(y), float(x))).value
                worst = max(worst, abs(got - direct))
    worst_prod = 0.0
    for src, limit in PROD_SET:
        spec = make_summand(src, limit=limit)
        for y in range(1, 21):
            direct = 1.0
            for x in range(y, 21):
                direct *= evaluate(spec.body, float(x))
                got = frac_prod(_req(spec, float(y), float(x))).value
                worst_prod = max(worst_prod, abs(got - direct) / abs(direct))
    ok = worst <= 1e-9 and worst_prod <= 1e-9
    report(1, ok, f"integer bounds vs direct sums/products "
                  f"(worst sum {worst:.2e}, worst prod rel {worst_prod:.2e})")


def test_criterion_02_unit_integral_identities():
    inv_k = make_summand("1/k", limit=0.0)
    gamma_err = abs(integrate_upper(inv_k, 1.0, 0.0, 1.0, tol=1e-12).value - EULER_GAMMA)
    errs = {}
    for m in (2, 3):
        spec = make_summand(f"1/k^{m}", limit=0.0)
        got = integrate_upper(spec, 1.0, 0.0, 1.0, tol=1e-12).value
        errs[m] = abs(got - (riemann_zeta(float(m)) - m + 1))
    ok = gamma_err <= 1e-8 and errs[2] <= 1e-8 and errs[3] <= 1e-8
    report(2, ok, f"unit-interval integrals: gamma err {gamma_err:.2e}, "
                  f"m=2 err {errs[2]:.2e}, m=3 err {errs[3]:.2e} "
                  f"(target value zeta(m)-m+1)")


def test_criterion_03_taylor_identity():
    spec = make_summand("1/k", limit=0.0)
    expansion = taylor_upper(spec, 1.0, order=12, tol=1e-13)
    coeff_worst = max(
        abs(expansion.coefficients[k - 1] - (-1.0) ** k * riemann_zeta(float(k)))
        for k in range(2, 8)
    )
    spec_sum = frac_sum(_req(spec, 1.0, 0.5, tol=1e-12)).value
    eval_err = abs(eval_taylor(expansion, 0.5) - spec_sum)
    ok = coeff_worst <= 1e-9 and eval_err <= 1e-4
    report(3, ok, f"harmonic Taylor coefficients (worst {coeff_worst:.2e}) "
                  f"and order-12 value at 0.5 (err {eval_err:.2e})")


def _averaged(partials):
    seq = list(partials)
    while len(seq) >= 4:
        new = [(seq[i] + seq[i + 1]) / 2.0 for i in range(len(seq) - 1)]
        if abs(new[-1] - seq[-1]) < 1e-15 * (1.0 + abs(new[-1])):
            seq = new
            break
        seq = new
    return seq[-1]


def test_criterion_04_zeta_series_identities():
    partials = []
    acc = 0.0
    for k in range(2, 61):
        acc += (-1.0) ** k * riemann_zeta(float(k)) / k
        partials.append(acc)
    gamma_err = abs(_averaged(partials) - EULER_GAMMA)
    zeta_err = abs(zeta_series_identity(2, 60) - (riemann_zeta(2.0) - 1.0))
    ok = gamma_err <= 1e-10 and zeta_err <= 1e-10
    report(4, ok, f"60-term zeta series for gamma (err {gamma_err:.2e}) and "
                  f"stabilized series for zeta(2)-1 (err {zeta_err:.2e})")


def test_criterion_05_alternating_harmonic():
    worst_int = 0.0
    acc = 0.0
    for n in range(1, 31):
        acc += (-1.0) ** (n + 1) / n
        worst_int = max(worst_int, abs(alt_harmonic(float(n)) - acc))
    worst_half = max(
        abs(alt_harmonic(n + 0.5) - math.log(2.0)) for n in range(-10, 10)
    )
    rng = random.Random(424242)
    worst_refl = 0.0
    count = 0
    while count < 100:
        x = rng.uniform(-10.0, 10.0)
        if abs(x - round(x)) < 0.05:
            continue
        worst_refl = max(worst_refl, alt_harmonic_reflection_residual(x))
        count += 1
    ok = worst_int <= 1e-12 and worst_half <= 1e-12 and worst_refl <= 1e-9
    report(5, ok, f"alternating harmonic: integers {worst_int:.2e}, "
                  f"half-integers {worst_half:.2e}, reflection {worst_refl:.2e}")


def test_criterion_06_roots():
    import time

    t0 = time.time()
    roots = alt_harmonic_roots(50)
    elapsed = time.time() - t0
    bracketed = all(-r.index_n - 1.0 < r.location < -r.index_n for r in roots)
    err_5 = abs(roots[4].location + 5.0 + ROOT_OFFSET)
    err_50 = abs(roots[49].location + 50.0 + ROOT_OFFSET)
    ok = bracketed and err_50 < 1e-3 and err_5 < 1e-2 and elapsed < 10.0
    report(6, ok, f"roots bracketed, offset err {err_5:.2e} at n=5 and "
                  f"{err_50:.2e} at n=50, runtime {elapsed:.1f}s")


def test_criterion_07_differential_laws():
    rng = random.Random(112358)
    worst = {"sum-transport": 0.0, "sum-mixed-zero": 0.0,
             "prod-transport": 0.0, "prod-mixed": 0.0}
    for src, limit in [("1/k", 0.0), ("1/k^2", 0.0), ("exp(-k)", 0.0)]:
        spec = make_summand(src, limit=limit)
        for _ in range(10):
            y = rng.uniform(0.5, 3.0)
            x = y + rng.uniform(0.5, 4.0)
            for kind in ("sum-transport", "sum-mixed-zero"):
                worst[kind] = max(worst[kind], pde_residual(kind, spec, x, y))
    for src, limit in PROD_SET:
        spec = make_summand(src, limit=limit)
        for _ in range(10):
            y = rng.uniform(1.0, 3.0)
            x = y + rng.uniform(0.5, 4.0)
            for kind in ("prod-transport", "prod-mixed"):
                worst[kind] = max(worst[kind], pde_residual(kind, spec, x, y))
    ok = (worst["sum-transport"] <= 1e-7 and worst["sum-mixed-zero"] <= 1e-6
          and worst["prod-transport"] <= 1e-6 and worst["prod-mixed"] <= 1e-6)
    report(7, ok, "differential-law residuals "
                  + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()))


def test_criterion_08_antiderivative_summation():
    one = make_summand("1", limit=1.0)
    lin = make_summand("k", limit=0.0)
    half_sq = make_summand("k^2/2", limit=0.0)
    inv_k = make_summand("1/k", limit=0.0)
    log_k = make_summand("ln(k)", limit=0.0)
    rng = random.Random(271828)
    worst_tri = worst_pyr = 0.0
    for _ in range(20):
        x = rng.uniform(0.05, 10.0)
        got = sum_antiderivative(one, lin, 1.0, x).value
        worst_tri = max(worst_tri, abs(got - (x * x + x) / 2.0))
        got = sum_antiderivative(
            lin, half_sq, 1.0, x, inner_sum=lambda t: t * (t + 1.0) / 2.0
        ).value
        worst_pyr = max(worst_pyr, abs(got - x * (x + 1.0) * (2.0 * x + 1.0) / 12.0))
    worst_lg = max(
        abs(sum_antiderivative(inv_k, log_k, 1.0, x, tol=1e-10).value
            - math.lgamma(x + 1.0))
        for x in (0.5, 1.0, 2.5, 5.0)
    )
    worst_route = 0.0
    inv_k2 = make_summand("1/k^2", limit=0.0)
    neg_inv = make_summand("-1/k", limit=0.0)
    for f, F in [(one, lin), (inv_k, log_k), (inv_k2, neg_inv)]:
        for _ in range(4):
            y = rng.uniform(0.5, 2.5)
            x = y + rng.uniform(0.5, 4.0)
            up = sum_antiderivative(f, F, y, x, tol=1e-9).value
            lo = sum_antiderivative_lower(f, F, y, x, tol=1e-9).value
            worst_route = max(worst_route, abs(up - lo))
    ok = (worst_tri <= 1e-9 and worst_pyr <= 1e-9 and worst_lg <= 1e-7
          and worst_route <= 1e-7)
    report(8, ok, f"antiderivative sums: triangular {worst_tri:.2e}, "
                  f"pyramidal {worst_pyr:.2e}, log-gamma {worst_lg:.2e}, "
                  f"route agreement {worst_route:.2e}")


def test_criterion_09_faulhaber_exponential():
    coeffs = tuple(1.0 / math.factorial(i) for i in range(41))
    series = PowerSeriesSpec(0.0, coeffs, 40)
    worst = 0.0
    for x in range(1, 11):
        got = faulhaber_sum(series, 1.0, float(x)).value
        want = math.e * (math.e**x - 1.0) / (math.e - 1.0)
        worst = max(worst, abs(got - want) / abs(want))
    ok = worst <= 1e-6
    report(9, ok, f"power-series continuation of exp (worst rel err {worst:.2e})")


def test_criterion_10_approximation_figures():
    results = {}
    for src, limit, lo, hi, bound in [
        ("1/k", 0.0, 1.0, 6.0, 0.2),
        ("exp(-k)", 0.0, 1.0, 6.0, 0.2),
    ]:
        spec = make_summand(src, limit=limit)
        curve = em_approx_curve(spec, lo, hi, 0.05)
        errs = [s.abs_err for s in curve]
        results[src] = (max(errs) < bound, max(errs), errs[-1] < errs[0])
    sinc = make_summand("sin(k)/k", limit=0.0)
    curve = em_approx_curve(sinc, 1.0, 10.0, 0.05)
    sinc_max = max(s.abs_err for s in curve)
    ok = (results["1/k"][0] and results["1/k"][2]
          and results["exp(-k)"][0] and results["exp(-k)"][2]
          and sinc_max < 0.3)
    report(10, ok, f"approximation curves: 1/x max err {results['1/k'][1]:.3f} "
                   f"(bound 0.2), exp max err {results['exp(-k)'][1]:.3f}, "
                   f"sinc max err {sinc_max:.3f}")


def test_criterion_11_derivative_cross_checks():
    rng = random.Random(141421)
    worst = 0.0
    for src, limit in [("1/k", 0.0), ("1/k^2", 0.0), ("exp(-k)", 0.0)]:
        spec = make_summand(src, limit=limit)
        for _ in range(20):
            y = rng.uniform(0.3, 3.0)
            x = y + rng.uniform(0.3, 5.0)
            req = _req(spec, y, x, tol=1e-12)
            analytic = d_upper(req).value
            numeric = central_diff(
                lambda t: frac_sum(_req(spec, y, t, tol=1e-12)).value, x
            )
            worst = max(worst, abs(analytic - numeric) / (1.0 + abs(analytic)))
            analytic = d_lower(req).value
            numeric = central_diff(
                lambda t: frac_sum(_req(spec, t, x, tol=1e-12)).value, y
            )
            worst = max(worst, abs(analytic - numeric) / (1.0 + abs(analytic)))
    for src, limit in PROD_SET:
        spec = make_summand(src, limit=limit)
        for _ in range(20):
            y = rng.uniform(0.5, 3.0)
            x = y + rng.uniform(0.3, 5.0)
            req = _req(spec, y, x, tol=1e-12)
            for wrt in ("upper", "lower"):
                analytic = d_prod(req, wrt).value
                if wrt == "upper":
                    numeric = central_diff(
                        lambda t: frac_prod(_req(spec, y, t, tol=1e-12)).value, x
                    )
                else:
                    numeric = central_diff(
                        lambda t: frac_prod(_req(spec, t, x, tol=1e-12)).value, y
                    )
                worst = max(worst, abs(analytic - numeric) / (1.0 + abs(analytic)))
    ok = worst <= 1e-6
    report(11, ok, f"analytic vs numeric bound derivatives (worst rel {worst:.2e})")
