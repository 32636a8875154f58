"""Function approximation, antiderivative summation, Faulhaber continuation.

The approximation writes f(x) in terms of its own derivative series,
f(x) = L + (floor(x)-x) f'(x) - sum_{k>=1} f'(k+x); the star formulas sum
an antiderivative F of f through integrals of the fractional sum of f;
the Faulhaber route continues sums of entire functions through their
power series and Bernoulli numbers, needing no limit L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .calculus import central_diff, integrate_lower, integrate_upper
from .engine import DivergenceError, EngineError, EvalResult, integrate, sum_series
from .expr import DomainError, SummandSpec, evaluate
from .special import bernoulli_numbers

__all__ = [
    "ApproxSample",
    "PowerSeriesSpec",
    "em_approximation",
    "em_approx_curve",
    "curve_to_csv",
    "sum_antiderivative",
    "sum_antiderivative_lower",
    "faulhaber_sum",
]


@dataclass(frozen=True)
class ApproxSample:
    x: float
    f_true: float
    f_approx: float
    abs_err: float


@dataclass(frozen=True)
class PowerSeriesSpec:
    """Power-series coefficients c_0..c_J of a summand around center_a."""

    center_a: float
    coefficients: tuple
    truncation_J: int

    def __post_init__(self):
        if self.truncation_J < 0 or len(self.coefficients) != self.truncation_J + 1:
            raise EngineError("coefficients must have truncation_J + 1 entries")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise EngineError("power-series coefficients must be finite")


# ---------------------------------------------------------------------------
# Euler-Maclaurin function approximation
# ---------------------------------------------------------------------------


def em_approximation(
    summand: SummandSpec,
    x: float,
    tol: float = 1e-8,
    max_terms: int = 1 << 17,
) -> float:
    """f(x) ~ L + (floor(x)-x) f'(x) - sum_{k>=1} f'(k+x).

    Exact only in an asymptotic sense; no accuracy guarantee at
    non-integer x.  Standard floor, so the f'(x) term vanishes at
    integers.
    """
    dfn = summand.dfn()

    def term(k):
        return dfn(np.asarray(k, dtype=float) + x)

    res = sum_series(term, tol=tol, max_terms=max_terms)
    if res.verdict == "diverged":
        raise DivergenceError("derivative series diverged in the approximation")
    fprime = float(dfn(np.array([x]))[0])
    return summand.limit_L + (math.floor(x) - x) * fprime - res.value


def em_approx_curve(
    summand: SummandSpec,
    x_min: float,
    x_max: float,
    step: float,
    tol: float = 1e-8,
    max_terms: int = 1 << 17,
) -> List[ApproxSample]:
    """Approximation samples over an inclusive grid (step/2 slack at the top)."""
    if step <= 0:
        raise EngineError("grid step must be positive")
    samples: List[ApproxSample] = []
    if x_min > x_max:
        return samples
    n_steps = int(math.floor((x_max - x_min) / step + 0.5))
    for i in range(n_steps + 1):
        x = x_min + i * step
        if x > x_max + step / 2.0:
            break
        try:
            f_true = evaluate(summand.cont_body, x)
            f_approx = em_approximation(summand, x, tol=tol, max_terms=max_terms)
            samples.append(ApproxSample(x, f_true, f_approx, abs(f_true - f_approx)))
        except (DomainError, DivergenceError):
            samples.append(ApproxSample(x, math.nan, math.nan, math.nan))
    return samples


def curve_to_csv(samples: List[ApproxSample]) -> str:
    """CSV with header x,f_true,f_approx,abs_err at full double precision."""
    lines = ["x,f_true,f_approx,abs_err"]
    for s in samples:
        lines.append(f"{s.x:.17g},{s.f_true:.17g},{s.f_approx:.17g},{s.abs_err:.17g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Antiderivative summation (the star formulas)
# ---------------------------------------------------------------------------


def _verify_antiderivative(summand: SummandSpec, anti: SummandSpec, y: float) -> None:
    """Numerically check F' = f at 5 sample points."""
    base = max(y, 1.0)
    f_anti = anti.fn()
    f_sum = summand.fn()
    for i in range(1, 6):
        t = base + 0.37 * i
        approx = central_diff(lambda u: float(f_anti(np.array([u]))[0]), t)
        want = float(f_sum(np.array([t]))[0])
        if abs(approx - want) > 1e-8 * (1.0 + abs(want)):
            raise EngineError(
                f"antiderivative check failed at t={t}: F'={approx} vs f={want}"
            )


def sum_antiderivative(
    summand: SummandSpec,
    antiderivative: SummandSpec,
    y: float,
    x: float,
    inner_sum: Optional[Callable[[float], float]] = None,
    tol: float = 1e-10,
) -> EvalResult:
    """sum_{k=y}^{x} F(k) through the upper-bound integral route.

    Equals int_{y-1}^x S(t) dt + (F(y) - int_{y-1}^y S(t) dt)(x-y+1) where
    S(t) = sum_{k=y}^t f(k).  When the summand has no usable limit, pass
    the inner sum function S explicitly (e.g. a previously continued sum).
    """
    _verify_antiderivative(summand, antiderivative, y)
    if inner_sum is None:
        full = integrate_upper(summand, y, y - 1.0, x, tol=tol / 10.0)
        unit = integrate_upper(summand, y, y - 1.0, y, tol=tol / 10.0)
        i_full, i_unit = full.value, unit.value
        est = full.abs_error_estimate + unit.abs_error_estimate
        terms = full.terms_used + unit.terms_used
        verdict = full.verdict
    else:
        full = integrate(inner_sum, y - 1.0, x, tol=tol / 10.0)
        unit = integrate(inner_sum, y - 1.0, y, tol=tol / 10.0)
        i_full, i_unit = full.value, unit.value
        est = full.abs_error_estimate + unit.abs_error_estimate
        terms = full.terms_used + unit.terms_used
        verdict = "converged"
    f_y = evaluate(antiderivative.cont_body, y)
    value = i_full + (f_y - i_unit) * (x - y + 1.0)
    return EvalResult(value, est * (1.0 + abs(x - y + 1.0)), terms, verdict)


def sum_antiderivative_lower(
    summand: SummandSpec,
    antiderivative: SummandSpec,
    y: float,
    x: float,
    inner_sum: Optional[Callable[[float], float]] = None,
    tol: float = 1e-10,
) -> EvalResult:
    """sum_{k=y}^{x} F(k) through the lower-bound integral route.

    Equals int_{x+1}^y S(t) dt + (F(x) + int_x^{x+1} S(t) dt)(x-y+1) where
    S(t) = sum_{k=t}^x f(k); agrees with the upper route.  The optional
    *inner_sum* callable supplies S(t) directly.
    """
    _verify_antiderivative(summand, antiderivative, min(y, x))
    if inner_sum is None:
        # int_{x+1}^y S dt with S(t) = sum_{k=t}^x f(k)
        full = integrate_lower(summand, x, x + 1.0, y, tol=tol / 10.0)
        unit = integrate_lower(summand, x, x, x + 1.0, tol=tol / 10.0)
        i_full, i_unit = full.value, unit.value
        est = full.abs_error_estimate + unit.abs_error_estimate
        terms = full.terms_used + unit.terms_used
        verdict = full.verdict
    else:
        full = integrate(inner_sum, x + 1.0, y, tol=tol / 10.0)
        unit = integrate(inner_sum, x, x + 1.0, tol=tol / 10.0)
        i_full, i_unit = full.value, unit.value
        est = full.abs_error_estimate + unit.abs_error_estimate
        terms = full.terms_used + unit.terms_used
        verdict = "converged"
    f_x = evaluate(antiderivative.cont_body, x)
    value = i_full + (f_x + i_unit) * (x - y + 1.0)
    return EvalResult(value, est * (1.0 + abs(x - y + 1.0)), terms, verdict)


# ---------------------------------------------------------------------------
# Faulhaber power-series continuation
# ---------------------------------------------------------------------------


def _monomial_sum(i: int, x: float, y: float, bern: List[float]) -> float:
    """sum_{k=y}^{x} k^i via Faulhaber (B_1 = +1/2 convention)."""
    acc = 0.0
    for k in range(i + 1):
        p = i - k + 1
        acc += math.comb(i + 1, k) * bern[k] * (x ** p - (y - 1.0) ** p)
    return acc / (i + 1)


def faulhaber_sum(series: PowerSeriesSpec, y: float, x: float, tol: float = 1e-12) -> EvalResult:
    """Continue sum_{k=y}^{x} f(k) through the power series of f.

    Requires no limit L; the outer series must converge (coefficients
    decaying fast enough), otherwise divergence is flagged from growing
    term magnitudes.
    """
    J = series.truncation_J
    a = series.center_a
    # re-center the series at 0: c0_i = sum_{j>=i} c_j C(j,i) (-a)^(j-i)
    if a == 0.0:
        c0 = list(series.coefficients)
    else:
        c0 = []
        for i in range(J + 1):
            acc = 0.0
            for j in range(i, J + 1):
                acc += series.coefficients[j] * math.comb(j, i) * (-a) ** (j - i)
            c0.append(acc)
    bern = bernoulli_numbers(J + 1).as_floats()
    partial = 0.0
    small_run = 0
    grow_run = 0
    slow_grow_run = 0
    prev_mag = None
    for i in range(J + 1):
        term = c0[i] * _monomial_sum(i, x, y, bern)
        if not math.isfinite(term):
            raise DivergenceError(f"non-finite Faulhaber term at degree {i}")
        partial += term
        mag = abs(term)
        if prev_mag is not None and prev_mag > 0 and mag > 10.0 * prev_mag and mag > tol:
            grow_run += 1
            if grow_run >= 5:
                raise DivergenceError("Faulhaber outer series terms are growing")
        else:
            grow_run = 0
        if prev_mag is not None and mag > prev_mag and mag > tol:
            slow_grow_run += 1
        else:
            slow_grow_run = 0
        prev_mag = mag
        if mag <= tol * (1.0 + abs(partial)):
            small_run += 1
            if small_run >= 5:
                return EvalResult(partial, mag * 5.0, i + 1, "converged")
        else:
            small_run = 0
    est = abs(prev_mag) if prev_mag is not None else 0.0
    if slow_grow_run >= 5 and est > 1.0 + abs(partial) * tol:
        # terms were still growing when the coefficients ran out; for an
        # entire summand the hump always ends well before the truncation
        raise DivergenceError("Faulhaber outer series never started to converge")
    verdict = "converged" if est <= tol * (1.0 + abs(partial)) else "budget-exhausted"
    return EvalResult(partial, est, J + 1, verdict)
