"""Fractional sums and products with real bounds.

The continuation evaluated here is

    sum_{k=y}^{x} f(k) = L(x-y+1) + sum_{k>=1} (f(k+y-1) - f(k+x))

with L = lim f(k), products going through exp of the log-sum.  The
algebraic laws (empty sum/product, recurrences, split, reflection) are
exposed as residual checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import DivergenceError, EngineError, EvalResult, bracket_check, sum_series
from .expr import Call, SummandSpec, compile_expr, evaluate, simplify

__all__ = [
    "FracSumRequest",
    "frac_sum",
    "frac_prod",
    "check_property",
    "PROPERTY_IDS",
]


@dataclass(frozen=True)
class FracSumRequest:
    summand: SummandSpec
    lower_y: float = 1.0
    upper_x: float = 0.0
    tol: float = 1e-10
    max_terms: int = 1_000_000


def _series_value(req: FracSumRequest, fn) -> EvalResult:
    y, x = req.lower_y, req.upper_x

    def term(k):
        return fn(np.asarray(k, dtype=float) + (y - 1.0)) - fn(np.asarray(k, dtype=float) + x)

    res = sum_series(term, tol=req.tol, max_terms=req.max_terms)
    if res.verdict == "diverged":
        raise DivergenceError(
            f"continuation series diverged for bounds ({y}, {x})"
        )
    if res.verdict == "budget-exhausted" and req.summand.monotonic_hint != "unknown":
        # floor/ceil bracketing doubles as a convergence certificate for
        # monotone summands; an unconverged bracket certifies nothing
        try:
            certified = bracket_check(req.summand, x, tol=max(req.tol, 1e-9))
        except DivergenceError:
            certified = False
        if certified:
            return EvalResult(res.value, res.abs_error_estimate, res.terms_used, "accelerated")
    return res


def frac_sum(req: FracSumRequest) -> EvalResult:
    """Evaluate sum_{k=y}^{x} f(k) for real bounds."""
    y, x = req.lower_y, req.upper_x
    if x == y - 1.0:
        return EvalResult(0.0, 0.0, 0, "converged")  # empty sum, no series needed
    if y > x + 1.0:
        # reversed bounds via the reflection identity (exact)
        inner = frac_sum(FracSumRequest(req.summand, x + 1.0, y - 1.0, req.tol, req.max_terms))
        return EvalResult(-inner.value, inner.abs_error_estimate, inner.terms_used, inner.verdict)
    L = req.summand.limit_L
    res = _series_value(req, req.summand.fn())
    value = L * (x - y + 1.0) + res.value
    return EvalResult(value, res.abs_error_estimate, res.terms_used, res.verdict)


def _log_spec(summand: SummandSpec) -> SummandSpec:
    """Summand ln(f) with limit ln(L), for the product-through-log route."""
    L = summand.limit_L
    if not L > 0:
        raise EngineError(f"fractional product requires limit L > 0, got {L}")
    body = simplify(Call("ln", summand.cont_body))
    from .expr import differentiate  # local to avoid cycle at import time

    return SummandSpec(
        body=body,
        cont_body=body,
        derivative=differentiate(body),
        limit_L=math.log(L),
        parity_factor=summand.parity_factor,
        monotonic_hint="unknown",
        source=f"ln({summand.source})" if summand.source else "",
    )


def _check_positive(summand: SummandSpec, y: float, x: float) -> None:
    fn = summand.fn()
    ks = np.arange(1.0, 33.0)
    for pts in (ks + (y - 1.0), ks + x):
        vals = fn(pts)
        if np.any(vals <= 0.0):
            bad = pts[np.argmax(vals <= 0.0)]
            raise EngineError(f"fractional product requires f > 0; f({bad}) <= 0")


def frac_prod(req: FracSumRequest) -> EvalResult:
    """Evaluate prod_{k=y}^{x} f(k) = L^(x-y+1) * prod f(k+y-1)/f(k+x)."""
    y, x = req.lower_y, req.upper_x
    if x == y - 1.0:
        return EvalResult(1.0, 0.0, 0, "converged")  # empty product
    if y > x + 1.0:
        inner = frac_prod(FracSumRequest(req.summand, x + 1.0, y - 1.0, req.tol, req.max_terms))
        if inner.value == 0.0:
            raise EngineError("reflection of a zero product")
        value = 1.0 / inner.value
        return EvalResult(value, inner.abs_error_estimate * value * value, inner.terms_used, inner.verdict)
    _check_positive(req.summand, y, x)
    log_req = FracSumRequest(_log_spec(req.summand), y, x, req.tol, req.max_terms)
    res = frac_sum(log_req)
    value = math.exp(res.value)
    return EvalResult(value, abs(value) * res.abs_error_estimate, res.terms_used, res.verdict)


# ---------------------------------------------------------------------------
# Algebraic-law residuals
# ---------------------------------------------------------------------------

PROPERTY_IDS = (
    "empty-sum",
    "empty-prod",
    "recurrence-low",
    "recurrence-high",
    "split",
    "reflection",
    "prod-recurrence-low",
    "prod-recurrence-high",
    "prod-split",
    "prod-reflection",
)


def _f_at(summand: SummandSpec, t: float) -> float:
    return evaluate(summand.cont_body, t)


def check_property(name: str, req: FracSumRequest, aux: float | None = None) -> float:
    """Residual |LHS - RHS| (relative for products) of an algebraic law."""
    if name not in PROPERTY_IDS:
        raise EngineError(f"unknown property {name!r}; expected one of {PROPERTY_IDS}")
    s = req.summand
    y, x, tol, mt = req.lower_y, req.upper_x, req.tol, req.max_terms

    def S(lo, hi):
        return frac_sum(FracSumRequest(s, lo, hi, tol, mt)).value

    def P(lo, hi):
        return frac_prod(FracSumRequest(s, lo, hi, tol, mt)).value

    if name == "empty-sum":
        return abs(S(y, y - 1.0))
    if name == "empty-prod":
        return abs(P(y, y - 1.0) - 1.0)
    if name == "recurrence-low":
        return abs(S(y, x) - (_f_at(s, y) + S(y + 1.0, x)))
    if name == "recurrence-high":
        return abs(S(y, x) - (_f_at(s, x) + S(y, x - 1.0)))
    if name == "split":
        if aux is None:
            raise EngineError("split requires the split point c")
        return abs(S(y, x) - (S(y, aux) + S(aux + 1.0, x)))
    if name == "reflection":
        return abs(S(y, x) + S(x + 1.0, y - 1.0))
    if name == "prod-recurrence-low":
        return abs(P(y, x) / (_f_at(s, y) * P(y + 1.0, x)) - 1.0)
    if name == "prod-recurrence-high":
        return abs(P(y, x) / (_f_at(s, x) * P(y, x - 1.0)) - 1.0)
    if name == "prod-split":
        if aux is None:
            raise EngineError("prod-split requires the split point c")
        return abs(P(y, x) / (P(y, aux) * P(aux + 1.0, x)) - 1.0)
    if name == "prod-reflection":
        return abs(P(y, x) * P(x + 1.0, y - 1.0) - 1.0)
    raise AssertionError("unreachable")
