"""Derivatives, Taylor expansions and integrals of fractional sums.

Bound-derivatives come from term-wise differentiation of the continuation
series; Taylor coefficients from repeated symbolic differentiation of the
summand (with a closed Hurwitz-zeta route for power summands); integrals
over a bound from the term-wise integrated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .core import FracSumRequest, frac_prod, frac_sum
from .engine import DivergenceError, EngineError, EvalResult, sum_series
from .expr import (
    BinOp,
    Const,
    ExprNode,
    Neg,
    SummandSpec,
    Var,
    compile_expr,
    differentiate,
    evaluate,
    simplify,
)
from .special import hurwitz_zeta, pochhammer

__all__ = [
    "TaylorExpansion",
    "d_upper",
    "d_lower",
    "d_prod",
    "taylor_upper",
    "taylor_lower",
    "eval_taylor",
    "integrate_upper",
    "integrate_lower",
    "pde_residual",
    "PDE_IDS",
    "central_diff",
    "derivative_spec",
]

TAYLOR_RADIUS = 1.0  # the H_x-style expansions are valid for |x - center| < 1


@dataclass(frozen=True)
class TaylorExpansion:
    """Polynomial expansion of a fractional sum in one bound."""

    center: float
    coefficients: tuple
    order: int
    wrt: str  # upper / lower


def eval_taylor(expansion: TaylorExpansion, bound: float) -> float:
    """Evaluate the expansion polynomial at the given bound value."""
    u = bound - expansion.center
    acc = 0.0
    for c in reversed(expansion.coefficients):
        acc = acc * u + c
    return acc


# ---------------------------------------------------------------------------
# Finite differences (test oracles and the mixed-partial residuals)
# ---------------------------------------------------------------------------


def central_diff(fn: Callable[[float], float], x: float, h: float = 1e-5) -> float:
    """Central difference with one level of Richardson refinement."""

    def d(step: float) -> float:
        return (fn(x + step) - fn(x - step)) / (2.0 * step)

    return (4.0 * d(h / 2.0) - d(h)) / 3.0


# ---------------------------------------------------------------------------
# Bound derivatives
# ---------------------------------------------------------------------------


def derivative_spec(summand: SummandSpec) -> SummandSpec:
    """SummandSpec for f' (limit 0: f converging to L forces f' -> 0)."""
    body = summand.derivative
    return SummandSpec(
        body=body,
        cont_body=body,
        derivative=differentiate(body),
        limit_L=0.0,
        parity_factor=summand.parity_factor,
        monotonic_hint="unknown",
        source=f"d/dk {summand.source}" if summand.source else "",
    )


def _derivative_series(summand: SummandSpec, shift: float, tol: float, max_terms: int) -> EvalResult:
    """sum_{k>=1} f'(k + shift)."""
    dfn = summand.dfn()

    def term(k):
        return dfn(np.asarray(k, dtype=float) + shift)

    res = sum_series(term, tol=tol, max_terms=max_terms)
    if res.verdict == "diverged":
        raise DivergenceError("derivative series diverged")
    return res


def d_upper(req: FracSumRequest) -> EvalResult:
    """d/dx sum_{k=y}^{x} f(k) = L - sum_{k>=1} f'(k+x)."""
    res = _derivative_series(req.summand, req.upper_x, req.tol, req.max_terms)
    return EvalResult(req.summand.limit_L - res.value, res.abs_error_estimate, res.terms_used, res.verdict)


def d_lower(req: FracSumRequest) -> EvalResult:
    """d/dy sum_{k=y}^{x} f(k) = -L + sum_{k>=0} f'(k+y)."""
    y = req.lower_y
    res = _derivative_series(req.summand, y, req.tol, req.max_terms)
    first = evaluate(req.summand.derivative, y)
    value = -req.summand.limit_L + first + res.value
    return EvalResult(value, res.abs_error_estimate, res.terms_used, res.verdict)


def d_prod(req: FracSumRequest, wrt: str = "upper") -> EvalResult:
    """Derivative of the fractional product with respect to one bound."""
    if wrt not in ("upper", "lower"):
        raise EngineError(f"wrt must be 'upper' or 'lower', got {wrt!r}")
    L = req.summand.limit_L
    if not L > 0:
        raise EngineError("product derivative requires limit L > 0")
    prod = frac_prod(req)
    fn = req.summand.fn()
    dfn = req.summand.dfn()
    shift = req.upper_x if wrt == "upper" else req.lower_y

    def term(k):
        t = np.asarray(k, dtype=float) + shift
        denom = fn(t)
        if np.any(denom == 0.0):
            raise EngineError("product derivative hit f = 0")
        return dfn(t) / denom

    res = sum_series(term, tol=req.tol, max_terms=req.max_terms)
    if res.verdict == "diverged":
        raise DivergenceError("logarithmic-derivative series diverged")
    if wrt == "upper":
        factor = math.log(L) - res.value
    else:
        t0 = shift
        first = evaluate(req.summand.derivative, t0) / evaluate(req.summand.cont_body, t0)
        factor = -math.log(L) + first + res.value
    value = factor * prod.value
    est = abs(prod.value) * res.abs_error_estimate + abs(factor) * prod.abs_error_estimate
    return EvalResult(value, est, res.terms_used + prod.terms_used, res.verdict)


# ---------------------------------------------------------------------------
# Taylor expansions
# ---------------------------------------------------------------------------


def _as_power(node: ExprNode) -> Optional[tuple]:
    """Match f(t) = c * t^(-m); returns (c, m) or None."""
    if isinstance(node, Neg):
        hit = _as_power(node.child)
        return (-hit[0], hit[1]) if hit else None
    if isinstance(node, BinOp) and node.op == "/" and isinstance(node.left, Const):
        c = node.left.value
        den = node.right
        if isinstance(den, Var):
            return (c, 1.0)
        if isinstance(den, BinOp) and den.op == "^" and isinstance(den.left, Var) and isinstance(den.right, Const):
            return (c, den.right.value)
    if isinstance(node, BinOp) and node.op == "^" and isinstance(node.left, Var) and isinstance(node.right, Const):
        if node.right.value < 0:
            return (1.0, -node.right.value)
    return None


def _inner_sums(summand: SummandSpec, base: float, order: int, tol: float, max_terms: int) -> List[float]:
    """inner[j] = sum_{n>=0} f^(j)(n+base) for j = 1..order."""
    power = _as_power(summand.cont_body)
    inner = [0.0] * (order + 1)
    if power is not None:
        c, m = power
        for j in range(1, order + 1):
            # f^(j)(t) = c (-1)^j (m)_j t^(-m-j); the inner sum is a Hurwitz zeta
            inner[j] = c * (-1.0) ** j * pochhammer(m, j, "rising") * hurwitz_zeta(m + j, base)
        return inner
    deriv = summand.cont_body
    for j in range(1, order + 1):
        deriv = differentiate(deriv)
        dfn = compile_expr(deriv)

        def term(k, dfn=dfn):
            return dfn(np.asarray(k, dtype=float) + base)

        res = sum_series(term, tol=tol, max_terms=max_terms)
        if res.verdict == "diverged":
            raise DivergenceError(f"inner derivative series diverged at order {j}")
        inner[j] = evaluate(deriv, base) + res.value
    return inner


def taylor_upper(
    summand: SummandSpec,
    y: float,
    order: int = 12,
    tol: float = 1e-12,
    max_terms: int = 1 << 20,
) -> TaylorExpansion:
    """Expansion of sum_{k=y}^{x} f(k) in x, centered at x = y-1.

    The constant term is zero by the empty-sum rule; coefficient j >= 2 is
    -(1/j!) sum_{n>=0} f^(j)(n+y).
    """
    if order < 1:
        raise EngineError("order must be >= 1")
    inner = _inner_sums(summand, y, order, tol, max_terms)
    coeffs = [0.0] * (order + 1)
    coeffs[1] = summand.limit_L - inner[1]
    fact = 1.0
    for j in range(2, order + 1):
        fact *= j
        coeffs[j] = -inner[j] / fact
    return TaylorExpansion(center=y - 1.0, coefficients=tuple(coeffs), order=order, wrt="upper")


def taylor_lower(
    summand: SummandSpec,
    x: float,
    order: int = 12,
    tol: float = 1e-12,
    max_terms: int = 1 << 20,
) -> TaylorExpansion:
    """Expansion of sum_{k=y}^{x} f(k) in y, centered at y = x+1.

    Derived from the lower-bound derivative: the center value is the empty
    sum (zero) and d^j/dy^j = sum_{n>=0} f^(j)(n+y).
    """
    if order < 1:
        raise EngineError("order must be >= 1")
    base = x + 1.0
    inner = _inner_sums(summand, base, order, tol, max_terms)
    coeffs = [0.0] * (order + 1)
    coeffs[1] = -summand.limit_L + inner[1]
    fact = 1.0
    for j in range(2, order + 1):
        fact *= j
        coeffs[j] = inner[j] / fact
    return TaylorExpansion(center=base, coefficients=tuple(coeffs), order=order, wrt="lower")


# ---------------------------------------------------------------------------
# Integration over a bound
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _segment_integrals(fn, lo: np.ndarray, width: float) -> np.ndarray:
    """Oriented integral of fn over [lo_i, lo_i + width], 20-point Gauss."""
    pts = lo[:, None] + (_GL_NODES[None, :] + 1.0) * (width / 2.0)
    vals = fn(pts.ravel()).reshape(pts.shape)
    return (width / 2.0) * vals @ _GL_WEIGHTS


def integrate_upper(
    summand: SummandSpec,
    y: float,
    a: float,
    x: float,
    tol: float = 1e-10,
    max_terms: int = 1 << 20,
) -> EvalResult:
    """int_a^x sum_{k=y}^{t} f(k) dt via the term-wise integrated series.

    Equals L((x-y+1)^2-(a-y+1)^2)/2
         + sum_{k>=1} ( f(k+y-1)(x-a) - int_{k+a}^{k+x} f ).
    """
    if a == x:
        return EvalResult(0.0, 0.0, 0, "converged")
    fn = summand.fn()
    L = summand.limit_L
    width = x - a

    def term(k):
        ks = np.atleast_1d(np.asarray(k, dtype=float))
        head = fn(ks + (y - 1.0)) * width
        integ = _segment_integrals(fn, ks + a, width)
        out = head - integ
        return out if np.ndim(k) else float(out[0])

    res = sum_series(term, tol=tol, max_terms=max_terms)
    if res.verdict == "diverged":
        raise DivergenceError("integrated series diverged")
    value = L * ((x - y + 1.0) ** 2 - (a - y + 1.0) ** 2) / 2.0 + res.value
    return EvalResult(value, res.abs_error_estimate, res.terms_used, res.verdict)


def integrate_lower(
    summand: SummandSpec,
    x: float,
    a: float,
    y: float,
    tol: float = 1e-10,
    max_terms: int = 1 << 20,
) -> EvalResult:
    """int_a^y sum_{k=t}^{x} f(k) dt via the term-wise integrated series.

    Equals L((x-a+1)^2-(x-y+1)^2)/2
         + sum_{k>=1} ( int_{k+a-1}^{k+y-1} f - f(k+x)(y-a) ).
    """
    if a == y:
        return EvalResult(0.0, 0.0, 0, "converged")
    fn = summand.fn()
    L = summand.limit_L
    width = y - a

    def term(k):
        ks = np.atleast_1d(np.asarray(k, dtype=float))
        integ = _segment_integrals(fn, ks + (a - 1.0), width)
        tail = fn(ks + x) * width
        out = integ - tail
        return out if np.ndim(k) else float(out[0])

    res = sum_series(term, tol=tol, max_terms=max_terms)
    if res.verdict == "diverged":
        raise DivergenceError("integrated series diverged")
    value = L * ((x - a + 1.0) ** 2 - (x - y + 1.0) ** 2) / 2.0 + res.value
    return EvalResult(value, res.abs_error_estimate, res.terms_used, res.verdict)


# ---------------------------------------------------------------------------
# PDE residuals
# ---------------------------------------------------------------------------

PDE_IDS = ("sum-transport", "sum-mixed-zero", "prod-transport", "prod-mixed")

_MIXED_H = 0.05


def _ratio_spec(summand: SummandSpec) -> SummandSpec:
    """Summand f'/f with limit 0 (logarithmic derivative)."""
    body = simplify(BinOp("/", summand.derivative, summand.cont_body))
    return SummandSpec(
        body=body,
        cont_body=body,
        derivative=differentiate(body),
        limit_L=0.0,
        parity_factor=summand.parity_factor,
        monotonic_hint="unknown",
        source=f"(d/dk {summand.source})/({summand.source})" if summand.source else "",
    )


def _cross_difference(fn2: Callable[[float, float], float], x: float, y: float, h: float) -> float:
    """Second mixed partial by Richardson-refined four-point cross differences.

    Two extrapolation levels over step halving remove the h^2 and h^4
    truncation terms; the step stays large enough that series-evaluation
    noise is not amplified.
    """

    def d(step: float) -> float:
        return (
            fn2(x + step, y + step)
            - fn2(x + step, y - step)
            - fn2(x - step, y + step)
            + fn2(x - step, y - step)
        ) / (4.0 * step * step)

    d1, d2, d4 = d(h), d(h / 2.0), d(h / 4.0)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d4 - d2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def pde_residual(
    kind: str,
    summand: SummandSpec,
    x: float,
    y: float,
    tol: float = 1e-12,
) -> float:
    """|LHS - RHS| of one of the differential laws at the point (x, y)."""
    if kind not in PDE_IDS:
        raise EngineError(f"unknown PDE id {kind!r}; expected one of {PDE_IDS}")
    req = FracSumRequest(summand, y, x, tol, 1 << 20)

    if kind == "sum-transport":
        lhs = d_upper(req).value + d_lower(req).value
        rhs = frac_sum(FracSumRequest(derivative_spec(summand), y, x, tol, 1 << 20)).value
        return abs(lhs - rhs)

    if kind == "sum-mixed-zero":
        def S(xx, yy):
            return frac_sum(FracSumRequest(summand, yy, xx, tol, 1 << 20)).value

        return abs(_cross_difference(S, x, y, _MIXED_H))

    if kind == "prod-transport":
        lhs = d_prod(req, "upper").value + d_prod(req, "lower").value
        ratio_sum = frac_sum(FracSumRequest(_ratio_spec(summand), y, x, tol, 1 << 20)).value
        rhs = ratio_sum * frac_prod(req).value
        return abs(lhs - rhs)

    # prod-mixed: P * P_xy = P_x * P_y
    def P(xx, yy):
        return frac_prod(FracSumRequest(summand, yy, xx, tol, 1 << 20)).value

    p = frac_prod(req).value
    p_xy = _cross_difference(P, x, y, _MIXED_H)
    p_x = d_prod(req, "upper").value
    p_y = d_prod(req, "lower").value
    return abs(p * p_xy - p_x * p_y)
