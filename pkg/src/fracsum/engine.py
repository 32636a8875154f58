"""Numerical evaluation of infinite series and definite integrals.

Series are summed in doubling blocks with compensated accumulation.
Alternating series go through the Cohen-Rodriguez Villegas-Zagier
Chebyshev acceleration; smooth monotone-tail series are extrapolated by
Richardson on partial sums at power-of-two checkpoints.  Everything is
deterministic: identical inputs give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "EngineError",
    "DivergenceError",
    "IntegrationError",
    "EvalResult",
    "kahan_sum",
    "sum_series",
    "integrate",
    "bracket_check",
]


class EngineError(Exception):
    """Base class for evaluation-engine failures."""


class DivergenceError(EngineError):
    """Series term magnitudes keep growing."""


class IntegrationError(EngineError):
    """Quadrature hit a non-finite sample or the subdivision limit."""


@dataclass(frozen=True)
class EvalResult:
    """A numeric value with an error estimate and diagnostics."""

    value: float
    abs_error_estimate: float
    terms_used: int
    verdict: str  # converged / accelerated / budget-exhausted / diverged


def kahan_sum(values: Sequence[float]) -> float:
    """Compensated (Kahan) summation of an iterable of floats."""
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


# ---------------------------------------------------------------------------
# Series summation
# ---------------------------------------------------------------------------


def _vectorized(term: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt *term* so it maps float arrays to float arrays."""
    state = {"scalar": False}

    def call(ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        if state["scalar"]:
            return np.array([float(term(float(k))) for k in ks])
        try:
            out = np.asarray(term(ks), dtype=float)
        except (TypeError, ValueError):
            state["scalar"] = True
            return call(ks)
        if out.shape != ks.shape:
            out = np.broadcast_to(out, ks.shape).copy()
        return out

    return call


_CVZ_N = 72
_CVZ_N_CHECK = 56


def _cvz(a: np.ndarray, n: int) -> float:
    """Chebyshev-accelerated value of sum_{j>=0} (-1)^j a_j from a_0..a_{n-1}."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    s = 0.0
    for j in range(n):
        c = b - c
        s += c * a[j]
        b = (j + n) * (j - n) * b / ((j + 0.5) * (j + 1.0))
    return s / d


def _richardson(rows: Sequence[float], max_cols: int = 8) -> list[float]:
    """Diagonal of the Richardson table for checkpoints n, 2n, 4n, ...

    Models s_n = S + c1/n + c2/n^2 + ...; each column removes one power.
    Returns the table diagonal (best extrapolant last).
    """
    table = [list(rows)]
    cols = min(max_cols, len(rows) - 1)
    for m in range(1, cols + 1):
        prev = table[-1]
        fac = 2.0 ** m
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    return [col[-1] for col in table]


def sum_series(
    term: Callable,
    tol: float = 1e-10,
    max_terms: int = 1_000_000,
    start: int = 1,
) -> EvalResult:
    """Estimate sum_{k>=start} term(k).

    Alternating tails are accelerated with CVZ weights; smooth one-signed
    tails by Richardson extrapolation on power-of-two partial sums.  A
    series whose term magnitudes grow for 50 consecutive indices is
    reported as diverged (no exception; callers decide).
    """
    if tol <= 0:
        raise EngineError("tol must be positive")
    fterm = _vectorized(term)

    probe = fterm(np.arange(start, start + 16, dtype=float))
    if not np.all(np.isfinite(probe)):
        raise EngineError("non-finite series term among the first 16")

    if np.all(probe != 0.0) and np.all(probe[:-1] * probe[1:] < 0.0):
        result = _sum_alternating(fterm, start, tol)
        if result is not None:
            return result
    return _sum_general(fterm, start, tol, max_terms)


def _sum_alternating(fterm, start: int, tol: float) -> EvalResult | None:
    head_n = 32
    total_n = head_n + _CVZ_N
    vals = fterm(np.arange(start, start + total_n, dtype=float))
    if not np.all(np.isfinite(vals)):
        raise EngineError("non-finite series term")
    rem = vals[head_n:]
    if np.any(rem == 0.0) or not np.all(rem[:-1] * rem[1:] < 0.0):
        return None  # alternation broke down; use the general path
    head = math.fsum(vals[:head_n])
    sigma = 1.0 if rem[0] > 0 else -1.0
    mags = np.abs(rem)
    s_full = sigma * _cvz(mags, _CVZ_N)
    s_check = sigma * _cvz(mags[:_CVZ_N_CHECK], _CVZ_N_CHECK)
    value = head + s_full
    est = abs(s_full - s_check) + 4e-16 * (1.0 + abs(value))
    verdict = "accelerated" if est <= tol else "budget-exhausted"
    return EvalResult(value, est, total_n, verdict)


def _sum_general(fterm, start: int, tol: float, max_terms: int) -> EvalResult:
    block_sums: list[float] = []
    checkpoints: list[tuple[int, float]] = []  # (terms, partial sum)
    n_done = 0
    next_n = 16
    grow_run = 0
    prev_last_mag = None
    smooth = True
    prev_extrap = None
    best = None

    while n_done < max_terms:
        n_target = min(next_n, max_terms)
        ks = np.arange(start + n_done, start + n_target, dtype=float)
        vals = fterm(ks)
        if not np.all(np.isfinite(vals)):
            raise EngineError(f"non-finite series term near index {start + n_done}")
        block_sums.append(float(np.sum(vals)))
        mags = np.abs(vals)

        # divergence: magnitudes growing for 50 consecutive indices
        growing = mags[1:] > mags[:-1]
        if prev_last_mag is not None and mags[0] > prev_last_mag:
            growing = np.concatenate(([True], growing))
        run = grow_run
        max_run = run
        for g in growing:
            run = run + 1 if g else 0
            max_run = max(max_run, run)
        grow_run = run
        prev_last_mag = float(mags[-1])
        if max_run >= 50 and prev_last_mag > tol:
            return EvalResult(math.fsum(block_sums), float("inf"), n_target, "diverged")

        if smooth:
            one_signed = np.all(vals >= 0.0) or np.all(vals <= 0.0)
            non_increasing = np.all(mags[1:] <= mags[:-1] * (1.0 + 1e-12))
            if not (one_signed and non_increasing):
                smooth = False

        clipped = n_target != next_n
        n_done = n_target
        partial = math.fsum(block_sums)
        if not clipped:
            # power-of-two checkpoints only; Richardson assumes ratio-2 spacing
            checkpoints.append((n_done, partial))

        # plain geometric tail bound
        tail = np.abs(vals[-16:]) if len(vals) >= 16 else mags
        ratios = tail[1:] / np.where(tail[:-1] == 0.0, 1.0, tail[:-1])
        last_mag = float(tail[-1])
        if last_mag == 0.0:
            return EvalResult(partial, 0.0, n_done, "converged")
        r = float(np.max(ratios)) if len(ratios) else 1.0
        if 0.0 < r < 0.95:
            bound = last_mag * r / (1.0 - r)
            if bound <= tol:
                return EvalResult(partial, bound, n_done, "converged")

        # Richardson extrapolation on the power-of-two partial sums; only
        # after a fresh checkpoint, or the unchanged extrapolant would
        # masquerade as converged
        if smooth and not clipped and n_done >= 256:
            rows = [s for (n, s) in checkpoints if n >= 64]
            if len(rows) >= 3:
                diag = _richardson(rows)
                extrap = diag[-1]
                if prev_extrap is not None:
                    est = abs(extrap - prev_extrap) + 4e-16 * (1.0 + abs(extrap))
                    if best is None or est < best[1]:
                        best = (extrap, est, n_done)
                    if est <= max(tol / 2.0, 4e-16 * (1.0 + abs(extrap))):
                        return EvalResult(extrap, est, n_done, "accelerated")
                prev_extrap = extrap

        next_n *= 2

    partial = math.fsum(block_sums)
    if best is not None:
        value, est, terms = best
        verdict = "accelerated" if est <= tol else "budget-exhausted"
        return EvalResult(value, est, n_done, verdict)
    # irregular tail (e.g. oscillatory non-alternating): crude bound
    est = float(np.mean(np.abs(fterm(np.arange(start + n_done - 16, start + n_done, dtype=float))))) * 50.0
    verdict = "converged" if est <= tol else "budget-exhausted"
    return EvalResult(partial, est, n_done, verdict)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def integrate(
    g: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> EvalResult:
    """Adaptive Simpson quadrature with |error| <= tol*(1+|value|)."""
    if tol <= 0:
        raise EngineError("tol must be positive")
    if a == b:
        return EvalResult(0.0, 0.0, 0, "converged")
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    evals = {"n": 0}

    def f(x: float) -> float:
        evals["n"] += 1
        v = float(g(x))
        if not math.isfinite(v):
            raise IntegrationError(f"non-finite sample at x={x}")
        return v

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = simpson(a, b, fa, fm, fb)
    abstol = tol * (1.0 + abs(whole))

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        if depth > max_depth:
            raise IntegrationError("subdivision limit reached")
        xm = 0.5 * (x0 + x2)
        lm = 0.5 * (x0 + xm)
        rm = 0.5 * (xm + x2)
        flm, frm = f(lm), f(rm)
        left = simpson(x0, xm, f0, flm, f1)
        right = simpson(xm, x2, f1, frm, f2)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(x0, xm, f0, flm, f1, left, eps / 2.0, depth + 1)
        rv, re = recurse(xm, x2, f1, frm, f2, right, eps / 2.0, depth + 1)
        return lv + rv, le + re

    value, err = recurse(a, b, fa, fm, fb, whole, abstol, 0)
    return EvalResult(sign * value, err, evals["n"], "converged")


# ---------------------------------------------------------------------------
# Bracketing convergence certificate
# ---------------------------------------------------------------------------


def bracket_check(summand, x: float, tol: float = 1e-9) -> bool:
    """Check the floor/ceil bracketing of the continuation series.

    For monotone f the series value at fractional x must lie between the
    values at floor(x) and ceil(x) (direction by monotonicity).  Requires
    a known monotonicity hint.
    """
    if summand.monotonic_hint == "unknown":
        raise EngineError("bracket_check requires a known monotonicity hint")
    fn = summand.fn()

    def series_at(v: float) -> float:
        res = sum_series(lambda k: fn(k) - fn(k + v), tol=tol, max_terms=1 << 20)
        if res.verdict == "diverged":
            raise DivergenceError("bracketing series diverged")
        if res.abs_error_estimate > 100.0 * tol:
            # an unconverged probe cannot certify anything
            raise DivergenceError("bracketing series did not converge")
        return res.value

    lo, hi = math.floor(x), math.ceil(x)
    s_lo, s_mid, s_hi = series_at(float(lo)), series_at(x), series_at(float(hi))
    slack = 10.0 * tol
    if summand.monotonic_hint == "decreasing":
        return s_lo - slack <= s_mid <= s_hi + slack
    return s_hi - slack <= s_mid <= s_lo + slack
