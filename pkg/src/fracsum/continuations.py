"""Closed-form continuations of harmonic-type partial sums.

Harmonic numbers from the classic series, generalized harmonic numbers
through the Hurwitz zeta function, alternating harmonic numbers through
the digamma closed form, the reflection identity, the negative-axis root
asymptotics, and the averaged zeta series for the integral of H_x^(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .engine import EngineError, sum_series
from .special import EULER_GAMMA, SpecialFunctionError, digamma, hurwitz_zeta, riemann_zeta

__all__ = [
    "AltHarmonicRoot",
    "ROOT_OFFSET",
    "harmonic",
    "gen_harmonic",
    "alt_harmonic",
    "alt_harmonic_series",
    "alt_harmonic_reflection_residual",
    "alt_harmonic_roots",
    "zeta_series_identity",
]

LN2 = math.log(2.0)

# limit of the distance between the n-th root of the alternating harmonic
# continuation and -n: (1/pi) arctan(pi / ln 2)
ROOT_OFFSET = math.atan(math.pi / LN2) / math.pi


@dataclass(frozen=True)
class AltHarmonicRoot:
    index_n: int
    location: float
    residual: float


def harmonic(x: float) -> float:
    """H_x = sum_{k>=1} x/(k(k+x)) for real x (poles at negative integers)."""
    if x <= -1 and x == round(x):
        raise SpecialFunctionError(f"harmonic continuation has a pole at {x}")
    if x == 0.0:
        return 0.0

    def term(k):
        k = np.asarray(k, dtype=float)
        return x / (k * (k + x))

    res = sum_series(term, tol=1e-13, max_terms=1 << 20)
    return res.value


def gen_harmonic(x: float, m: float) -> float:
    """H_x^(m) = zeta(m) - zeta(m, x) + x^(-m) for m > 1, x > 0."""
    if not m > 1:
        raise SpecialFunctionError(f"gen_harmonic requires m > 1, got {m}")
    if not x > 0:
        raise SpecialFunctionError(f"gen_harmonic requires x > 0, got {x}")
    return riemann_zeta(m) - hurwitz_zeta(m, x) + x ** (-m)


def alt_harmonic(x: float) -> float:
    """Alternating harmonic continuation.

    ln 2 + cos(pi x) (  (psi((x+1)/2) - psi(x/2))/2 - 1/x ), with the value
    0 at x = 0 and poles at the non-positive even/odd integer digamma poles.
    """
    if x == 0.0:
        return 0.0
    if x < 0 and x == round(x):
        raise SpecialFunctionError(f"alternating harmonic pole at {x}")
    inner = 0.5 * (digamma((x + 1.0) / 2.0) - digamma(x / 2.0)) - 1.0 / x
    return LN2 + math.cos(math.pi * x) * inner


def alt_harmonic_series(x: float, tol: float = 1e-12) -> float:
    """Series form ln2 + cos(pi x) sum_{k>=1} (-1)^k/(k+x); test oracle."""
    if x == 0.0:
        return 0.0

    def term(k):
        k = np.asarray(k, dtype=float)
        return np.cos(math.pi * k) / (k + x)

    res = sum_series(term, tol=tol, max_terms=1 << 20)
    return LN2 + math.cos(math.pi * x) * res.value


def alt_harmonic_reflection_residual(x: float) -> float:
    """|H-bar(x) - H-bar(2-x) - (pi cot(pi x) - cos(pi x)(x^2-2x+2)/(x(x^2-3x+2)))|."""
    if x == round(x):
        raise SpecialFunctionError(f"reflection identity has a pole at {x}")
    lhs = alt_harmonic(x) - alt_harmonic(2.0 - x)
    cot = math.cos(math.pi * x) / math.sin(math.pi * x)
    rhs = math.pi * cot - math.cos(math.pi * x) * (x * x - 2.0 * x + 2.0) / (
        x * (x * x - 3.0 * x + 2.0)
    )
    return abs(lhs - rhs)


def alt_harmonic_roots(n_max: int, scan_step: float = 0.01) -> List[AltHarmonicRoot]:
    """Bracket and bisect the root of the continuation in each (-n-1, -n)."""
    if n_max < 1:
        raise EngineError("n_max must be >= 1")
    roots: List[AltHarmonicRoot] = []
    for n in range(1, n_max + 1):
        lo_edge = -float(n) - 1.0 + 0.5 * scan_step
        hi_edge = -float(n) - 0.5 * scan_step
        grid = np.arange(lo_edge, hi_edge + scan_step / 2.0, scan_step)
        vals = [alt_harmonic(float(t)) for t in grid]
        bracket = None
        for i in range(len(vals) - 1):
            if vals[i] == 0.0:
                bracket = (float(grid[i]), float(grid[i]))
                break
            if vals[i] * vals[i + 1] < 0.0:
                bracket = (float(grid[i]), float(grid[i + 1]))
                break
        if bracket is None:
            raise EngineError(f"no sign change of the continuation found in (-{n + 1}, -{n})")
        a, b = bracket
        fa = alt_harmonic(a)
        while b - a > 1e-12:
            mid = 0.5 * (a + b)
            fm = alt_harmonic(mid)
            if fm == 0.0:
                a = b = mid
                break
            if fa * fm < 0.0:
                b = mid
            else:
                a, fa = mid, fm
        loc = 0.5 * (a + b)
        roots.append(AltHarmonicRoot(index_n=n, location=loc, residual=abs(alt_harmonic(loc))))
    return roots


def zeta_series_identity(m: int, terms: int) -> float:
    """Stabilized value of sum_{n>=2} (-1)^n [(m+n-2)!/(m-1)!] zeta(m+n-1)/n!.

    The coefficient is the rising factorial (m)_{n-1}, the reading under
    which the series is the term-wise integral of the H_x^(m) expansion
    over [0, 1].  The raw partial sums oscillate (the expansion is summed
    on the boundary of its disk of convergence), so repeated adjacent
    averaging (Euler transform) is applied; the stabilized value converges
    to zeta(m) - 1/(m-1), the integral of H_x^(m) over [0, 1].
    """
    if m < 2:
        raise EngineError("m must be an integer >= 2")
    if terms < 2:
        return 0.0
    partials: List[float] = []
    acc = 0.0
    coeff = 1.0  # (m)_{n-1} rising, maintained incrementally; n=2 -> m
    fact = 1.0  # n!
    for n in range(2, terms + 1):
        if n == 2:
            coeff = float(m)
            fact = 2.0
        else:
            coeff *= m + n - 2
            fact *= n
        acc += (-1.0) ** n * coeff * riemann_zeta(float(m + n - 1)) / fact
        partials.append(acc)
    seq = partials
    for _ in range(2 * m + 4):
        if len(seq) < 4 or abs(seq[-1] - seq[-2]) < 1e-14 * (1.0 + abs(seq[-1])):
            break
        seq = [(seq[i] + seq[i + 1]) / 2.0 for i in range(len(seq) - 1)]
    return seq[-1]


def harmonic_digamma(x: float) -> float:
    """Independent route H_x = psi(x+1) + gamma; used as a cross-check."""
    return digamma(x + 1.0) + EULER_GAMMA
