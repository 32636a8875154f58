"""fracsum: sums and products with non-integer real bounds.

Evaluates the continuation
sum_{k=y}^{x} f(k) = L(x-y+1) + sum_{k>=1} (f(k+y-1) - f(k+x))
and the calculus built on it: bound derivatives, Taylor expansions,
integrals over a bound, closed-form harmonic-type continuations, an
Euler-Maclaurin function approximation and antiderivative summation.
"""

from .calculus import (
    TaylorExpansion,
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
from .continuations import (
    AltHarmonicRoot,
    ROOT_OFFSET,
    alt_harmonic,
    alt_harmonic_reflection_residual,
    alt_harmonic_roots,
    alt_harmonic_series,
    gen_harmonic,
    harmonic,
    harmonic_digamma,
    zeta_series_identity,
)
from .core import FracSumRequest, check_property, frac_prod, frac_sum
from .engine import (
    DivergenceError,
    EngineError,
    EvalResult,
    IntegrationError,
    bracket_check,
    integrate,
    kahan_sum,
    sum_series,
)
from .expr import (
    DomainError,
    ExprError,
    LimitEstimationError,
    NonDifferentiableError,
    ParseError,
    SummandSpec,
    compile_expr,
    differentiate,
    evaluate,
    make_summand,
    parse,
    to_source,
)
from .extensions import (
    ApproxSample,
    PowerSeriesSpec,
    curve_to_csv,
    em_approx_curve,
    em_approximation,
    faulhaber_sum,
    sum_antiderivative,
    sum_antiderivative_lower,
)
from .special import (
    BernoulliTable,
    EULER_GAMMA,
    SpecialFunctionError,
    bernoulli_numbers,
    digamma,
    euler_gamma,
    hurwitz_zeta,
    pochhammer,
    riemann_zeta,
)

__version__ = "0.1.0"
