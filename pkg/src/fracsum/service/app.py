"""FastAPI application wrapping the fractional-sum library."""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..calculus import (
    PDE_IDS,
    d_lower,
    d_prod,
    d_upper,
    integrate_lower,
    integrate_upper,
    pde_residual,
    taylor_lower,
    taylor_upper,
)
from ..continuations import ROOT_OFFSET, alt_harmonic_roots
from ..core import PROPERTY_IDS, FracSumRequest, check_property, frac_prod, frac_sum
from ..engine import EngineError, EvalResult
from ..expr import (
    Const,
    DomainError,
    ExprError,
    LimitEstimationError,
    NonDifferentiableError,
    ParseError,
    differentiate,
    evaluate,
    make_summand,
    parse,
    simplify,
)
from ..extensions import (
    PowerSeriesSpec,
    em_approx_curve,
    faulhaber_sum,
    sum_antiderivative,
    sum_antiderivative_lower,
)
from ..special import EULER_GAMMA, SpecialFunctionError, riemann_zeta
from . import models


def _spec(params: models.SummandParams):
    limit = params.limit if params.limit == "auto" else float(params.limit)
    return make_summand(params.f, limit=limit, monotonic=params.monotonic)


def _scalar(res: EvalResult) -> models.ScalarResult:
    return models.ScalarResult(
        value=res.value,
        abs_error_estimate=res.abs_error_estimate,
        terms_used=res.terms_used,
        verdict=res.verdict,
    )


def _taylor_coefficients(source: str, center: float, order: int):
    """c_j = f^(j)(center)/j! by repeated symbolic differentiation."""
    node = simplify(parse(source))
    coeffs = []
    fact = 1.0
    for j in range(order + 1):
        if j > 0:
            fact *= j
            node = simplify(differentiate(node))
        if isinstance(node, Const) and node.value == 0.0 and j > 0:
            coeffs.extend([0.0] * (order + 1 - j))
            break
        coeffs.append(evaluate(node, center) / fact)
    return coeffs


_ERROR_CODES = {
    ParseError: "parse-error",
    DomainError: "domain-error",
    NonDifferentiableError: "non-differentiable",
    LimitEstimationError: "limit-estimation-failed",
    SpecialFunctionError: "special-function-domain",
}


def create_app() -> FastAPI:
    app = FastAPI(title="fracsum", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "usage", "message": str(exc.errors())},
        )

    @app.exception_handler(ParseError)
    async def _parse_handler(request: Request, exc: ParseError):
        return JSONResponse(
            status_code=400,
            content={"error": "parse-error", "message": str(exc)},
        )

    @app.exception_handler(ExprError)
    async def _expr_handler(request: Request, exc: ExprError):
        code = _ERROR_CODES.get(type(exc), "expression-error")
        return JSONResponse(status_code=422, content={"error": code, "message": str(exc)})

    @app.exception_handler(EngineError)
    async def _engine_handler(request: Request, exc: EngineError):
        name = type(exc).__name__
        code = {
            "DivergenceError": "divergence",
            "IntegrationError": "integration-failed",
        }.get(name, "engine-error")
        return JSONResponse(status_code=422, content={"error": code, "message": str(exc)})

    @app.exception_handler(SpecialFunctionError)
    async def _special_handler(request: Request, exc: SpecialFunctionError):
        return JSONResponse(
            status_code=422,
            content={"error": "special-function-domain", "message": str(exc)},
        )

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/sum", response_model=models.ScalarResult)
    async def sum_endpoint(body: models.SumRequest):
        req = FracSumRequest(_spec(body), body.y, body.x, body.tol, body.max_terms)
        return _scalar(frac_sum(req))

    @app.post("/prod", response_model=models.ScalarResult)
    async def prod_endpoint(body: models.SumRequest):
        req = FracSumRequest(_spec(body), body.y, body.x, body.tol, body.max_terms)
        return _scalar(frac_prod(req))

    @app.post("/deriv", response_model=models.ScalarResult)
    async def deriv_endpoint(body: models.DerivRequest):
        req = FracSumRequest(_spec(body), body.y, body.x, body.tol, body.max_terms)
        if body.prod:
            return _scalar(d_prod(req, body.wrt))
        fn = d_upper if body.wrt == "upper" else d_lower
        return _scalar(fn(req))

    @app.post("/taylor", response_model=models.TaylorResult)
    async def taylor_endpoint(body: models.TaylorRequest):
        spec = _spec(body)
        fn = taylor_upper if body.wrt == "upper" else taylor_lower
        exp = fn(spec, body.center_bound, body.order, body.tol, body.max_terms)
        return models.TaylorResult(
            center=exp.center,
            coefficients=exp.coefficients,
            order=exp.order,
            wrt=exp.wrt,
        )

    @app.post("/integrate", response_model=models.ScalarResult)
    async def integrate_endpoint(body: models.IntegrateRequest):
        spec = _spec(body)
        if body.wrt == "upper":
            res = integrate_upper(spec, body.fixed_bound, body.a, body.to, body.tol, body.max_terms)
        else:
            res = integrate_lower(spec, body.fixed_bound, body.a, body.to, body.tol, body.max_terms)
        return _scalar(res)

    @app.post("/approx", response_model=models.ApproxResult)
    async def approx_endpoint(body: models.ApproxRequest):
        samples = em_approx_curve(
            _spec(body), body.x_min, body.x_max, body.step, body.tol, body.max_terms
        )
        return models.ApproxResult(
            samples=[
                models.ApproxPoint(
                    x=s.x, f_true=s.f_true, f_approx=s.f_approx, abs_err=s.abs_err
                )
                for s in samples
            ]
        )

    @app.post("/antisum", response_model=models.ScalarResult)
    async def antisum_endpoint(body: models.AntisumRequest):
        spec = _spec(body)
        anti = make_summand(body.F, limit=0.0)
        fn = sum_antiderivative if body.route == "upper" else sum_antiderivative_lower
        return _scalar(fn(spec, anti, body.y, body.x, tol=body.tol))

    @app.post("/faulhaber", response_model=models.ScalarResult)
    async def faulhaber_endpoint(body: models.FaulhaberRequest):
        if (body.coeffs is None) == (body.f is None):
            return JSONResponse(
                status_code=400,
                content={
                    "error": "usage",
                    "message": "provide exactly one of coeffs or f",
                },
            )
        if body.coeffs is not None:
            coeffs = list(body.coeffs)
        else:
            coeffs = _taylor_coefficients(body.f, body.center, body.taylor_order)
        series = PowerSeriesSpec(
            center_a=body.center,
            coefficients=tuple(coeffs),
            truncation_J=len(coeffs) - 1,
        )
        return _scalar(faulhaber_sum(series, body.y, body.x, tol=body.tol))

    @app.post("/roots", response_model=models.RootsResult)
    async def roots_endpoint(body: models.RootsRequest):
        roots = alt_harmonic_roots(body.n_max)
        return models.RootsResult(
            offset_limit=ROOT_OFFSET,
            roots=[
                models.RootPoint(index_n=r.index_n, location=r.location, residual=r.residual)
                for r in roots
            ],
        )

    @app.post("/check", response_model=models.CheckResult)
    async def check_endpoint(body: models.CheckRequest):
        spec = _spec(body)
        if body.property in PDE_IDS:
            residual = pde_residual(body.property, spec, body.x, body.y, min(body.tol, 1e-12))
        elif body.property in PROPERTY_IDS:
            req = FracSumRequest(spec, body.y, body.x, body.tol, body.max_terms)
            residual = check_property(body.property, req, aux=body.c)
        else:
            return JSONResponse(
                status_code=400,
                content={
                    "error": "usage",
                    "message": f"unknown property {body.property!r}; "
                    f"expected one of {PROPERTY_IDS + PDE_IDS}",
                },
            )
        return models.CheckResult(property=body.property, residual=residual)

    @app.get("/constants", response_model=models.ConstantsResult)
    async def constants_endpoint():
        entries = [
            models.ConstantEntry(
                name="euler_gamma",
                value=EULER_GAMMA,
                description="Euler-Mascheroni constant; equals the integral of "
                "the harmonic continuation H_t over [0, 1]",
            ),
            models.ConstantEntry(
                name="root_offset",
                value=ROOT_OFFSET,
                description="arctan(pi/ln 2)/pi; limiting distance between the "
                "n-th negative-axis root of the alternating harmonic "
                "continuation and -n",
            ),
            models.ConstantEntry(
                name="ln2",
                value=math.log(2.0),
                description="limit of the alternating harmonic numbers",
            ),
            models.ConstantEntry(
                name="zeta2",
                value=riemann_zeta(2.0),
                description="zeta(2) = pi^2/6; first coefficient magnitude in "
                "the harmonic-number expansion",
            ),
        ]
        return models.ConstantsResult(constants=entries)

    return app
