"""Request and response schemas for the HTTP service."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field

Limit = Union[float, Literal["auto"]]


class SummandParams(BaseModel):
    f: str = Field(description="summand expression in the variable k")
    limit: Limit = "auto"
    monotonic: Optional[Literal["increasing", "decreasing"]] = None


class SumRequest(SummandParams):
    y: float = 1.0
    x: float = 0.0
    tol: float = Field(1e-10, gt=0.0)
    max_terms: int = Field(1_000_000, ge=1000)


class ScalarResult(BaseModel):
    value: float
    abs_error_estimate: float
    terms_used: int
    verdict: str


class DerivRequest(SumRequest):
    wrt: Literal["upper", "lower"] = "upper"
    prod: bool = False


class TaylorRequest(SummandParams):
    wrt: Literal["upper", "lower"] = "upper"
    center_bound: float = 1.0
    order: int = Field(12, ge=1, le=40)
    tol: float = Field(1e-12, gt=0.0)
    max_terms: int = Field(1 << 20, ge=1000)


class TaylorResult(BaseModel):
    center: float
    coefficients: Tuple[float, ...]
    order: int
    wrt: str


class IntegrateRequest(SummandParams):
    wrt: Literal["upper", "lower"] = "upper"
    fixed_bound: float = 1.0
    a: float = 0.0
    to: float = 1.0
    tol: float = Field(1e-10, gt=0.0)
    max_terms: int = Field(1 << 20, ge=1000)


class ApproxRequest(SummandParams):
    x_min: float
    x_max: float
    step: float = Field(gt=0.0)
    tol: float = Field(1e-8, gt=0.0)
    max_terms: int = Field(1 << 17, ge=1000)


class ApproxPoint(BaseModel):
    x: float
    f_true: float
    f_approx: float
    abs_err: float


class ApproxResult(BaseModel):
    samples: List[ApproxPoint]


class AntisumRequest(SummandParams):
    F: str = Field(description="antiderivative expression in k")
    y: float = 1.0
    x: float = 0.0
    route: Literal["upper", "lower"] = "upper"
    tol: float = Field(1e-10, gt=0.0)


class FaulhaberRequest(BaseModel):
    coeffs: Optional[List[float]] = None
    f: Optional[str] = None
    taylor_order: int = Field(30, ge=0, le=200)
    center: float = 0.0
    y: float = 1.0
    x: float = 0.0
    tol: float = Field(1e-12, gt=0.0)


class RootsRequest(BaseModel):
    n_max: int = Field(ge=1, le=200)


class RootPoint(BaseModel):
    index_n: int
    location: float
    residual: float


class RootsResult(BaseModel):
    offset_limit: float
    roots: List[RootPoint]


class CheckRequest(SummandParams):
    property: str
    y: float = 1.0
    x: float = 0.0
    c: Optional[float] = None
    tol: float = Field(1e-10, gt=0.0)
    max_terms: int = Field(1_000_000, ge=1000)


class CheckResult(BaseModel):
    property: str
    residual: float


class ConstantEntry(BaseModel):
    name: str
    value: float
    description: str


class ConstantsResult(BaseModel):
    constants: List[ConstantEntry]


class ErrorBody(BaseModel):
    error: str
    message: str
