"""Command-line frontend.

Every subcommand builds a JSON request and posts it to the HTTP service,
by default an in-process instance of the FastAPI application, so the CLI
and a remote deployment behave identically.  Exit codes: 0 success,
1 evaluation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

__all__ = ["main", "run"]

_SCALAR_COMMANDS = ("sum", "prod", "deriv", "integrate", "antisum", "faulhaber")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsum",
        description="Sums and products with non-integer real bounds.",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_bounds=True):
        p.add_argument("--f", required=True, help="summand expression in k")
        p.add_argument(
            "--limit",
            required=True,
            help="limit L of f(k) as k grows, or 'auto' to estimate it",
        )
        p.add_argument("--monotonic", choices=["increasing", "decreasing"])
        if with_bounds:
            p.add_argument("--from", dest="lower", type=float, default=1.0, help="lower bound y")
            p.add_argument("--to", dest="upper", type=float, default=0.0, help="upper bound x")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-terms", type=int, default=None)
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--output", help="write the result to this file instead of stdout")

    p = sub.add_parser("sum", help="evaluate sum_{k=y}^{x} f(k)")
    add_common(p)

    p = sub.add_parser("prod", help="evaluate prod_{k=y}^{x} f(k)")
    add_common(p)

    p = sub.add_parser("deriv", help="derivative of the sum (or product) in one bound")
    add_common(p)
    p.add_argument("--wrt", choices=["upper", "lower"], default="upper")
    p.add_argument("--prod", action="store_true", help="differentiate the product instead")

    p = sub.add_parser("taylor", help="Taylor expansion of the sum in one bound")
    add_common(p, with_bounds=False)
    p.add_argument("--wrt", choices=["upper", "lower"], default="upper")
    p.add_argument("--center", type=float, default=1.0, help="the fixed other bound")
    p.add_argument("--order", type=int, default=12)

    p = sub.add_parser("integrate", help="integrate the sum over one bound")
    add_common(p)
    p.add_argument("--wrt", choices=["upper", "lower"], default="upper")
    p.add_argument("--a", type=float, required=True, help="integration start point")

    p = sub.add_parser("approx", help="derivative-series approximation of f on a grid")
    add_common(p, with_bounds=False)
    p.add_argument("--grid", required=True, help="min:max:step, inclusive")

    p = sub.add_parser("antisum", help="sum an antiderivative F of f over real bounds")
    add_common(p)
    p.add_argument("--F", required=True, dest="anti", help="antiderivative expression in k")
    p.add_argument("--route", choices=["upper", "lower"], default="upper")

    p = sub.add_parser("faulhaber", help="continue the sum through the power series of f")
    p.add_argument("--coeffs", help="comma-separated power-series coefficients c_0,c_1,...")
    p.add_argument("--f", help="expression to expand instead of explicit coefficients")
    p.add_argument("--taylor-order", type=int, default=30)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--from", dest="lower", type=float, default=1.0)
    p.add_argument("--to", dest="upper", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--output")

    p = sub.add_parser("roots", help="negative-axis roots of the alternating harmonic continuation")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--output")

    p = sub.add_parser("check", help="residual of an algebraic or differential law")
    add_common(p)
    p.add_argument("--property", required=True, dest="prop")
    p.add_argument("--c", type=float, default=None, help="split point for the split laws")

    p = sub.add_parser("constants", help="print the package's named constants")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--output")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8723)

    return parser


class _UsageError(Exception):
    pass


def _parse_limit(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise _UsageError("--limit must be a number or 'auto'")


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError("--grid must be min:max:step")
    try:
        return float(parts[0]), float(parts[1]), float(parts[2])
    except ValueError:
        raise _UsageError("--grid must be numeric min:max:step")


def _client(server: Optional[str]):
    import httpx

    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _summand_payload(args) -> dict:
    payload = {"f": args.f, "limit": _parse_limit(args.limit)}
    if getattr(args, "monotonic", None):
        payload["monotonic"] = args.monotonic
    return payload


def _maybe(payload: dict, args, field: str, key: str) -> None:
    value = getattr(args, field, None)
    if value is not None:
        payload[key] = value


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(resp, fmt: str, output: Optional[str]) -> int:
    try:
        body = resp.json()
    except ValueError:
        body = {"error": "http", "message": resp.text}
    if fmt == "json":
        _emit(json.dumps(body) + "\n", output)
    else:
        print(f"error [{body.get('error')}]: {body.get('message')}", file=sys.stderr)
    return 2 if resp.status_code == 400 else 1


def _scalar_text(body: dict) -> str:
    return "%.15g\n" % body["value"]


def _format_scalar(body: dict, fmt: str) -> str:
    if fmt == "json":
        keys = ("value", "abs_error_estimate", "terms_used", "verdict")
        return json.dumps({k: body[k] for k in keys}) + "\n"
    return _scalar_text(body)


def run(argv: List[str]) -> int:
    try:
        return _run(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(argv: List[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")
    output = getattr(args, "output", None)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    if fmt == "csv" and args.command not in ("approx", "roots", "constants"):
        print("error: csv output is only available for approx, roots and constants", file=sys.stderr)
        return 2

    with _client(args.server) as client:
        if args.command in ("sum", "prod"):
            payload = _summand_payload(args)
            payload.update({"y": args.lower, "x": args.upper})
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post(f"/{args.command}", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            _emit(_format_scalar(resp.json(), fmt), output)
            return 0

        if args.command == "deriv":
            payload = _summand_payload(args)
            payload.update({"y": args.lower, "x": args.upper, "wrt": args.wrt, "prod": args.prod})
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post("/deriv", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            _emit(_format_scalar(resp.json(), fmt), output)
            return 0

        if args.command == "taylor":
            payload = _summand_payload(args)
            payload.update({"wrt": args.wrt, "center_bound": args.center, "order": args.order})
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post("/taylor", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            body = resp.json()
            if fmt == "json":
                _emit(json.dumps(body) + "\n", output)
            else:
                lines = ["center %.15g (wrt %s)" % (body["center"], body["wrt"])]
                for j, c in enumerate(body["coefficients"]):
                    lines.append("c_%d %.15g" % (j, c))
                _emit("\n".join(lines) + "\n", output)
            return 0

        if args.command == "integrate":
            payload = _summand_payload(args)
            if args.wrt == "upper":
                payload.update({"fixed_bound": args.lower, "a": args.a, "to": args.upper})
            else:
                payload.update({"fixed_bound": args.upper, "a": args.a, "to": args.lower})
            payload["wrt"] = args.wrt
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post("/integrate", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            _emit(_format_scalar(resp.json(), fmt), output)
            return 0

        if args.command == "approx":
            x_min, x_max, step = _parse_grid(args.grid)
            payload = _summand_payload(args)
            payload.update({"x_min": x_min, "x_max": x_max, "step": step})
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post("/approx", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            samples = resp.json()["samples"]
            if fmt == "json":
                _emit(json.dumps(samples) + "\n", output)
            elif fmt == "csv":
                lines = ["x,f_true,f_approx,abs_err"]
                for s in samples:
                    lines.append(
                        "%.17g,%.17g,%.17g,%.17g"
                        % (s["x"], s["f_true"], s["f_approx"], s["abs_err"])
                    )
                _emit("\n".join(lines) + "\n", output)
            else:
                lines = [
                    "%.15g %.15g %.15g %.15g"
                    % (s["x"], s["f_true"], s["f_approx"], s["abs_err"])
                    for s in samples
                ]
                _emit("\n".join(lines) + "\n", output)
            return 0

        if args.command == "antisum":
            payload = _summand_payload(args)
            payload.update(
                {"F": args.anti, "y": args.lower, "x": args.upper, "route": args.route}
            )
            _maybe(payload, args, "tol", "tol")
            resp = client.post("/antisum", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            _emit(_format_scalar(resp.json(), fmt), output)
            return 0

        if args.command == "faulhaber":
            if (args.coeffs is None) == (args.f is None):
                print("error: provide exactly one of --coeffs or --f", file=sys.stderr)
                return 2
            payload = {
                "center": args.center,
                "y": args.lower,
                "x": args.upper,
                "taylor_order": args.taylor_order,
            }
            if args.coeffs is not None:
                try:
                    payload["coeffs"] = [float(t) for t in args.coeffs.split(",")]
                except ValueError:
                    print("error: --coeffs must be comma-separated numbers", file=sys.stderr)
                    return 2
            else:
                payload["f"] = args.f
            _maybe(payload, args, "tol", "tol")
            resp = client.post("/faulhaber", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            _emit(_format_scalar(resp.json(), fmt), output)
            return 0

        if args.command == "roots":
            resp = client.post("/roots", json={"n_max": args.n_max})
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            body = resp.json()
            if fmt == "json":
                _emit(json.dumps(body) + "\n", output)
            elif fmt == "csv":
                lines = ["n,location,residual"]
                for r in body["roots"]:
                    lines.append("%d,%.17g,%.17g" % (r["index_n"], r["location"], r["residual"]))
                _emit("\n".join(lines) + "\n", output)
            else:
                lines = ["offset limit %.15g" % body["offset_limit"]]
                for r in body["roots"]:
                    lines.append(
                        "n=%d x=%.15g residual=%.3g"
                        % (r["index_n"], r["location"], r["residual"])
                    )
                _emit("\n".join(lines) + "\n", output)
            return 0

        if args.command == "check":
            payload = _summand_payload(args)
            payload.update({"property": args.prop, "y": args.lower, "x": args.upper})
            if args.c is not None:
                payload["c"] = args.c
            _maybe(payload, args, "tol", "tol")
            _maybe(payload, args, "max_terms", "max_terms")
            resp = client.post("/check", json=payload)
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            body = resp.json()
            if fmt == "json":
                _emit(json.dumps(body) + "\n", output)
            else:
                _emit("%s residual %.15g\n" % (body["property"], body["residual"]), output)
            return 0

        if args.command == "constants":
            resp = client.get("/constants")
            if resp.status_code != 200:
                return _fail(resp, fmt, output)
            body = resp.json()
            if fmt == "json":
                _emit(json.dumps(body) + "\n", output)
            elif fmt == "csv":
                lines = ["name,value,description"]
                for c in body["constants"]:
                    lines.append('%s,%.17g,"%s"' % (c["name"], c["value"], c["description"]))
                _emit("\n".join(lines) + "\n", output)
            else:
                lines = [
                    "%s = %.15g  (%s)" % (c["name"], c["value"], c["description"])
                    for c in body["constants"]
                ]
                _emit("\n".join(lines) + "\n", output)
            return 0

    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
