"""Summand expression language: parsing, evaluation, symbolic differentiation.

The grammar covers decimal literals, the index variable ``k``, the operators
``+ - * / ^`` (``^`` right-associative, binding tighter than unary minus),
parentheses, the functions sin/cos/exp/ln/sqrt and the constants pi and e.

ASTs are immutable; every operation here is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "ExprError",
    "ParseError",
    "DomainError",
    "NonDifferentiableError",
    "LimitEstimationError",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ExprNode",
    "parse",
    "to_source",
    "evaluate",
    "compile_expr",
    "differentiate",
    "simplify",
    "continuation_form",
    "SummandSpec",
    "make_summand",
    "estimate_limit",
]


class ExprError(Exception):
    """Base class for expression-layer failures."""


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(ExprError):
    """Evaluation left the real domain (log of non-positive, 0^negative, ...)."""


class NonDifferentiableError(ExprError):
    """The expression contains a construct with no symbolic derivative."""


class LimitEstimationError(ExprError):
    """Numeric estimation of the summand limit did not settle."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The free variable k."""


@dataclass(frozen=True)
class Neg:
    child: "ExprNode"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Call:
    name: str  # sin cos exp ln sqrt
    arg: "ExprNode"


ExprNode = Union[Const, Var, Neg, BinOp, Call]

_FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")
_CONSTANTS = {"pi": math.pi, "e": math.e}


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------


@dataclass
class _Token:
    kind: str  # num ident op lparen rparen end
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            if j < n and source[j] in "eE":
                # scientific notation only when followed by digits/sign+digits
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    while k < n and source[k].isdigit():
                        k += 1
                    j = k
            text = source[i:j]
            try:
                float(text)
            except ValueError:
                raise ParseError(f"malformed number {text!r}", i)
            tokens.append(_Token("num", text, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("ident", source[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.idx = 0

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return self.advance()

    # expr := term (('+'|'-') term)*
    def expr(self) -> ExprNode:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    # term := factor (('*'|'/') factor)*
    def term(self) -> ExprNode:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    # factor := '-' factor | power   (unary minus binds looser than ^)
    def factor(self) -> ExprNode:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    # power := atom ('^' factor)?   (right-associative)
    def power(self) -> ExprNode:
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            return BinOp("^", node, self.factor())
        return node

    def atom(self) -> ExprNode:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "k":
                return Var()
            if tok.text in _CONSTANTS:
                return Const(_CONSTANTS[tok.text])
            if tok.text in _FUNCTIONS:
                self.expect("lparen")
                arg = self.expr()
                self.expect("rparen")
                return Call(tok.text, arg)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen")
            return node
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}", tok.pos)


def parse(source: str) -> ExprNode:
    """Parse *source* into an AST under the declared precedence rules."""
    parser = _Parser(source)
    node = parser.expr()
    parser.expect("end")
    return node


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _prec(node: ExprNode) -> int:
    if isinstance(node, BinOp):
        return {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_source(node: ExprNode) -> str:
    """Render *node* back to the expression language; parse(to_source(n)) == n."""
    if isinstance(node, Const):
        if node.value < 0:
            return f"({_fmt_const(node.value)})"
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return "k"
    if isinstance(node, Neg):
        inner = to_source(node.child)
        if _prec(node.child) <= 3:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        lp, rp = _prec(node.left), _prec(node.right)
        p = _prec(node)
        left = to_source(node.left)
        right = to_source(node.right)
        if node.op == "^":
            # left operand of ^ must bind tighter; right may be another power
            if lp <= p:
                left = f"({left})"
            if rp < p:
                right = f"({right})"
        else:
            if lp < p:
                left = f"({left})"
            if rp < p or (rp == p and node.op in "-/"):
                right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an ExprNode: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _pow_scalar(base: float, expo: float) -> float:
    if base > 0:
        return base ** expo
    if base == 0.0:
        if expo > 0:
            return 0.0
        if expo == 0:
            return 1.0
        raise DomainError("0 raised to a negative power")
    # negative base: only integer exponents are real-valued
    if expo == round(expo):
        n = int(round(expo))
        mag = (-base) ** expo
        return -mag if n % 2 else mag
    raise DomainError(f"negative base {base} with non-integer exponent {expo}")


def evaluate(node: ExprNode, k: float) -> float:
    """Evaluate the expression at ``k`` as an IEEE double."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(k)
    if isinstance(node, Neg):
        return -evaluate(node.child, k)
    if isinstance(node, Call):
        x = evaluate(node.arg, k)
        if node.name == "sin":
            return math.sin(x)
        if node.name == "cos":
            return math.cos(x)
        if node.name == "exp":
            return math.exp(x)
        if node.name == "ln":
            if x <= 0:
                raise DomainError(f"ln of non-positive value {x}")
            return math.log(x)
        if node.name == "sqrt":
            if x < 0:
                raise DomainError(f"sqrt of negative value {x}")
            return math.sqrt(x)
        raise ExprError(f"unknown function {node.name}")
    if isinstance(node, BinOp):
        a = evaluate(node.left, k)
        b = evaluate(node.right, k)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0:
                raise DomainError(f"division by zero at k={k}")
            return a / b
        if node.op == "^":
            return _pow_scalar(a, b)
    raise TypeError(f"not an ExprNode: {node!r}")


def _pow_array(base: np.ndarray, expo: np.ndarray) -> np.ndarray:
    base = np.asarray(base, dtype=float)
    expo = np.asarray(expo, dtype=float)
    if np.all(base > 0):
        return np.power(base, expo)
    out = np.empty(np.broadcast(base, expo).shape)
    b, e = np.broadcast_arrays(base, expo)
    pos = b > 0
    out[pos] = np.power(b[pos], e[pos])
    zero = b == 0
    if np.any(zero):
        ez = e[zero]
        if np.any(ez < 0):
            raise DomainError("0 raised to a negative power")
        out[zero] = np.where(ez == 0, 1.0, 0.0)
    neg = b < 0
    if np.any(neg):
        en = e[neg]
        if np.any(en != np.round(en)):
            raise DomainError("negative base with non-integer exponent")
        sign = np.where(np.mod(np.round(en), 2) == 0, 1.0, -1.0)
        out[neg] = sign * np.power(-b[neg], en)
    return out


def compile_expr(node: ExprNode) -> Callable[[np.ndarray], np.ndarray]:
    """Compile the AST to a vectorized callable over numpy arrays of k."""
    if isinstance(node, Const):
        v = node.value
        return lambda k: np.full_like(np.asarray(k, dtype=float), v)
    if isinstance(node, Var):
        return lambda k: np.asarray(k, dtype=float)
    if isinstance(node, Neg):
        f = compile_expr(node.child)
        return lambda k: -f(k)
    if isinstance(node, Call):
        f = compile_expr(node.arg)
        name = node.name
        if name in ("sin", "cos", "exp", "sqrt"):
            ufunc = getattr(np, name)
            if name == "sqrt":
                def wrapped(k, f=f):
                    x = f(k)
                    if np.any(x < 0):
                        raise DomainError("sqrt of negative value")
                    return np.sqrt(x)
                return wrapped
            return lambda k: ufunc(f(k))
        if name == "ln":
            def logf(k, f=f):
                x = f(k)
                if np.any(x <= 0):
                    raise DomainError("ln of non-positive value")
                return np.log(x)
            return logf
        raise ExprError(f"unknown function {name}")
    if isinstance(node, BinOp):
        fl = compile_expr(node.left)
        fr = compile_expr(node.right)
        op = node.op
        if op == "+":
            return lambda k: fl(k) + fr(k)
        if op == "-":
            return lambda k: fl(k) - fr(k)
        if op == "*":
            return lambda k: fl(k) * fr(k)
        if op == "/":
            def div(k, fl=fl, fr=fr):
                b = fr(k)
                if np.any(b == 0):
                    raise DomainError("division by zero")
                return fl(k) / b
            return div
        if op == "^":
            return lambda k: _pow_array(fl(k), fr(k))
    raise TypeError(f"not an ExprNode: {node!r}")


# ---------------------------------------------------------------------------
# Simplification (constant folding plus the cheap identities)
# ---------------------------------------------------------------------------


def _is_const(node: ExprNode, value: Optional[float] = None) -> bool:
    return isinstance(node, Const) and (value is None or node.value == value)


def simplify(node: ExprNode) -> ExprNode:
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Neg):
        child = simplify(node.child)
        if isinstance(child, Const):
            return Const(-child.value)
        if isinstance(child, Neg):
            return child.child
        return Neg(child)
    if isinstance(node, Call):
        arg = simplify(node.arg)
        if isinstance(arg, Const):
            try:
                return Const(evaluate(Call(node.name, arg), 0.0))
            except DomainError:
                pass
        return Call(node.name, arg)
    if isinstance(node, BinOp):
        left = simplify(node.left)
        right = simplify(node.right)
        op = node.op
        if isinstance(left, Const) and isinstance(right, Const):
            try:
                return Const(evaluate(BinOp(op, left, right), 0.0))
            except DomainError:
                pass
        if op == "+":
            if _is_const(left, 0):
                return right
            if _is_const(right, 0):
                return left
        elif op == "-":
            if _is_const(right, 0):
                return left
            if _is_const(left, 0):
                return simplify(Neg(right))
        elif op == "*":
            if _is_const(left, 0) or _is_const(right, 0):
                return Const(0.0)
            if _is_const(left, 1):
                return right
            if _is_const(right, 1):
                return left
            if _is_const(left, -1):
                return simplify(Neg(right))
            if _is_const(right, -1):
                return simplify(Neg(left))
        elif op == "/":
            if _is_const(left, 0) and not _is_const(right, 0):
                return Const(0.0)
            if _is_const(right, 1):
                return left
        elif op == "^":
            if _is_const(right, 1):
                return left
            if _is_const(right, 0):
                return Const(1.0)
            # (u^a)^b -> u^(a*b) for literal exponents
            if isinstance(left, BinOp) and left.op == "^" and _is_const(left.right) and _is_const(right):
                return simplify(BinOp("^", left.left, Const(left.right.value * right.value)))
        return BinOp(op, left, right)
    raise TypeError(f"not an ExprNode: {node!r}")


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------


def _is_minus_one(node: ExprNode) -> bool:
    return _is_const(node, -1) or (isinstance(node, Neg) and _is_const(node.child, 1))


def continuation_form(node: ExprNode) -> ExprNode:
    """Rewrite ``(-1)^expr`` subtrees to ``cos(pi*expr)``.

    The two agree at integer arguments and the cosine form is real-valued
    and differentiable everywhere, which is what the real-bound
    continuation needs.
    """
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Neg):
        return Neg(continuation_form(node.child))
    if isinstance(node, Call):
        return Call(node.name, continuation_form(node.arg))
    if isinstance(node, BinOp):
        if node.op == "^" and _is_minus_one(node.left):
            return Call("cos", BinOp("*", Const(math.pi), continuation_form(node.right)))
        return BinOp(node.op, continuation_form(node.left), continuation_form(node.right))
    raise TypeError(f"not an ExprNode: {node!r}")


def differentiate(node: ExprNode) -> ExprNode:
    """Exact symbolic derivative with respect to k.

    ``(-1)^k``-style subtrees must be rewritten with :func:`continuation_form`
    first; a leftover negative-literal base is rejected.
    """
    return simplify(_diff(node))


def _diff(node: ExprNode) -> ExprNode:
    if isinstance(node, Const):
        return Const(0.0)
    if isinstance(node, Var):
        return Const(1.0)
    if isinstance(node, Neg):
        return Neg(_diff(node.child))
    if isinstance(node, Call):
        u, du = node.arg, _diff(node.arg)
        if node.name == "sin":
            return BinOp("*", Call("cos", u), du)
        if node.name == "cos":
            return Neg(BinOp("*", Call("sin", u), du))
        if node.name == "exp":
            return BinOp("*", Call("exp", u), du)
        if node.name == "ln":
            return BinOp("/", du, u)
        if node.name == "sqrt":
            return BinOp("/", du, BinOp("*", Const(2.0), Call("sqrt", u)))
        raise NonDifferentiableError(f"no derivative rule for {node.name}")
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        du, dv = _diff(u), _diff(v)
        if node.op == "+":
            return BinOp("+", du, dv)
        if node.op == "-":
            return BinOp("-", du, dv)
        if node.op == "*":
            return BinOp("+", BinOp("*", du, v), BinOp("*", u, dv))
        if node.op == "/":
            num = BinOp("-", BinOp("*", du, v), BinOp("*", u, dv))
            return BinOp("/", num, BinOp("^", v, Const(2.0)))
        if node.op == "^":
            if isinstance(v, Const):
                c = v.value
                return BinOp(
                    "*",
                    BinOp("*", Const(c), BinOp("^", u, Const(c - 1.0))),
                    du,
                )
            if _is_minus_one(u):
                raise NonDifferentiableError(
                    "(-1)^expr has no real derivative; rewrite with continuation_form first"
                )
            # u^v = exp(v ln u), valid for u > 0
            inner = BinOp(
                "+",
                BinOp("*", dv, Call("ln", u)),
                BinOp("*", v, BinOp("/", du, u)),
            )
            return BinOp("*", BinOp("^", u, v), inner)
    raise TypeError(f"not an ExprNode: {node!r}")


# ---------------------------------------------------------------------------
# Summand specification
# ---------------------------------------------------------------------------


def estimate_limit(node: ExprNode, tol: float = 1e-12) -> float:
    """Estimate lim f(k) for k -> oo by sampling at k = 2^j, j = 10..40.

    Accepted when two successive samples differ by less than *tol*.
    """
    fn = compile_expr(node)
    prev = None
    for j in range(10, 41):
        try:
            val = float(fn(np.array([2.0 ** j]))[0])
        except DomainError as exc:
            raise LimitEstimationError(f"domain error while probing the limit: {exc}") from exc
        if not math.isfinite(val):
            raise LimitEstimationError(f"summand is non-finite at k=2^{j}")
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
    raise LimitEstimationError(
        "summand values did not settle to 1e-12 by k=2^40; pass the limit explicitly"
    )


@dataclass(frozen=True)
class SummandSpec:
    """A summand f(k) together with everything the evaluators need.

    ``body`` is the parsed expression, ``cont_body`` its real-valued
    continuation (``(-1)^expr`` rewritten to ``cos(pi*expr)``) and
    ``derivative`` the exact symbolic derivative of ``cont_body``.
    """

    body: ExprNode
    cont_body: ExprNode
    derivative: ExprNode
    limit_L: float
    parity_factor: bool
    monotonic_hint: str  # increasing / decreasing / unknown
    source: str = field(default="", compare=False)

    def fn(self) -> Callable[[np.ndarray], np.ndarray]:
        return compile_expr(self.cont_body)

    def dfn(self) -> Callable[[np.ndarray], np.ndarray]:
        return compile_expr(self.derivative)


def _detect_monotonic(node: ExprNode) -> str:
    fn = compile_expr(node)
    try:
        vals = fn(np.arange(1.0, 201.0))
    except DomainError:
        return "unknown"
    if not np.all(np.isfinite(vals)):
        return "unknown"
    d = np.diff(vals)
    if np.all(d <= 0):
        return "decreasing"
    if np.all(d >= 0):
        return "increasing"
    return "unknown"


def make_summand(
    source: Union[str, ExprNode],
    limit: Union[float, str] = "auto",
    monotonic: Optional[str] = None,
) -> SummandSpec:
    """Build a :class:`SummandSpec` from expression text or an AST."""
    if isinstance(source, str):
        body = parse(source)
        text = source
    else:
        body = source
        text = to_source(source)
    cont = simplify(continuation_form(body))
    parity = cont != simplify(body)
    derivative = differentiate(cont)
    if limit == "auto":
        limit_value = estimate_limit(cont)
    else:
        limit_value = float(limit)
        if not math.isfinite(limit_value):
            raise ExprError("summand limit must be finite")
    if monotonic is None:
        hint = "unknown" if parity else _detect_monotonic(cont)
    else:
        if monotonic not in ("increasing", "decreasing", "unknown"):
            raise ExprError(f"bad monotonicity hint {monotonic!r}")
        hint = monotonic
    return SummandSpec(
        body=body,
        cont_body=cont,
        derivative=derivative,
        limit_L=limit_value,
        parity_factor=parity,
        monotonic_hint=hint,
        source=text,
    )
