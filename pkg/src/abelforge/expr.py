"""Small expression language for coefficient functions of one variable ``u``.

Grammar (whitespace insignificant, no implicit multiplication, no named
constants -- substitute numeric literals before parsing):

    expr   := term  (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          right associative
    atom   := NUMBER | 'u' | name '(' expr ')' | '(' expr ')'

Known functions: sin cos tan sqrt exp ln abs sech tanh.

Evaluation never leaks IEEE inf/nan: leaving the real domain raises
:class:`DomainError` carrying the offending subexpression.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

FUNCTIONS = ("sin", "cos", "tan", "sqrt", "exp", "ln", "abs", "sech", "tanh")


class ParseError(ValueError):
    """Malformed input text.  ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = tuple(expected)
        suffix = f" at position {position}"
        if self.expected:
            suffix += " (expected " + " or ".join(self.expected) + ")"
        super().__init__(message + suffix)


class UnknownFunctionError(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unknown function {name!r}", position, tuple(FUNCTIONS))


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(
            f"unknown identifier {name!r} (the only variable is 'u'; constants "
            "must be numeric literals)",
            position,
        )


class DomainError(ArithmeticError):
    """Evaluation left the real domain (div by zero, sqrt of negative, ...)."""

    def __init__(self, message: str, subexpr: "Expr | None" = None):
        self.subexpr = subexpr
        if subexpr is not None:
            message = f"{message} in {render(subexpr)!r}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# AST


class Expr:
    __slots__ = ()

    def __call__(self, u):
        return evaluate(self, u)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True)
class Number(Expr):
    value: float


@dataclass(frozen=True, slots=True)
class Var(Expr):
    """The single independent variable ``u``."""


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    fn: str
    arg: Expr


# ---------------------------------------------------------------------------
# Parsing

_NUM_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _NUM_RE.match(text, i)
        if m:
            out.append(("num", m.group(), i))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            out.append(("name", m.group(), i))
            i = m.end()
            continue
        if c in "+-*/^()":
            out.append((c, c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def advance(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> None:
        t = self.advance()
        if t[0] != kind:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"unexpected {what}", t[2], (kind,))

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"trailing input {t[1]!r}", t[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            # exponent sits at unary level so u^-2 parses
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.advance()
        if kind == "num":
            return Number(float(val))
        if kind == "name":
            if val == "u":
                return Var()
            if self.peek()[0] == "(":
                if val not in FUNCTIONS:
                    raise UnknownFunctionError(val, pos)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise UnknownIdentifierError(val, pos)
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", pos, ("a value",))


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises ParseError (with byte offset) on malformed input; the only
    variable is ``u`` and unknown names are rejected.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Rendering

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 5


def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return repr(int(v))
    return repr(v)


def render(e: Expr) -> str:
    """Render ``e`` with minimal parentheses; output re-parses to the same tree."""
    if isinstance(e, Number):
        return _format_number(e.value)
    if isinstance(e, Var):
        return "u"
    if isinstance(e, Call):
        return f"{e.fn}({render(e.arg)})"
    if isinstance(e, Neg):
        inner = render(e.arg)
        if _prec(e.arg) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        ls, rs = render(e.left), render(e.right)
        if e.op == "^":
            if _prec(e.left) <= p:
                ls = f"({ls})"
            if _prec(e.right) < p:
                rs = f"({rs})"
            return f"{ls}^{rs}"
        if _prec(e.left) < p:
            ls = f"({ls})"
        if _prec(e.right) <= p:
            rs = f"({rs})"
        sep = f" {e.op} " if p == 1 else e.op
        return f"{ls}{sep}{rs}"
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Evaluation


def _check_finite(value, node: Expr):
    if not np.all(np.isfinite(value)):
        raise DomainError("overflow to non-finite value", node)
    return value


def _eval(e: Expr, u):
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Var):
        return u
    if isinstance(e, Neg):
        return -_eval(e.arg, u)
    if isinstance(e, BinOp):
        a = _eval(e.left, u)
        b = _eval(e.right, u)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise DomainError("division by zero", e)
            return _check_finite(a / b, e)
        # power
        bb = np.asarray(b)
        if not np.all(bb == np.round(bb)):
            if np.any(np.asarray(a) < 0.0):
                raise DomainError("negative base with non-integer exponent", e)
        if np.any((np.asarray(a) == 0.0) & (bb < 0.0)):
            raise DomainError("zero base with negative exponent", e)
        return _check_finite(np.power(np.asarray(a, dtype=float), b), e)
    if isinstance(e, Call):
        a = _eval(e.arg, u)
        fn = e.fn
        if fn == "sin":
            return np.sin(a)
        if fn == "cos":
            return np.cos(a)
        if fn == "tan":
            return _check_finite(np.tan(a), e)
        if fn == "sqrt":
            if np.any(np.asarray(a) < 0.0):
                raise DomainError("sqrt of negative value", e)
            return np.sqrt(a)
        if fn == "exp":
            return _check_finite(np.exp(a), e)
        if fn == "ln":
            if np.any(np.asarray(a) <= 0.0):
                raise DomainError("ln of non-positive value", e)
            return np.log(a)
        if fn == "abs":
            return np.abs(a)
        if fn == "sech":
            return 1.0 / np.cosh(a)
        if fn == "tanh":
            return np.tanh(a)
    raise TypeError(f"not an Expr: {e!r}")


def evaluate(e: Expr, u):
    """Evaluate ``e`` at ``u`` (scalar or ndarray).

    Raises DomainError instead of returning inf/nan; the error carries the
    subexpression that failed.
    """
    with np.errstate(all="ignore"):
        v = _eval(e, np.asarray(u, dtype=float) if isinstance(u, np.ndarray) else float(u))
    if isinstance(u, np.ndarray):
        return np.broadcast_to(np.asarray(v, dtype=float), u.shape).copy() if np.ndim(v) == 0 else v
    return float(v)


# ---------------------------------------------------------------------------
# Smart constructors (literal constant folding only)


def const_value(e: Expr) -> float | None:
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Neg) and isinstance(e.arg, Number):
        return -e.arg.value
    return None


def fold_num(x: float) -> Expr:
    x = float(x)
    return Number(x) if x >= 0.0 else Neg(Number(-x))


def fold_neg(a: Expr) -> Expr:
    if isinstance(a, Neg):
        return a.arg
    ca = const_value(a)
    if ca is not None:
        return fold_num(-ca)
    return Neg(a)


def fold_add(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return fold_num(ca + cb)
    if ca == 0.0:
        return b
    if cb == 0.0:
        return a
    if isinstance(b, Neg):
        return fold_sub(a, b.arg)
    if isinstance(a, Neg):
        return fold_sub(b, a.arg)
    return BinOp("+", a, b)


def fold_sub(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return fold_num(ca - cb)
    if cb == 0.0:
        return a
    if ca == 0.0:
        return fold_neg(b)
    if isinstance(b, Neg):
        return fold_add(a, b.arg)
    return BinOp("-", a, b)


def fold_mul(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return fold_num(ca * cb)
    if ca == 0.0 or cb == 0.0:
        return Number(0.0)
    if ca == 1.0:
        return b
    if cb == 1.0:
        return a
    if isinstance(a, Neg):
        return fold_neg(fold_mul(a.arg, b))
    if isinstance(b, Neg):
        return fold_neg(fold_mul(a, b.arg))
    return BinOp("*", a, b)


def fold_div(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if cb is not None and cb != 0.0:
        if ca is not None:
            return fold_num(ca / cb)
        if cb == 1.0:
            return a
    return BinOp("/", a, b)


def fold_pow(a: Expr, b: Expr) -> Expr:
    ca, cb = const_value(a), const_value(b)
    if cb == 1.0:
        return a
    if cb == 0.0:
        return Number(1.0)
    if ca is not None and cb is not None:
        try:
            v = ca**cb
        except (ValueError, OverflowError, ZeroDivisionError):
            return BinOp("^", a, b)
        if isinstance(v, float) and math.isfinite(v):
            return fold_num(v)
    return BinOp("^", a, b)


# ---------------------------------------------------------------------------
# Differentiation


def differentiate(e: Expr) -> Expr:
    """Exact symbolic d/du.

    Only literal constant folding is applied; no other simplification.
    abs follows the sign convention d|f| = f'*f/|f| (undefined at f=0).
    """
    if isinstance(e, Number):
        return Number(0.0)
    if isinstance(e, Var):
        return Number(1.0)
    if isinstance(e, Neg):
        return fold_neg(differentiate(e.arg))
    if isinstance(e, BinOp):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        op = e.op
        if op == "+":
            return fold_add(da, db)
        if op == "-":
            return fold_sub(da, db)
        if op == "*":
            return fold_add(fold_mul(da, b), fold_mul(a, db))
        if op == "/":
            return fold_div(fold_sub(fold_mul(da, b), fold_mul(a, db)), fold_pow(b, Number(2.0)))
        cb = const_value(b)
        if cb is not None:
            return fold_mul(fold_mul(b, fold_pow(a, fold_num(cb - 1.0))), da)
        # general exponent: f^g * (g' ln f + g f'/f)
        return fold_mul(e, fold_add(fold_mul(db, Call("ln", a)), fold_div(fold_mul(b, da), a)))
    if isinstance(e, Call):
        x = e.arg
        dx = differentiate(x)
        fn = e.fn
        if fn == "sin":
            return fold_mul(Call("cos", x), dx)
        if fn == "cos":
            return fold_neg(fold_mul(Call("sin", x), dx))
        if fn == "tan":
            return fold_div(dx, fold_pow(Call("cos", x), Number(2.0)))
        if fn == "sqrt":
            return fold_div(dx, fold_mul(Number(2.0), e))
        if fn == "exp":
            return fold_mul(e, dx)
        if fn == "ln":
            return fold_div(dx, x)
        if fn == "abs":
            return fold_mul(dx, fold_div(x, e))
        if fn == "sech":
            return fold_neg(fold_mul(fold_mul(e, Call("tanh", x)), dx))
        if fn == "tanh":
            return fold_mul(fold_pow(Call("sech", x), Number(2.0)), dx)
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Compiled evaluation and ScalarField

_NP_FN = {
    "sin": "np.sin",
    "cos": "np.cos",
    "tan": "np.tan",
    "sqrt": "np.sqrt",
    "exp": "np.exp",
    "ln": "np.log",
    "abs": "np.abs",
    "tanh": "np.tanh",
}


def _emit(e: Expr) -> str:
    if isinstance(e, Number):
        return repr(e.value)
    if isinstance(e, Var):
        return "u"
    if isinstance(e, Neg):
        return f"(-{_emit(e.arg)})"
    if isinstance(e, BinOp):
        op = "**" if e.op == "^" else e.op
        return f"({_emit(e.left)} {op} {_emit(e.right)})"
    if isinstance(e, Call):
        if e.fn == "sech":
            return f"(1.0/np.cosh({_emit(e.arg)}))"
        return f"{_NP_FN[e.fn]}({_emit(e.arg)})"
    raise TypeError(f"not an Expr: {e!r}")


def compile_expr(e: Expr):
    """Compile ``e`` into a fast numpy closure of ``u``.

    The closure itself does no domain checking (it may produce nan/inf);
    ScalarField wraps it with checks.
    """
    return eval(compile(f"lambda u: {_emit(e)}", "<expr>", "eval"), {"np": np})


class ScalarField:
    """A coefficient function of ``u`` with its exact symbolic derivative.

    Evaluation uses a compiled numpy closure; when the fast path produces a
    non-finite value the slow checked evaluator re-runs to raise a
    DomainError pointing at the offending subexpression.
    """

    __slots__ = ("expr", "derivative", "_f", "_df")

    def __init__(self, expr: Expr | str):
        if isinstance(expr, str):
            expr = parse(expr)
        self.expr = expr
        self.derivative = differentiate(expr)
        self._f = compile_expr(expr)
        self._df = compile_expr(self.derivative)

    def _run(self, fn, source: Expr, u):
        if isinstance(u, np.ndarray):
            with np.errstate(all="ignore"):
                r = np.asarray(fn(u), dtype=float)
            if r.shape != u.shape:
                r = np.broadcast_to(r, u.shape).copy()
            if not np.all(np.isfinite(r)):
                evaluate(source, u)  # raises with the offending node
                raise DomainError("non-finite value", source)
            return r
        with np.errstate(all="ignore"):
            r = fn(np.float64(u))
        r = float(r)
        if not math.isfinite(r):
            evaluate(source, float(u))
            raise DomainError("non-finite value", source)
        return r

    def __call__(self, u):
        return self._run(self._f, self.expr, u)

    def d(self, u):
        """Evaluate the derivative at ``u``."""
        return self._run(self._df, self.derivative, u)

    @property
    def text(self) -> str:
        return render(self.expr)

    def __repr__(self):
        return f"ScalarField({self.text!r})"
