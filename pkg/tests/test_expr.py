"""Parser, renderer, derivative and domain-checking tests for expr."""

import math
import random

import numpy as np
import pytest

from abelforge.expr import (
    DomainError,
    ParseError,
    ScalarField,
    UnknownFunctionError,
    UnknownIdentifierError,
    parse,
    render,
)


# ---------------------------------------------------------------------------
# grammar


def test_precedence_and_associativity():
    assert ScalarField("2+3*4^2")(0.0) == 50.0
    assert ScalarField("2^3^2")(0.0) == 512.0        # right associative
    assert ScalarField("12/4/3")(0.0) == 1.0         # left associative
    assert ScalarField("2-3-4")(0.0) == -5.0
    assert ScalarField("-u^2")(3.0) == -9.0          # unary binds looser than ^
    assert ScalarField("(-u)^2")(3.0) == 9.0
    assert ScalarField("2*-3")(0.0) == -6.0


def test_whitespace_insignificant():
    a = ScalarField("u *(1 -  u)")
    b = ScalarField("u*(1-u)")
    assert a(0.3) == b(0.3)


@pytest.mark.parametrize("text,value,at", [
    ("sin(u)", math.sin(1.2), 1.2),
    ("cos(u)", math.cos(1.2), 1.2),
    ("tan(u)", math.tan(0.4), 0.4),
    ("sqrt(u)", math.sqrt(2.0), 2.0),
    ("exp(u)", math.exp(-0.3), -0.3),
    ("ln(u)", math.log(2.5), 2.5),
    ("abs(u)", 0.7, -0.7),
    ("sech(u)", 1.0 / math.cosh(0.9), 0.9),
    ("tanh(u)", math.tanh(0.9), 0.9),
])
def test_function_table(text, value, at):
    assert ScalarField(text)(at) == pytest.approx(value, rel=1e-15)


def test_scientific_literals():
    assert ScalarField("1e-3 + 2.5E2")(0.0) == pytest.approx(250.001)
    assert ScalarField(".5")(0.0) == 0.5


# ---------------------------------------------------------------------------
# parse errors carry positions


def test_unknown_identifier_offset_zero():
    with pytest.raises(UnknownIdentifierError) as err:
        parse("c")
    assert err.value.position == 0


def test_unknown_identifier_mid_expression():
    with pytest.raises(UnknownIdentifierError) as err:
        parse("u + pi")
    assert err.value.position == 4


def test_unknown_function():
    with pytest.raises(UnknownFunctionError) as err:
        parse("cosh(u)")
    assert err.value.position == 0
    assert "sech" in err.value.expected


@pytest.mark.parametrize("bad", ["", "u +", "(u", "u @ 2", "2u", "1..2", "()"])
def test_malformed_inputs_raise(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse("2 u")


# ---------------------------------------------------------------------------
# rendering round-trips


@pytest.mark.parametrize("text", [
    "u*(1 - u)",
    "sin(u)",
    "2*sin(u)+sin(2*u)",
    "1 - u^2",
    "-(u + 1)/(u - 1)",
    "sqrt(0.5 + 2*u^2 - 1.3333333333333333*u^3)",
    "u^-2",
    "exp(-u)*tanh(u/2)",
])
def test_render_reparses_to_same_values(text):
    e = parse(text)
    again = parse(render(e))
    us = np.linspace(-0.9, 0.9, 17)
    f, g = ScalarField(e), ScalarField(again)
    try:
        np.testing.assert_array_equal(f(us), g(us))
    except DomainError:
        for u in us:
            try:
                a = f(float(u))
            except DomainError:
                continue
            assert a == g(float(u))


def test_render_is_stable():
    e = parse("u*(1 - u)/sqrt(2*u + 3)")
    assert render(parse(render(e))) == render(e)


# ---------------------------------------------------------------------------
# evaluation domain policy: no inf/nan leaks


def test_sqrt_negative_raises_scalar_and_array():
    f = ScalarField("sqrt(u)")
    with pytest.raises(DomainError):
        f(-1.0)
    with pytest.raises(DomainError):
        f(np.array([0.25, -1.0]))


def test_division_by_zero_raises():
    with pytest.raises(DomainError):
        ScalarField("1/u")(0.0)


def test_log_of_nonpositive_raises():
    with pytest.raises(DomainError):
        ScalarField("ln(u)")(0.0)
    with pytest.raises(DomainError):
        ScalarField("ln(u)")(-2.0)


def test_overflow_raises_rather_than_inf():
    with pytest.raises(DomainError):
        ScalarField("exp(u)")(1e9)


def test_array_evaluation_shape():
    f = ScalarField("u^2 - 1")
    us = np.linspace(-2, 2, 7)
    out = f(us)
    assert out.shape == us.shape
    np.testing.assert_allclose(out, us**2 - 1, rtol=0, atol=0)


def test_constant_broadcasts_over_array():
    f = ScalarField("3")
    us = np.zeros(5)
    out = f(us)
    assert out.shape == (5,)
    assert np.all(out == 3.0)


# ---------------------------------------------------------------------------
# symbolic derivative against finite differences

_FUNCS = ("sin", "cos", "tan", "sqrt", "exp", "ln", "abs", "sech", "tanh")


def _random_expr(rng: random.Random, depth: int) -> str:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return "u"
        return f"{rng.uniform(-3, 3):.4g}"
    kind = rng.random()
    if kind < 0.55:
        op = rng.choice("+-*/")
        return (f"({_random_expr(rng, depth - 1)}){op}"
                f"({_random_expr(rng, depth - 1)})")
    if kind < 0.75:
        return f"({_random_expr(rng, depth - 1)})^{rng.choice((2, 3, 4))}"
    fn = rng.choice(_FUNCS)
    return f"{fn}(({_random_expr(rng, depth - 1)})/4)"


def _fd(f, u: float, h: float) -> float:
    # five-point central difference, order h^4
    return (-f(u + 2 * h) + 8 * f(u + h) - 8 * f(u - h) + f(u - 2 * h)) / (12 * h)


def test_derivative_matches_finite_differences():
    rng = random.Random(20260815)
    checked = 0
    for _ in range(1000):
        text = _random_expr(rng, rng.randint(1, 6))
        try:
            f = ScalarField(text)
        except ParseError:
            pytest.fail(f"generator produced unparseable text {text!r}")
        for u in (rng.uniform(-1.8, 1.8) for _ in range(3)):
            h = 1e-3
            try:
                fval = f(u)
                exact = f.d(u)
                coarse = _fd(f, u, h)
                approx = _fd(f, u, h / 2)
            except DomainError:
                continue
            if abs(fval) > 1e6 or abs(exact) > 1e5 or abs(approx) > 1e5:
                continue  # FD noise eps*|f|/h untrustworthy out here
            if abs(coarse - approx) > 1e-7 * (1.0 + abs(approx)):
                continue  # stencil not converged (pole or kink nearby)
            assert exact == pytest.approx(approx, abs=1e-5 * (1.0 + abs(approx))), text
            checked += 1
    assert checked > 1000  # the generator must not starve the property


def test_derivative_known_cases():
    f = ScalarField("u*(1 - u)")
    assert f.d(0.25) == pytest.approx(0.5, abs=1e-15)
    g = ScalarField("sech(u)")
    x = 0.83
    assert g.d(x) == pytest.approx(-math.tanh(x) / math.cosh(x), rel=1e-15)
    p = ScalarField("u^u")  # general exponent path
    x = 1.7
    assert p.d(x) == pytest.approx(x**x * (math.log(x) + 1.0), rel=1e-13)


def test_derivative_text_reparses():
    f = ScalarField("u*(1 - u)/sqrt(2*u + 3)")
    d_text = render(f.derivative)
    g = ScalarField(d_text)
    for u in (-0.4, 0.0, 0.9):
        assert g(u) == pytest.approx(f.d(u), rel=1e-14)
