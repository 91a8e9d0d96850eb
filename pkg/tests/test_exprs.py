import math

import pytest

from qgeom.exprs import ExpressionError, compile_expression


def test_basic_arithmetic():
    f = compile_expression("2*X + Y/4 - 1", ("X", "Y"))
    assert f(3.0, 8.0) == pytest.approx(7.0)


def test_power_caret():
    f = compile_expression("X^-0.25", ("X",))
    assert f(16.0) == pytest.approx(16.0 ** -0.25)
    g = compile_expression("X**2", ("X",))
    assert g(3.0) == 9.0


def test_functions_and_constants():
    f = compile_expression("exp(l1) + sqrt(l2) + ln(e)", ("l1", "l2"))
    assert f(0.0, 4.0) == pytest.approx(4.0)
    g = compile_expression("sin(pi/2)", ())
    assert g() == pytest.approx(1.0)


def test_unicode_operators():
    f = compile_expression("2×X ÷ 4", ("X",))
    assert f(6.0) == pytest.approx(3.0)


def test_oscillator_slice_expressions():
    sigma = compile_expression("X^(-1/4)", ("W", "X"))
    mu = compile_expression("W/X", ("W", "X"))
    assert sigma(1.0, 16.0) == pytest.approx(0.5)
    assert mu(3.0, 2.0) == pytest.approx(1.5)


@pytest.mark.parametrize("bad", [
    "import os",
    "__builtins__",
    "X.real",
    "open('x')",
    "unknown(X)",
    "X + Q",
    "lambda: 1",
    "[1, 2]",
    "'str'",
])
def test_rejects_non_arithmetic(bad):
    with pytest.raises(ExpressionError):
        compile_expression(bad, ("X",))


def test_wrong_arity():
    f = compile_expression("X", ("X",))
    with pytest.raises(TypeError):
        f(1.0, 2.0)
