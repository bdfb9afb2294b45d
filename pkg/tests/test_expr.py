import numpy as np
import pytest

from qclab.errors import ConfigError
from qclab.expr import compile_expression

T = np.linspace(0, 2 * np.pi, 17)


@pytest.mark.parametrize("text,expected", [
    ("exp(i*t)", np.exp(1j * T)),
    ("z**2 + 0.5*conj(z)", np.exp(2j * T) + 0.5 * np.exp(-1j * T)),
    ("cos(theta) + 2", np.cos(T) + 2),
    ("sqrt(abs(wrap(t)))", np.sqrt(np.abs(np.angle(np.exp(1j * T))))),
    ("re(z) - im(z)", np.cos(T) - np.sin(T)),
    ("3", np.full(T.shape, 3.0)),
    ("-pi + e", np.full(T.shape, np.e - np.pi)),
])
def test_expressions_evaluate(text, expected):
    assert np.allclose(compile_expression(text)(T), expected, atol=1e-15)


def test_real_expressions_stay_real():
    assert not np.iscomplexobj(compile_expression("sin(t)**2")(T))
    assert np.iscomplexobj(compile_expression("1 + 0*i")(T))


@pytest.mark.parametrize("text", ["__import__('os')", "t.real", "open(t)", "x + 1",
                                  "lambda: 1", "[t]", "sin(t, t)", "'a'", "t if t else 1", "sin("])
def test_rejected_syntax(text):
    with pytest.raises(ConfigError):
        compile_expression(text)


def test_source_is_kept():
    assert compile_expression("  exp(i*t) ").source == "exp(i*t)"
