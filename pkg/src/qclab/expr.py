"""A tiny arithmetic expression language for boundary data.

Expressions are parsed with :mod:`ast` and only a whitelist of node types,
names and functions is accepted, so no Python code is ever executed.
Variables: ``t`` (alias ``theta``), the curve parameter, and ``z``, which
stands for ``exp(i t)``.  Constants: ``pi``, ``e`` and the imaginary unit
``i`` (also ``j``).  Functions: see :data:`FUNCTIONS`.

>>> f = compile_expression("exp(i*(t + 0.3*sin(t)))")
>>> abs(f(0.0) - 1) < 1e-15
True
"""
from __future__ import annotations

import ast
import operator

import numpy as np

from .errors import ConfigError


def _sqrt(x):
    x = np.asarray(x)
    return np.sqrt(x.astype(complex)) if np.iscomplexobj(x) or np.any(x < 0) else np.sqrt(x)


def _wrap(t):
    """Angle folded into ``(-pi, pi]``."""
    return np.angle(np.exp(1j * np.asarray(t, dtype=float)))


FUNCTIONS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "exp": np.exp, "log": np.log, "sqrt": _sqrt, "abs": np.abs,
    "re": np.real, "im": np.imag, "conj": np.conj, "wrap": _wrap,
}
CONSTANTS = {"pi": np.pi, "e": np.e, "i": 1j, "j": 1j}
VARIABLES = ("t", "theta", "z")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _check(node):
    if isinstance(node, ast.Expression):
        return _check(node.body)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left)
        _check(node.right)
    elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        _check(node.operand)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ConfigError(f"unknown function in expression: {ast.unparse(node.func)}")
        if node.keywords or len(node.args) != 1:
            raise ConfigError(f"{node.func.id}() takes exactly one argument")
        _check(node.args[0])
    elif isinstance(node, ast.Name):
        if node.id not in CONSTANTS and node.id not in VARIABLES:
            raise ConfigError(f"unknown name in expression: {node.id}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float, complex)) or isinstance(node.value, bool):
            raise ConfigError(f"unsupported literal {node.value!r}")
    else:
        raise ConfigError(f"unsupported syntax: {type(node).__name__}")


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNOPS[type(node.op)](_eval(node.operand, env))
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](_eval(node.args[0], env))
    if isinstance(node, ast.Name):
        return env[node.id] if node.id in env else CONSTANTS[node.id]
    return node.value


def compile_expression(text: str):
    """Validate ``text`` and return a vectorized function of ``t``.

    Raises
    ------
    ConfigError
        On syntax errors or names outside the whitelist.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from None
    _check(tree)
    complex_valued = any(
        (isinstance(n, ast.Name) and n.id in ("i", "j", "z"))
        or (isinstance(n, ast.Constant) and isinstance(n.value, complex))
        for n in ast.walk(tree))

    def fn(t):
        t = np.asarray(t, dtype=float)
        env = {"t": t, "theta": t, "z": np.exp(1j * t)}
        with np.errstate(all="ignore"):
            out = _eval(tree, env)
        out = np.broadcast_to(np.asarray(out), t.shape).copy()
        if np.iscomplexobj(out) and not complex_valued and np.all(out.imag == 0):
            out = out.real
        return out

    fn.source = text.strip()
    return fn
