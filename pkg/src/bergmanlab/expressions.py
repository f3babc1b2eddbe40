"""Formula strings from config files, validated and compiled with sympy."""

from __future__ import annotations

import re
from typing import Callable, Iterable

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

X = sp.Symbol("x", nonnegative=True)
Y = sp.Symbol("y", nonnegative=True)
T1 = sp.Symbol("theta1", real=True)
T2 = sp.Symbol("theta2", real=True)
Z1 = sp.Symbol("z1")
Z2 = sp.Symbol("z2")

_SYMBOLS = {"x": X, "y": Y, "theta1": T1, "theta2": T2, "z1": Z1, "z2": Z2}
_FUNCTIONS = {
    "sqrt": sp.sqrt,
    "exp": sp.exp,
    "log": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "tan": sp.tan,
    "abs": sp.Abs,
    "Abs": sp.Abs,
    "re": sp.re,
    "im": sp.im,
    "conjugate": sp.conjugate,
    "conj": sp.conjugate,
    "Max": sp.Max,
    "Min": sp.Min,
    "max": sp.Max,
    "min": sp.Min,
    "pi": sp.pi,
    "I": sp.I,
}


_SAFE_TEXT = re.compile(r"[A-Za-z0-9_+\-*/().,\s]*")


class ExpressionError(ValueError):
    pass


def parse(text: str, allowed: Iterable[str]) -> sp.Expr:
    """Parse ``text`` allowing only the named variables and a fixed function set."""
    allowed = set(allowed)
    if not _SAFE_TEXT.fullmatch(text) or "__" in text:
        raise ExpressionError(f"{text!r} contains disallowed characters")
    local ={k: v for k, v in _SYMBOLS.items() if k in allowed}
    local.update(_FUNCTIONS)
    try:
        expr = parse_expr(
            text,
            local_dict=local,
            global_dict={"Integer": sp.Integer, "Float": sp.Float, "Rational": sp.Rational,
                         "Symbol": sp.Symbol, "Function": sp.Function},
            transformations=standard_transformations,
        )
    except Exception as exc:  # sympy raises a zoo of exception types here
        raise ExpressionError(f"cannot parse {text!r}: {exc}") from exc
    if not isinstance(expr, sp.Expr):
        raise ExpressionError(f"{text!r} is not an arithmetic expression")
    names = {s.name for s in expr.free_symbols}
    bad = names - allowed
    if bad:
        raise ExpressionError(f"{text!r} uses unknown variables {sorted(bad)}")
    undefined = [f for f in expr.atoms(sp.Function) if isinstance(f, sp.core.function.AppliedUndef)]
    if undefined:
        raise ExpressionError(f"{text!r} calls unknown functions {sorted(map(str, undefined))}")
    return expr


def _vectorize(fn: Callable, expr: sp.Expr, complex_out: bool) -> Callable:
    dtype = complex if complex_out else float

    def call(*args):
        args = [np.asarray(a) for a in args]
        shape = np.broadcast_shapes(*(a.shape for a in args)) if args else ()
        out = fn(*args)
        return np.broadcast_to(np.asarray(out, dtype=dtype), shape).copy()

    call.expr = expr  # type: ignore[attr-defined]
    return call


def profile_function(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Compile a real profile ``rho1(x)``."""
    expr = parse(text, ["x"])
    if expr.has(sp.I):
        raise ExpressionError(f"profile {text!r} must be real")
    return _vectorize(sp.lambdify((X,), expr, "numpy"), expr, complex_out=False)


def radial_function(text: str) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Compile a multi-radial part ``phi(x, y)`` (complex values allowed)."""
    expr = parse(text, ["x", "y"])
    return _vectorize(sp.lambdify((X, Y), expr, "numpy"), expr, complex_out=True)


def full_symbol(text: str) -> Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]:
    """Compile a general symbol in ``x, y, theta1, theta2`` (or ``z1, z2``).

    The result takes polar coordinates ``(x, y, theta1, theta2)``.
    """
    expr = parse(text, _SYMBOLS)
    expr = expr.subs({Z1: X * sp.exp(sp.I * T1), Z2: Y * sp.exp(sp.I * T2)})
    return _vectorize(sp.lambdify((X, Y, T1, T2), expr, "numpy"), expr, complex_out=True)
