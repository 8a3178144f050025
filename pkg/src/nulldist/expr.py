"""A small arithmetic expression language for warpings and time functions in scenario files.

Grammar: numbers, the variable t, the constants pi and e, the operators
+ - * / and ^ (power, ** also accepted), parentheses, and the calls
min(a, b, ...), max(a, b, ...), sqrt, exp, sin, cos and
piecewise(c1, v1, c2, v2, ..., v_else), which returns the first v_k whose
breakpoint condition t < c_k holds. Parsing goes through Python's own
parser and a whitelist of node types; nothing is evaluated with eval.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

from .errors import ScenarioError

_CONSTANTS = {"pi": math.pi, "e": math.e}
_UNARY_CALLS = {"sqrt": math.sqrt, "exp": math.exp, "sin": math.sin, "cos": math.cos}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}

Node = Callable[[float], float]


def _compile(node: ast.AST, source: str) -> Node:
    if isinstance(node, ast.Expression):
        return _compile(node.body, source)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        v = float(node.value)
        return lambda t: v
    if isinstance(node, ast.Name):
        if node.id == "t":
            return lambda t: t
        if node.id in _CONSTANTS:
            v = _CONSTANTS[node.id]
            return lambda t: v
        raise ScenarioError(f"unknown name {node.id!r} in expression {source!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, source)
        if isinstance(node.op, ast.USub):
            return lambda t: -inner(t)
        return inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _compile(node.left, source), _compile(node.right, source)
        return lambda t: op(left(t), right(t))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        args = [_compile(a, source) for a in node.args]
        if name in ("min", "max"):
            if len(args) < 2:
                raise ScenarioError(f"{name} needs at least two arguments in {source!r}")
            agg = min if name == "min" else max
            return lambda t: agg(a(t) for a in args)
        if name in _UNARY_CALLS:
            if len(args) != 1:
                raise ScenarioError(f"{name} takes one argument in {source!r}")
            fn, (arg,) = _UNARY_CALLS[name], args
            return lambda t: fn(arg(t))
        if name == "piecewise":
            if len(args) < 3 or len(args) % 2 == 0:
                raise ScenarioError(f"piecewise needs (c1, v1, ..., v_else) in {source!r}")
            pairs = [(args[k], args[k + 1]) for k in range(0, len(args) - 1, 2)]
            default = args[-1]

            def pw(t: float) -> float:
                for c, v in pairs:
                    if t < c(t):
                        return v(t)
                return default(t)

            return pw
        raise ScenarioError(f"unknown function {name!r} in expression {source!r}")
    raise ScenarioError(f"unsupported syntax {type(node).__name__} in expression {source!r}")


def parse_expression(source: str) -> Node:
    """Compile an expression in t into a float function."""
    if not isinstance(source, str) or not source.strip():
        raise ScenarioError("expression must be a nonempty string")
    try:
        # ^ is power here; as ** it also gets the usual precedence and right associativity
        tree = ast.parse(source.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ScenarioError(f"cannot parse expression {source!r}: {exc.msg}") from None
    fn = _compile(tree, source)

    def evaluate(t: float) -> float:
        try:
            return float(fn(float(t)))
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise ScenarioError(f"expression {source!r} failed at t={t}: {exc}") from None

    return evaluate
