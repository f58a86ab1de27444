"""Small integer/boolean expressions over named variables.

Parsing rides on Python's ast module: parse once in eval mode, whitelist
the node types, then interpret against a plain name-to-int mapping.
Supported: integer literals, variables, + - * // %, unary -, comparisons
(< <= > >= == !=, chained allowed), and/or/not, parentheses.
"""

from __future__ import annotations

import ast
from typing import Mapping

__all__ = ["Expr", "ExprError"]


class ExprError(ValueError):
    """Malformed expression text or a disallowed construct."""


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.FloorDiv: lambda a, b: a // b,
    ast.Mod: lambda a, b: a % b,
}

_CMPOPS = {
    ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b,
    ast.Gt: lambda a, b: a > b,
    ast.GtE: lambda a, b: a >= b,
    ast.Eq: lambda a, b: a == b,
    ast.NotEq: lambda a, b: a != b,
}


def _collect_names(node: ast.AST, names: set) -> None:
    if isinstance(node, ast.Name):
        names.add(node.id)
    for child in ast.iter_child_nodes(node):
        _collect_names(child, names)


def _validate(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body)
    elif isinstance(node, ast.Name):
        pass
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, bool)):
            raise ExprError(f"only integer literals allowed, got {node.value!r}")
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ExprError(f"operator not allowed: {ast.dump(node.op)}")
        _validate(node.left)
        _validate(node.right)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.Not)):
            raise ExprError(f"operator not allowed: {ast.dump(node.op)}")
        _validate(node.operand)
    elif isinstance(node, ast.BoolOp):
        for v in node.values:
            _validate(v)
    elif isinstance(node, ast.Compare):
        for op in node.ops:
            if type(op) not in _CMPOPS:
                raise ExprError(f"comparison not allowed: {ast.dump(op)}")
        _validate(node.left)
        for c in node.comparators:
            _validate(c)
    else:
        raise ExprError(f"construct not allowed: {type(node).__name__}")


def _run(node: ast.AST, env: Mapping[str, int]):
    if isinstance(node, ast.Expression):
        return _run(node.body, env)
    if isinstance(node, ast.Name):
        try:
            return env[node.id]
        except KeyError:
            raise ExprError(f"unknown variable: {node.id}") from None
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_run(node.left, env), _run(node.right, env))
    if isinstance(node, ast.UnaryOp):
        v = _run(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else (not v)
    if isinstance(node, ast.BoolOp):
        if isinstance(node.op, ast.And):
            return all(_run(v, env) for v in node.values)
        return any(_run(v, env) for v in node.values)
    if isinstance(node, ast.Compare):
        left = _run(node.left, env)
        for op, rhs in zip(node.ops, node.comparators):
            right = _run(rhs, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    raise ExprError(f"construct not allowed: {type(node).__name__}")


class Expr:
    """A parsed expression with a normalized source text."""

    __slots__ = ("text", "names", "_tree")

    def __init__(self, text: str):
        try:
            tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ExprError(f"cannot parse expression {text!r}: {exc.msg}") from None
        _validate(tree)
        names: set = set()
        _collect_names(tree, names)
        self.text = " ".join(text.split())
        self.names = frozenset(names)
        self._tree = tree

    def eval(self, env: Mapping[str, int]):
        """Evaluate against a total variable assignment.

        Raises ZeroDivisionError for // and % by zero; callers that build
        partial relations treat that as an absent result.
        """
        return _run(self._tree, env)

    def negated(self) -> "Expr":
        return Expr(f"not ({self.text})")

    def __repr__(self) -> str:
        return f"Expr({self.text!r})"


def as_expr(expr) -> Expr:
    return expr if isinstance(expr, Expr) else Expr(str(expr))
