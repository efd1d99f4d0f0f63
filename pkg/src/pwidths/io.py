"""JSON geometry input and the small exact-expression language used in it.

Numbers may be JSON numbers or strings such as ``"sqrt(3)/2"``; strings accept
integers, decimals, ``sqrt``, ``+ - * /`` and parentheses.
"""

from __future__ import annotations

import ast
import json
import math
from pathlib import Path

from .geometry import ConvexPolygon, Tetrahedron


class ParseError(ValueError):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        return float(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id == "sqrt"
        and len(node.args) == 1
        and not node.keywords
    ):
        v = _eval(node.args[0])
        if v < 0:
            raise ParseError("sqrt of a negative number")
        return math.sqrt(v)
    raise ParseError(f"unsupported token in expression: {ast.dump(node)}")


def parse_number(value) -> float:
    """Evaluate a JSON number or an expression string to a float."""
    if isinstance(value, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            tree = ast.parse(value.strip(), mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse {value!r}") from exc
        try:
            out = _eval(tree)
        except ZeroDivisionError as exc:
            raise ParseError(f"division by zero in {value!r}") from exc
    else:
        raise ParseError(f"expected a number or expression, got {type(value).__name__}")
    if not math.isfinite(out):
        raise ParseError(f"non-finite value {value!r}")
    return out


def _points(rows, dim):
    if not isinstance(rows, list):
        raise ParseError("vertex list must be an array")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"each vertex needs {dim} coordinates")
        out.append(tuple(parse_number(v) for v in row))
    return out


def polygon_from_json(doc: dict) -> ConvexPolygon:
    if "vertices" not in doc:
        raise ParseError('missing "vertices"')
    return ConvexPolygon(_points(doc["vertices"], 2))


def tetrahedron_from_json(doc: dict) -> Tetrahedron:
    if "vertices3" not in doc:
        raise ParseError('missing "vertices3"')
    return Tetrahedron(_points(doc["vertices3"], 3))


def load_geometry(path) -> ConvexPolygon | Tetrahedron:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    if "vertices3" in doc:
        return tetrahedron_from_json(doc)
    return polygon_from_json(doc)
