"""Builtin functions callable from rule programs."""

from __future__ import annotations

import math

from ..rulelang.analysis import BUILTIN_ARITIES
from .values import Value, is_number, make_number, sort_key


class BuiltinError(Exception):
    pass


def _num(name: str, v: Value) -> float:
    if not is_number(v):
        raise BuiltinError(f"{name} expects a number, got {type(v).__name__}")
    return float(v)


def edge_distance(d1: float, d2: float, delta_angle: float) -> float:
    """Distance between the endpoints of two rays from one origin with
    lengths d1, d2 separated by delta_angle (law of cosines); clamped at 0
    against negative rounding."""
    sq = d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * math.cos(delta_angle)
    return math.sqrt(sq) if sq > 0.0 else 0.0


def call_builtin(name: str, args: list[Value]) -> Value:
    """Apply a builtin by name. Raises BuiltinError on wrong arity, bad
    argument types, or domain errors (e.g. Sqrt of a negative)."""
    arity = BUILTIN_ARITIES.get(name)
    if arity is None:
        raise BuiltinError(f"unknown builtin '{name}'")
    if len(args) not in arity:
        raise BuiltinError(f"{name} called with {len(args)} argument(s)")

    if name == "Sqrt":
        x = _num(name, args[0])
        if x < 0:
            raise BuiltinError("Sqrt of a negative number")
        return make_number(math.sqrt(x))
    if name == "Abs":
        return make_number(abs(_num(name, args[0])))
    if name == "Sin":
        return make_number(math.sin(_num(name, args[0])))
    if name == "Cos":
        return make_number(math.cos(_num(name, args[0])))
    if name == "Atan2":
        return make_number(math.atan2(_num(name, args[0]), _num(name, args[1])))
    if name == "Floor":
        return make_number(math.floor(_num(name, args[0])))
    if name == "Pi":
        return math.pi
    if name == "Least":
        return min((_num(name, a) for a in args))
    if name == "Greatest":
        return max((_num(name, a) for a in args))
    if name == "Size":
        if type(args[0]) is not list:
            raise BuiltinError("Size expects a list")
        return float(len(args[0]))
    if name == "Range":
        n = _num(name, args[0])
        if n < 0 or n != int(n):
            raise BuiltinError("Range expects a nonnegative integer")
        return [float(i) for i in range(int(n))]
    if name == "EdgeDistance":
        return make_number(
            edge_distance(_num(name, args[0]), _num(name, args[1]), _num(name, args[2]))
        )
    raise BuiltinError(f"unknown builtin '{name}'")
