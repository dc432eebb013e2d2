"""Dynamically typed runtime values and their canonical total order.

A Value is one of: None, bool, float, str, list[Value], dict[str, Value].
The total order ranks types null < bool < number < string < list < record;
within a type: false < true, numeric order, code-point order, element-wise
order, and sorted-field-name order for records. `sort_key` maps a value to
a plain tuple realizing that order; the tuples are also hashable, so they
double as deduplication keys.
"""

from __future__ import annotations

import math
from typing import Any, Union

Value = Union[None, bool, float, str, list, dict]

_RANK_NULL = 0
_RANK_BOOL = 1
_RANK_NUMBER = 2
_RANK_STRING = 3
_RANK_LIST = 4
_RANK_RECORD = 5


def sort_key(value: Value) -> tuple:
    if value is None:
        return (_RANK_NULL,)
    t = type(value)
    if t is bool:
        return (_RANK_BOOL, 1 if value else 0)
    if t is float:
        if math.isnan(value):
            return (_RANK_NUMBER, 1, 0.0)
        return (_RANK_NUMBER, 0, value)
    if t is int:  # normalized inputs should not contain ints, but be safe
        return (_RANK_NUMBER, 0, float(value))
    if t is str:
        return (_RANK_STRING, value)
    if t is list:
        return (_RANK_LIST, tuple(sort_key(x) for x in value))
    if t is dict:
        return (_RANK_RECORD, tuple((k, sort_key(value[k])) for k in sorted(value)))
    raise TypeError(f"not a Value: {value!r}")


def values_equal(a: Value, b: Value) -> bool:
    """Structural equality; number and bool never compare equal."""
    if a is b:
        return True
    if type(a) is not type(b):
        # int/float mix can appear through untyped callers
        if isinstance(a, (int, float)) and isinstance(b, (int, float)):
            if isinstance(a, bool) or isinstance(b, bool):
                return False
            return float(a) == float(b)
        return False
    if isinstance(a, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        if len(a) != len(b):
            return False
        for k, v in a.items():
            if k not in b or not values_equal(v, b[k]):
                return False
        return True
    return a == b


def value_compare(a: Value, b: Value) -> int:
    """-1 / 0 / +1 under the canonical total order."""
    ka, kb = sort_key(a), sort_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def is_number(value: Value) -> bool:
    return type(value) is float or (type(value) is int and not isinstance(value, bool))


def make_number(x: float) -> float:
    """Normalize numbers: plain float, -0.0 collapsed to 0.0."""
    x = float(x)
    return 0.0 if x == 0.0 else x


def normalize_value(value: Any) -> Value:
    """Deep-normalize arbitrary JSON-ish data into a Value (ints become
    floats, tuples become lists)."""
    if value is None or type(value) is bool or type(value) is str:
        return value
    if isinstance(value, bool):
        return bool(value)
    if isinstance(value, (int, float)):
        return make_number(value)
    if isinstance(value, (list, tuple)):
        return [normalize_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): normalize_value(v) for k, v in value.items()}
    raise TypeError(f"cannot normalize into a Value: {value!r}")


def to_jsonable(value: Value, nonfinite_to_null: bool = True) -> Any:
    """Convert to JSON-serializable data; record fields emitted in sorted
    order so serialization is canonical. Non-finite numbers have no strict
    JSON form and become null."""
    if value is None or type(value) is bool or type(value) is str:
        return value
    if type(value) in (float, int):
        v = float(value)
        if nonfinite_to_null and not math.isfinite(v):
            return None
        return v
    if type(value) is list:
        return [to_jsonable(v, nonfinite_to_null) for v in value]
    if type(value) is dict:
        return {k: to_jsonable(value[k], nonfinite_to_null) for k in sorted(value)}
    raise TypeError(f"not a Value: {value!r}")
