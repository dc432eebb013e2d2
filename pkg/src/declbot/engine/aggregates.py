"""Aggregation functions over (weight, value) pairs.

Empty-group behavior: Sum -> 0, Count -> 0, List -> []; every other
aggregation yields no result (NO_VALUE), as does WeightedAverage with zero
total weight. ArgMin/ArgMax break ordering ties by the canonical total
order on the candidate value, so input order never matters.
"""

from __future__ import annotations

from typing import Any, Iterable, Optional

from .values import Value, is_number, make_number, sort_key


class AggregationError(Exception):
    pass


class _NoValue:
    __slots__ = ()

    def __repr__(self):
        return "NO_VALUE"


NO_VALUE = _NoValue()

AGGREGATIONS = (
    "Min",
    "Max",
    "Sum",
    "Count",
    "Avg",
    "List",
    "ArgMin",
    "ArgMax",
    "WeightedAverage",
)

Pair = tuple[Optional[float], Value]


def _numeric_values(agg: str, pairs: Iterable[Pair]) -> list[float]:
    out = []
    for _, v in pairs:
        if not is_number(v):
            raise AggregationError(f"{agg} requires numeric values, got {type(v).__name__}")
        out.append(float(v))
    return out


def _arg_pairs(agg: str, pairs: Iterable[Pair]) -> list[tuple[float, Value]]:
    out = []
    for w, v in pairs:
        if w is None or not is_number(w):
            raise AggregationError(f"{agg} requires a numeric ordering weight")
        out.append((float(w), v))
    return out


def fold(agg_name: str, pairs: list[Pair]):
    """Fold one group; returns a Value or NO_VALUE."""
    if agg_name == "Count":
        return float(len(pairs))
    if agg_name == "Sum":
        return make_number(sum(_numeric_values(agg_name, pairs)))
    if agg_name == "List":
        return sorted((v for _, v in pairs), key=sort_key)
    if not pairs:
        return NO_VALUE
    if agg_name == "Min":
        return min(_numeric_values(agg_name, pairs))
    if agg_name == "Max":
        return max(_numeric_values(agg_name, pairs))
    if agg_name == "Avg":
        xs = _numeric_values(agg_name, pairs)
        return make_number(sum(xs) / len(xs))
    if agg_name == "ArgMin":
        best = min(_arg_pairs(agg_name, pairs), key=lambda p: (p[0], sort_key(p[1])))
        return best[1]
    if agg_name == "ArgMax":
        best = min(_arg_pairs(agg_name, pairs), key=lambda p: (-p[0], sort_key(p[1])))
        return best[1]
    if agg_name == "WeightedAverage":
        total_w = 0.0
        total_wx = 0.0
        for w, v in pairs:
            if w is None or not is_number(w) or not is_number(v):
                raise AggregationError("WeightedAverage requires numeric weight -> value pairs")
            total_w += float(w)
            total_wx += float(w) * float(v)
        if total_w == 0.0:
            return NO_VALUE
        return make_number(total_wx / total_w)
    raise AggregationError(f"unknown aggregation '{agg_name}'")


def aggregate(agg_name: str, groups: dict[Any, list[Pair]]) -> dict[Any, Value]:
    """Fold every group; keys whose fold yields no result are omitted."""
    out: dict[Any, Value] = {}
    for key, pairs in groups.items():
        result = fold(agg_name, pairs)
        if result is not NO_VALUE:
            out[key] = result
    return out
