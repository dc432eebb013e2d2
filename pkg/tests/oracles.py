"""Independent brute-force reference implementations used as test oracles.

These deliberately avoid the engine's code paths: plain loops, no shared
helpers beyond the canonical value order (which is part of the contract
being checked).
"""

from __future__ import annotations

import heapq
import math


def type_rank(v) -> int:
    if v is None:
        return 0
    if type(v) is bool:
        return 1
    if type(v) in (int, float):
        return 2
    if type(v) is str:
        return 3
    if type(v) is list:
        return 4
    return 5


def order_key(v):
    r = type_rank(v)
    if r == 0:
        return (0,)
    if r == 1:
        return (1, 1 if v else 0)
    if r == 2:
        return (2, 1, 0.0) if isinstance(v, float) and math.isnan(v) else (2, 0, float(v))
    if r == 3:
        return (3, v)
    if r == 4:
        return (4, tuple(order_key(x) for x in v))
    return (5, tuple((k, order_key(v[k])) for k in sorted(v)))


NO_RESULT = object()


def brute_force_aggregate(agg_name: str, pairs: list[tuple]) -> object:
    """Reference fold over (weight, value) pairs; returns NO_RESULT where the
    aggregation produces nothing."""
    values = [v for _, v in pairs]
    if agg_name == "Count":
        return float(len(values))
    if agg_name == "Sum":
        total = 0.0
        for v in values:
            total += v
        return total
    if agg_name == "List":
        return sorted(values, key=order_key)
    if not pairs:
        return NO_RESULT
    if agg_name == "Min":
        best = values[0]
        for v in values[1:]:
            if v < best:
                best = v
        return best
    if agg_name == "Max":
        best = values[0]
        for v in values[1:]:
            if v > best:
                best = v
        return best
    if agg_name == "Avg":
        total = 0.0
        for v in values:
            total += v
        return total / len(values)
    if agg_name == "ArgMin":
        best_w, best_v = None, None
        for w, v in pairs:
            if best_w is None or w < best_w or (w == best_w and order_key(v) < order_key(best_v)):
                best_w, best_v = w, v
        return best_v
    if agg_name == "ArgMax":
        best_w, best_v = None, None
        for w, v in pairs:
            if best_w is None or w > best_w or (w == best_w and order_key(v) < order_key(best_v)):
                best_w, best_v = w, v
        return best_v
    if agg_name == "WeightedAverage":
        sw = 0.0
        swx = 0.0
        for w, v in pairs:
            sw += w
            swx += w * v
        if sw == 0.0:
            return NO_RESULT
        return swx / sw
    raise ValueError(agg_name)


def dijkstra(edges: dict[tuple[str, str], float], source: str) -> dict[str, float]:
    """Shortest distances from `source` over an undirected weighted graph
    given as {(a, b): length}."""
    adj: dict[str, list[tuple[str, float]]] = {}
    for (a, b), d in edges.items():
        adj.setdefault(a, []).append((b, d))
        adj.setdefault(b, []).append((a, d))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > dist.get(node, math.inf):
            continue
        for nxt, w in adj.get(node, []):
            nd = d + w
            if nd < dist.get(nxt, math.inf):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    return dist
