"""Evaluator, aggregation, and builtin tests."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from declbot.engine import (
    NO_VALUE,
    AggregationError,
    BuiltinError,
    Decision,
    EvaluationError,
    Fact,
    FactSet,
    aggregate,
    call_builtin,
    evaluate,
    fold,
    run_robot_step,
    sort_key,
    values_equal,
)
from declbot.rulelang import parse_program, validate

from oracles import NO_RESULT, brute_force_aggregate
from programs import DISTANCE_RELAXATION_PROGRAM, OPEN_FIELD_PROGRAM


def _facts(predicate, rows):
    fs = FactSet()
    for row in rows:
        fs.add(predicate, row)
    return fs


def _parse(source):
    program = parse_program(source)
    assert validate(program) == []
    return program


# --- values -------------------------------------------------------------------


def test_value_total_order_type_ranks():
    ordered = [None, False, True, -1.0, 0.0, 2.5, "a", "b", [1.0], [1.0, 2.0], {"a": 1.0}]
    keys = [sort_key(v) for v in ordered]
    assert keys == sorted(keys)


def test_values_equal_distinguishes_bool_from_number():
    assert not values_equal(True, 1.0)
    assert not values_equal([True], [1.0])
    assert values_equal({"a": [1.0, "x"]}, {"a": [1.0, "x"]})


# --- evaluate -----------------------------------------------------------------


def test_disjunction_derives_both_rows():
    program = _parse("P(x: y) :- y == 1 | y == 2;")
    facts = evaluate(program, FactSet())
    assert facts.rows("P") == [{"x": 1.0}, {"x": 2.0}]


def test_open_field_program_hand_arithmetic():
    # WeightedAverage = (1 * -0.5 + 3 * 0.5) / 4 = 0.25;
    # left = 0.5 - 0.25 + 0.1, right = 0.5 + 0.25.
    radar = [
        {"angle": -0.5, "distance": 1.0, "object": "none", "label": ""},
        {"angle": 0.5, "distance": 3.0, "object": "none", "label": ""},
    ]
    inputs = _facts("Sensor", [{"robot_name": "r1", "sensor": {"radar": radar}}])
    facts = evaluate(_parse(OPEN_FIELD_PROGRAM), inputs)
    rows = facts.rows("Robot")
    assert len(rows) == 1
    desire = rows[0]["desire"]
    assert desire["left_engine"] == pytest.approx(0.35, abs=1e-15)
    assert desire["right_engine"] == pytest.approx(0.75, abs=1e-15)


def test_distance_relaxation_single_step():
    # Brute-force oracle: min over the three disjuncts per beacon.
    home_distance = {"A": 1.0, "B": 5.0}
    edges = {("A", "B"): 2.0}
    expected = {}
    beacons = set(home_distance) | {b for _, b in edges} | {"Home"}
    for beacon in beacons:
        candidates = []
        if beacon in home_distance:
            candidates.append(home_distance[beacon])
        if beacon == "Home":
            candidates.append(0.0)
        for (n, b), d in edges.items():
            if b == beacon and n in home_distance:
                candidates.append(home_distance[n] + d)
        if candidates:
            expected[beacon] = min(candidates)
    assert expected == {"A": 1.0, "B": 3.0, "Home": 0.0}

    inputs = FactSet()
    for beacon, d in home_distance.items():
        inputs.add("HomeDistance", {"arg0": beacon, "value": d})
    for (a, b), d in edges.items():
        inputs.add("D", {"arg0": a, "arg1": b, "value": d})
    facts = evaluate(_parse(DISTANCE_RELAXATION_PROGRAM), inputs)
    got = {row["arg0"]: row["value"] for row in facts.rows("PosteriorHomeDistance")}
    assert got == expected


def test_evaluate_is_deterministic():
    radar = [
        {"angle": a, "distance": d, "object": "none", "label": ""}
        for a, d in [(-1.0, 2.0), (0.5, 3.0), (1.5, 0.5)]
    ]
    inputs = _facts("Sensor", [{"robot_name": "r1", "sensor": {"radar": radar}}])
    program = _parse(OPEN_FIELD_PROGRAM)
    a = evaluate(program, inputs)
    b = evaluate(program, inputs)
    assert a == b
    assert [r for r in a.rows("Robot")] == [r for r in b.rows("Robot")]


def test_runtime_error_field_access_on_non_record():
    program = _parse("P(x: v.field) :- Q(v), v == v;\nQ(1);")
    with pytest.raises(EvaluationError) as exc:
        evaluate(program, FactSet())
    assert "field access" in str(exc.value)
    assert exc.value.predicate == "P"


def test_runtime_error_division_by_zero():
    program = _parse("P(x: 1 / z) :- z == 0;")
    with pytest.raises(EvaluationError) as exc:
        evaluate(program, FactSet())
    assert "division by zero" in str(exc.value)


def test_arithmetic_on_non_number_is_error():
    program = _parse('P(x: "a" + 1);')
    with pytest.raises(EvaluationError):
        evaluate(program, FactSet())


def test_rows_deduplicated_and_ordered():
    program = _parse("P(x: y) :- y == 2 | y == 1 | y == 2;")
    facts = evaluate(program, FactSet())
    assert facts.rows("P") == [{"x": 1.0}, {"x": 2.0}]


def test_functional_rule_with_body_materializes_rows():
    program = _parse("Dist(a, b) = d :- Edge(x: a, y: b, d: d);\nEdge(x: 1, y: 2, d: 7);")
    facts = evaluate(program, FactSet())
    assert facts.rows("Dist") == [{"arg0": 1.0, "arg1": 2.0, "value": 7.0}]


def test_membership_over_non_list_is_error():
    program = _parse("P(x:) :- x in 5;")
    with pytest.raises(EvaluationError):
        evaluate(program, FactSet())


def test_zero_key_list_aggregation_of_empty_body():
    program = _parse("Empty() List= v :- Q(v);\nQ(x: 0) :- 1 == 2;")
    facts = evaluate(program, FactSet())
    assert facts.rows("Empty") == [{"value": []}]


def test_function_call_inside_aggregation_body_joins():
    source = (
        "Known(a) = d :- Table(k: a, d: d);\n"
        'Table(k: "x", d: 4);\n'
        'Table(k: "y", d: 1);\n'
        "Best() = Min { Known(n) :- n in [\"x\", \"y\", \"z\"] };"
    )
    facts = evaluate(_parse(source), FactSet())
    assert facts.rows("Best") == [{"value": 1.0}]


# --- aggregate ------------------------------------------------------------------


def test_weighted_average_direct():
    assert fold("WeightedAverage", [(1.0, -0.5), (3.0, 0.5)]) == pytest.approx(0.25)


def test_weighted_average_single_and_symmetric():
    assert fold("WeightedAverage", [(2.0, 0.7)]) == pytest.approx(0.7)
    assert fold("WeightedAverage", [(2.0, -0.4), (2.0, 0.4)]) == pytest.approx(0.0)


def test_weighted_average_zero_weight_is_no_value():
    assert fold("WeightedAverage", [(0.0, 1.0), (0.0, 2.0)]) is NO_VALUE


def test_min_selects_zero():
    assert fold("Min", [(None, 5.0), (None, 0.0), (None, 3.0)]) == 0.0


def test_empty_group_defaults():
    assert fold("Sum", []) == 0.0
    assert fold("Count", []) == 0.0
    assert fold("List", []) == []
    for agg in ("Min", "Max", "Avg", "ArgMin", "ArgMax", "WeightedAverage"):
        assert fold(agg, []) is NO_VALUE


def test_aggregate_over_groups():
    groups = {"a": [(None, 3.0), (None, 1.0)], "b": []}
    assert aggregate("Min", groups) == {"a": 1.0}
    assert aggregate("Count", groups) == {"a": 2.0, "b": 0.0}


def test_argmin_tie_break_uses_value_order():
    pairs = [(1.0, "zebra"), (1.0, "apple"), (2.0, "aaa")]
    assert fold("ArgMin", pairs) == "apple"


def test_non_numeric_min_is_error():
    with pytest.raises(AggregationError):
        fold("Min", [(None, "x")])


@settings(max_examples=300)
@given(
    st.sampled_from(
        ["Min", "Max", "Sum", "Count", "Avg", "List", "ArgMin", "ArgMax", "WeightedAverage"]
    ),
    st.lists(
        st.tuples(
            st.floats(min_value=0.1, max_value=100, allow_nan=False),
            st.floats(min_value=-1000, max_value=1000, allow_nan=False),
        ),
        max_size=8,
    ),
)
def test_aggregations_match_brute_force(agg_name, pairs):
    got = fold(agg_name, list(pairs))
    want = brute_force_aggregate(agg_name, list(pairs))
    if want is NO_RESULT:
        assert got is NO_VALUE
    elif agg_name in ("Sum", "Avg", "WeightedAverage"):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
    else:
        assert got == want


@settings(max_examples=200)
@given(
    st.lists(
        st.tuples(
            st.floats(min_value=0.01, max_value=50, allow_nan=False),
            st.floats(min_value=-100, max_value=100, allow_nan=False),
        ),
        min_size=1,
        max_size=8,
    ),
    st.floats(min_value=0.001, max_value=1000, allow_nan=False),
)
def test_weighted_average_scale_invariance_and_bounds(pairs, c):
    base = fold("WeightedAverage", list(pairs))
    scaled = fold("WeightedAverage", [(c * w, v) for w, v in pairs])
    assert scaled == pytest.approx(base, rel=1e-12, abs=1e-12)
    values = [v for _, v in pairs]
    assert min(values) - 1e-9 <= base <= max(values) + 1e-9


@settings(max_examples=200)
@given(
    st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=10, allow_nan=False),
            st.text(max_size=4),
        ),
        min_size=1,
        max_size=8,
    ),
    st.randoms(),
)
def test_argmin_permutation_invariance(pairs, rng):
    shuffled = list(pairs)
    rng.shuffle(shuffled)
    assert fold("ArgMin", list(pairs)) == fold("ArgMin", shuffled)


def test_relaxation_step_contraction():
    # With nonnegative edges, one relaxation never increases a known distance.
    rng = random.Random(7)
    program = _parse(DISTANCE_RELAXATION_PROGRAM)
    for _ in range(25):
        beacons = [f"b{i}" for i in range(rng.randint(2, 6))] + ["Home"]
        prior = {b: rng.uniform(0, 10) for b in rng.sample(beacons, rng.randint(1, len(beacons)))}
        inputs = FactSet()
        for b, d in prior.items():
            inputs.add("HomeDistance", {"arg0": b, "value": d})
        for _ in range(rng.randint(0, 8)):
            a, b = rng.sample(beacons, 2)
            inputs.add("D", {"arg0": a, "arg1": b, "value": rng.uniform(0, 5)})
        facts = evaluate(program, inputs)
        posterior = {r["arg0"]: r["value"] for r in facts.rows("PosteriorHomeDistance")}
        for b, d in prior.items():
            assert posterior[b] <= d + 1e-12


# --- builtins -------------------------------------------------------------------


def test_builtin_examples():
    assert call_builtin("Sqrt", [9.0]) == 3.0
    assert call_builtin("Atan2", [1.0, 0.0]) == pytest.approx(math.pi / 2)
    assert call_builtin("Size", [[]]) == 0.0
    assert call_builtin("Range", [3.0]) == [0.0, 1.0, 2.0]
    assert call_builtin("Pi", []) == math.pi
    assert call_builtin("Least", [3.0, 1.0]) == 1.0
    assert call_builtin("Greatest", [3.0, 1.0]) == 3.0
    assert call_builtin("Floor", [2.7]) == 2.0


def test_builtin_errors():
    with pytest.raises(BuiltinError):
        call_builtin("Sqrt", [-1.0])
    with pytest.raises(BuiltinError):
        call_builtin("Sqrt", [1.0, 2.0])
    with pytest.raises(BuiltinError):
        call_builtin("Nope", [1.0])


def test_edge_distance_examples():
    assert call_builtin("EdgeDistance", [3.0, 4.0, math.pi / 2]) == pytest.approx(5.0)
    assert call_builtin("EdgeDistance", [2.0, 5.0, 0.0]) == pytest.approx(3.0)
    assert call_builtin("EdgeDistance", [1.0, 1.0, math.pi / 3]) == pytest.approx(1.0)


# --- run_robot_step ---------------------------------------------------------------


def _symmetric_radar(count=16, distance=6.0):
    rays = []
    for k in range(count // 2):
        angle = (k + 0.5) * (2 * math.pi / count)
        for a in (angle, -angle):
            rays.append({"angle": a, "distance": distance, "object": "none", "label": ""})
    return rays


def test_robot_step_symmetric_radar():
    program = _parse(OPEN_FIELD_PROGRAM)
    sensor = Fact("Sensor", {"robot_name": "r1", "sensor": {"radar": _symmetric_radar()}})
    memory = [Fact("Memory", {"robot_name": "r1", "memory": None})]
    decision = run_robot_step(program, "r1", sensor, memory)
    assert decision.error is None
    assert decision.desire["left_engine"] == pytest.approx(0.6, abs=1e-12)
    assert decision.desire["right_engine"] == pytest.approx(0.5, abs=1e-12)
    assert decision.memory == "I am a robot"


def test_robot_step_ambiguous_rows():
    source = (
        'Robot(robot_name: "r1", desire: d, memory: 1) :- d == {left_engine: 0, right_engine: 0};\n'
        'Robot(robot_name: "r1", desire: d, memory: 2) :- d == {left_engine: 0, right_engine: 0};'
    )
    program = _parse(source)
    sensor = Fact("Sensor", {"robot_name": "r1", "sensor": {"radar": []}})
    decision = run_robot_step(program, "r1", sensor, [Fact("Memory", {"robot_name": "r1", "memory": 7.0})])
    assert decision.error is not None and "ambiguous" in decision.error
    assert decision.desire == {"left_engine": 0.0, "right_engine": 0.0}
    assert decision.memory == 7.0  # unchanged


def test_robot_step_no_rows():
    program = _parse('Robot(robot_name: "other", desire: {left_engine: 0, right_engine: 0}, memory: 0);')
    sensor = Fact("Sensor", {"robot_name": "r1", "sensor": {"radar": []}})
    decision = run_robot_step(program, "r1", sensor, [Fact("Memory", {"robot_name": "r1", "memory": None})])
    assert decision.error is not None
    assert decision.desire == {"left_engine": 0.0, "right_engine": 0.0}


def test_robot_step_propagates_evaluation_errors():
    program = _parse(
        "Robot(robot_name:, desire: {left_engine: 1 / z, right_engine: 0}, memory: 0) :-\n"
        "  Sensor(robot_name:, sensor:), z == 0;"
    )
    sensor = Fact("Sensor", {"robot_name": "r1", "sensor": {"radar": []}})
    decision = run_robot_step(program, "r1", sensor, [Fact("Memory", {"robot_name": "r1", "memory": None})])
    assert decision.error is not None and "division by zero" in decision.error
