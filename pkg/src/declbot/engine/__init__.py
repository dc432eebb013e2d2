"""Bottom-up evaluator for LogiCore programs: facts, aggregations, builtins,
and per-robot decisions."""

from .aggregates import AGGREGATIONS, NO_VALUE, AggregationError, aggregate, fold
from .builtins import BuiltinError, call_builtin, edge_distance
from .evaluator import (
    ZERO_DESIRE,
    CompiledProgram,
    Decision,
    EvaluationError,
    Fact,
    FactSet,
    compile_program,
    evaluate,
    run_robot_step,
)
from .values import (
    Value,
    is_number,
    make_number,
    normalize_value,
    sort_key,
    to_jsonable,
    value_compare,
    values_equal,
)

__all__ = [
    "AGGREGATIONS",
    "NO_VALUE",
    "AggregationError",
    "BuiltinError",
    "CompiledProgram",
    "Decision",
    "EvaluationError",
    "Fact",
    "FactSet",
    "Value",
    "ZERO_DESIRE",
    "aggregate",
    "call_builtin",
    "compile_program",
    "edge_distance",
    "evaluate",
    "fold",
    "is_number",
    "make_number",
    "normalize_value",
    "run_robot_step",
    "sort_key",
    "to_jsonable",
    "value_compare",
    "values_equal",
]
