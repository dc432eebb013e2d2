"""Bottom-up evaluation of validated LogiCore programs.

Predicates are materialized one at a time in dependency order (programs are
non-recursive, so a single pass per predicate suffices). Within a rule,
conjuncts apply left to right over a growing set of variable bindings;
disjuncts contribute solutions independently. Derived rows are deduplicated
structurally and iterated in the canonical value order, which makes output
independent of join order.

For speed, compile_program lowers every rule once and turns expressions and
literals into Python closures; evaluation then runs closures over plain
dict bindings.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Callable, Optional

from ..rulelang.analysis import (
    BUILTIN_NAMES,
    KIND_FUNCTION,
    FlatRule,
    classify_predicates,
    evaluation_order,
    function_definitions,
    lower_program,
)
from ..rulelang.ast import (
    Aggregate,
    BinaryOp,
    Call,
    Const,
    EqualityLiteral,
    FieldAccess,
    GuardLiteral,
    ListExpr,
    MembershipLiteral,
    PredicateLiteral,
    Program,
    RecordExpr,
    Span,
    UnaryOp,
    Var,
    AGGREGATING,
    FUNCTIONAL,
    head_arg_fields,
    literal_arg_fields,
)
from .aggregates import NO_VALUE, AggregationError, fold
from .builtins import BuiltinError, call_builtin
from .values import Value, is_number, make_number, sort_key, value_compare, values_equal

ZERO_DESIRE = {"left_engine": 0.0, "right_engine": 0.0}

_UNBOUND = object()


class EvaluationError(Exception):
    def __init__(self, message: str, predicate: Optional[str] = None, span: Optional[Span] = None):
        self.message = message
        self.predicate = predicate
        self.span = span
        where = ""
        if predicate:
            where = f" (in rule for '{predicate}'"
            if span:
                where += f" at line {span[0]}, column {span[1]}"
            where += ")"
        super().__init__(message + where)


@dataclass(frozen=True)
class Fact:
    predicate: str
    row: dict


@dataclass
class Decision:
    """Per-robot output of one evaluation round."""

    desire: dict
    memory: Value
    error: Optional[str] = None


class FactSet:
    """Deduplicated rows per predicate, iterated in canonical order."""

    def __init__(self):
        self._rows: dict[str, dict[tuple, dict]] = {}

    @classmethod
    def _from_tables(cls, tables: dict[str, dict[tuple, dict]]) -> "FactSet":
        fs = cls()
        fs._rows = tables
        return fs

    def add(self, predicate: str, row: dict) -> None:
        self._rows.setdefault(predicate, {})[sort_key(row)] = row

    def add_fact(self, fact: Fact) -> None:
        self.add(fact.predicate, fact.row)

    def predicates(self) -> list[str]:
        return sorted(self._rows)

    def rows(self, predicate: str) -> list[dict]:
        table = self._rows.get(predicate)
        if not table:
            return []
        return [table[k] for k in sorted(table)]

    def __contains__(self, predicate: str) -> bool:
        return predicate in self._rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactSet):
            return NotImplemented
        if set(self._rows) != set(other._rows):
            return False
        return all(sorted(self._rows[p]) == sorted(other._rows[p]) for p in self._rows)

    def __repr__(self):
        parts = ", ".join(f"{p}({len(self._rows[p])})" for p in self.predicates())
        return f"FactSet[{parts}]"


def _type_name(v) -> str:
    if v is None:
        return "null"
    return {bool: "bool", float: "number", int: "number", str: "string", list: "list", dict: "record"}[
        type(v)
    ]


# --- expression compilation -----------------------------------------------------
#
# A compiled expression is a closure fn(bindings, relations) -> Value|NO_VALUE.
# NO_VALUE (empty aggregation / unmatched lookup) propagates outward and makes
# the enclosing binding attempt fail instead of erroring.


class _Compiler:
    def __init__(self, compiled: "CompiledProgram"):
        self.compiled = compiled

    # -- expressions --------------------------------------------------------

    def expr(self, node) -> Callable:
        t = type(node)
        if t is Const:
            v = node.value
            return lambda b, rel: v
        if t is Var:
            name = node.name
            def var_fn(b, rel, _name=name):
                v = b.get(_name, _UNBOUND)
                if v is _UNBOUND:
                    raise EvaluationError(f"unbound variable '{_name}'")
                return v
            return var_fn
        if t is FieldAccess:
            base_fn = self.expr(node.base)
            field = node.field
            def field_fn(b, rel):
                base = base_fn(b, rel)
                if base is NO_VALUE:
                    return NO_VALUE
                if type(base) is not dict:
                    raise EvaluationError(f"field access '.{field}' on {_type_name(base)}")
                if field not in base:
                    raise EvaluationError(f"record has no field '{field}'")
                return base[field]
            return field_fn
        if t is UnaryOp:
            operand_fn = self.expr(node.operand)
            def neg_fn(b, rel):
                v = operand_fn(b, rel)
                if v is NO_VALUE:
                    return NO_VALUE
                if not is_number(v):
                    raise EvaluationError(f"unary '-' on {_type_name(v)}")
                return make_number(-v)
            return neg_fn
        if t is BinaryOp:
            return self._binary(node)
        if t is RecordExpr:
            field_fns = [(f, self.expr(e)) for f, e in node.fields]
            def record_fn(b, rel):
                out = {}
                for f, fn in field_fns:
                    v = fn(b, rel)
                    if v is NO_VALUE:
                        return NO_VALUE
                    out[f] = v
                return out
            return record_fn
        if t is ListExpr:
            item_fns = [self.expr(e) for e in node.items]
            def list_fn(b, rel):
                out = []
                for fn in item_fns:
                    v = fn(b, rel)
                    if v is NO_VALUE:
                        return NO_VALUE
                    out.append(v)
                return out
            return list_fn
        if t is Call:
            return self._call(node)
        if t is Aggregate:
            return self._aggregate(node)
        raise TypeError(f"unexpected expression node: {node!r}")

    def _binary(self, node: BinaryOp) -> Callable:
        left_fn = self.expr(node.left)
        right_fn = self.expr(node.right)
        op = node.op

        if op in ("+", "-", "*", "/"):
            def arith_fn(b, rel):
                left = left_fn(b, rel)
                if left is NO_VALUE:
                    return NO_VALUE
                right = right_fn(b, rel)
                if right is NO_VALUE:
                    return NO_VALUE
                if type(left) is not float or type(right) is not float:
                    if not is_number(left) or not is_number(right):
                        raise EvaluationError(
                            f"arithmetic '{op}' on {_type_name(left)} and {_type_name(right)}"
                        )
                if op == "+":
                    v = left + right
                elif op == "-":
                    v = left - right
                elif op == "*":
                    v = left * right
                else:
                    if right == 0.0:
                        raise EvaluationError("division by zero")
                    v = left / right
                return 0.0 if v == 0.0 else v
            return arith_fn

        if op == "!=":
            def ne_fn(b, rel):
                left = left_fn(b, rel)
                if left is NO_VALUE:
                    return NO_VALUE
                right = right_fn(b, rel)
                if right is NO_VALUE:
                    return NO_VALUE
                return not values_equal(left, right)
            return ne_fn

        def cmp_fn(b, rel):
            left = left_fn(b, rel)
            if left is NO_VALUE:
                return NO_VALUE
            right = right_fn(b, rel)
            if right is NO_VALUE:
                return NO_VALUE
            tl, tr = type(left), type(right)
            if (tl is float and tr is float) or (tl is str and tr is str):
                c = -1 if left < right else (1 if left > right else 0)
            else:
                c = value_compare(left, right)
            if op == "<":
                return c < 0
            if op == "<=":
                return c <= 0
            if op == ">":
                return c > 0
            return c >= 0
        return cmp_fn

    def _call(self, node: Call) -> Callable:
        name = node.name
        arg_fns = [self.expr(a) for a in node.args]
        kind = self.compiled.kinds.get(name)

        if kind == KIND_FUNCTION:
            fdef = self.compiled.functions[name]
            if len(arg_fns) != len(fdef.formals):
                raise EvaluationError(
                    f"'{name}' takes {len(fdef.formals)} argument(s), got {len(arg_fns)}"
                )
            formals = fdef.formals
            body_fn = self.compiled.function_body(name)
            def fn_call(b, rel):
                scope = {}
                for formal, afn in zip(formals, arg_fns):
                    v = afn(b, rel)
                    if v is NO_VALUE:
                        return NO_VALUE
                    scope[formal] = v
                return body_fn(scope, rel)
            return fn_call

        if name in BUILTIN_NAMES and kind is None:
            def builtin_fn(b, rel):
                args = []
                for afn in arg_fns:
                    v = afn(b, rel)
                    if v is NO_VALUE:
                        return NO_VALUE
                    args.append(v)
                try:
                    return call_builtin(name, args)
                except BuiltinError as e:
                    raise EvaluationError(str(e)) from None
            return builtin_fn

        # Relation lookup with fully bound arguments (inside function bodies;
        # rule bodies route relation calls through lowered joins instead).
        arg_fields = [f"arg{i}" for i in range(len(arg_fns))]
        def lookup_fn(b, rel):
            args = []
            for afn in arg_fns:
                v = afn(b, rel)
                if v is NO_VALUE:
                    return NO_VALUE
                args.append(v)
            matches = []
            for row in rel.get(name, ()):
                ok = True
                for f, v in zip(arg_fields, args):
                    if f not in row or not values_equal(row[f], v):
                        ok = False
                        break
                if ok and "value" in row:
                    matches.append(row["value"])
            if not matches:
                return NO_VALUE
            if len(matches) > 1:
                raise EvaluationError(f"call to '{name}' matched {len(matches)} rows")
            return matches[0]
        return lookup_fn

    def _aggregate(self, node: Aggregate) -> Callable:
        conj_fns = [
            self.conjunction([self.literal(l) for l in conj.literals])
            for conj in node.body.disjuncts
        ]
        weight_fn = self.expr(node.weight) if node.weight is not None else None
        value_fn = self.expr(node.value)
        agg_name = node.agg_name

        def agg_fn(b, rel):
            pairs = []
            for conj_fn in conj_fns:
                for sol in conj_fn(b, rel):
                    if weight_fn is not None:
                        w = weight_fn(sol, rel)
                        if w is NO_VALUE:
                            continue
                    else:
                        w = None
                    v = value_fn(sol, rel)
                    if v is NO_VALUE:
                        continue
                    pairs.append((w, v))
            try:
                return fold(agg_name, pairs)
            except AggregationError as e:
                raise EvaluationError(str(e)) from None
        return agg_fn

    # -- literals -----------------------------------------------------------
    # A compiled literal maps (bindings, relations) to an iterable of
    # successor bindings.

    def literal(self, lit) -> Callable:
        t = type(lit)
        if t is PredicateLiteral:
            return self._atom(lit)
        if t is EqualityLiteral:
            return self._equality(lit)
        if t is MembershipLiteral:
            var = lit.var
            list_fn = self.expr(lit.list_expr)
            def member_fn(b, rel):
                lst = list_fn(b, rel)
                if lst is NO_VALUE:
                    return
                if type(lst) is not list:
                    raise EvaluationError(f"'in' over {_type_name(lst)}, expected a list")
                bound = b.get(var, _UNBOUND)
                if bound is _UNBOUND:
                    for item in lst:
                        nb = dict(b)
                        nb[var] = item
                        yield nb
                else:
                    for item in lst:
                        if values_equal(bound, item):
                            yield b
                            return
            return member_fn
        if t is GuardLiteral:
            guard_fn = self.expr(lit.expr)
            def guard(b, rel):
                v = guard_fn(b, rel)
                if v is NO_VALUE:
                    return
                if type(v) is not bool:
                    raise EvaluationError(
                        f"guard evaluated to {_type_name(v)}, expected a boolean"
                    )
                if v:
                    yield b
            return guard
        raise TypeError(f"unexpected literal node: {lit!r}")

    def _atom(self, lit: PredicateLiteral) -> Callable:
        predicate = lit.predicate
        # Variable args bind (or test when already bound); other args are
        # compiled expressions compared against the row field.
        var_fields: list[tuple[str, str]] = []
        expr_fields: list[tuple[str, Callable]] = []
        for f, e in literal_arg_fields(lit):
            if type(e) is Var:
                var_fields.append((f, e.name))
            else:
                expr_fields.append((f, self.expr(e)))

        def atom_fn(b, rel):
            rows = rel.get(predicate, ())
            if not rows:
                return
            expr_vals = None
            if expr_fields:
                expr_vals = []
                for f, fn in expr_fields:
                    v = fn(b, rel)
                    if v is NO_VALUE:
                        return
                    expr_vals.append((f, v))
            for row in rows:
                ok = True
                if expr_vals is not None:
                    for f, v in expr_vals:
                        if f not in row or not values_equal(v, row[f]):
                            ok = False
                            break
                    if not ok:
                        continue
                nb = None
                for f, name in var_fields:
                    if f not in row:
                        ok = False
                        break
                    rv = row[f]
                    env = nb if nb is not None else b
                    cur = env.get(name, _UNBOUND)
                    if cur is _UNBOUND:
                        if nb is None:
                            nb = dict(b)
                        nb[name] = rv
                    elif not values_equal(cur, rv):
                        ok = False
                        break
                if ok:
                    yield nb if nb is not None else b
        return atom_fn

    def _equality(self, lit: EqualityLiteral) -> Callable:
        left, right = lit.left, lit.right
        left_var = left.name if type(left) is Var else None
        right_var = right.name if type(right) is Var else None
        left_fn = self.expr(left)
        right_fn = self.expr(right)

        def eq_fn(b, rel):
            bind_left = left_var is not None and left_var not in b
            bind_right = right_var is not None and right_var not in b
            if bind_left and not bind_right:
                v = right_fn(b, rel)
                if v is not NO_VALUE:
                    nb = dict(b)
                    nb[left_var] = v
                    yield nb
            elif bind_right and not bind_left:
                v = left_fn(b, rel)
                if v is not NO_VALUE:
                    nb = dict(b)
                    nb[right_var] = v
                    yield nb
            else:
                lv = left_fn(b, rel)
                if lv is NO_VALUE:
                    return
                rv = right_fn(b, rel)
                if rv is not NO_VALUE and values_equal(lv, rv):
                    yield b
        return eq_fn

    @staticmethod
    def conjunction(literal_fns: list) -> Callable:
        def conj_fn(b, rel):
            bindings = [b]
            for lit_fn in literal_fns:
                nxt = []
                for binding in bindings:
                    nxt.extend(lit_fn(binding, rel))
                if not nxt:
                    return ()
                bindings = nxt
            return bindings
        return conj_fn


@dataclass
class _CompiledRule:
    predicate: str
    span: Optional[Span]
    derive: Callable  # (relations, out_rows) -> None


class CompiledProgram:
    """Analysis plus closure compilation, reused across evaluations."""

    def __init__(self, program: Program):
        self.program = program
        self.kinds = classify_predicates(program)
        self.functions = function_definitions(program, self.kinds)
        self.order = evaluation_order(program)
        self._function_bodies: dict[str, Callable] = {}
        compiler = _Compiler(self)
        self.rules_for: dict[str, list[_CompiledRule]] = {}
        for frule in lower_program(program, self.kinds):
            crule = self._compile_rule(compiler, frule)
            self.rules_for.setdefault(crule.predicate, []).append(crule)

    def function_body(self, name: str) -> Callable:
        """Compiled value expression of a function predicate (lazy so
        functions may call one another in any definition order)."""
        fn = self._function_bodies.get(name)
        if fn is None:
            sentinel_holder: list[Callable] = []
            def lazy(b, rel):
                if not sentinel_holder:
                    sentinel_holder.append(_Compiler(self).expr(self.functions[name].value_expr))
                return sentinel_holder[0](b, rel)
            self._function_bodies[name] = lazy
            fn = lazy
        return fn

    def _compile_rule(self, compiler: _Compiler, frule: FlatRule) -> _CompiledRule:
        head = frule.head
        conj_fns = [
            compiler.conjunction([compiler.literal(l) for l in literals])
            for literals in frule.disjuncts
        ]
        key_fields = [(f, compiler.expr(e)) for f, e in head_arg_fields(head)]

        if head.form == AGGREGATING:
            weight_fn = compiler.expr(head.agg_weight) if head.agg_weight is not None else None
            value_fn = compiler.expr(head.agg_expr)
            agg_name = head.agg_name
            zero_key = not key_fields

            def derive_agg(rel, out):
                groups: dict[tuple, tuple[dict, list]] = {}
                if zero_key:
                    groups[sort_key({})] = ({}, [])
                for conj_fn in conj_fns:
                    for sol in conj_fn({}, rel):
                        key_row = {}
                        ok = True
                        for f, fn in key_fields:
                            v = fn(sol, rel)
                            if v is NO_VALUE:
                                ok = False
                                break
                            key_row[f] = v
                        if not ok:
                            continue
                        if weight_fn is not None:
                            w = weight_fn(sol, rel)
                            if w is NO_VALUE:
                                continue
                        else:
                            w = None
                        v = value_fn(sol, rel)
                        if v is NO_VALUE:
                            continue
                        gkey = sort_key(key_row)
                        entry = groups.get(gkey)
                        if entry is None:
                            entry = (key_row, [])
                            groups[gkey] = entry
                        entry[1].append((w, v))
                for key_row, pairs in groups.values():
                    try:
                        result = fold(agg_name, pairs)
                    except AggregationError as e:
                        raise EvaluationError(str(e)) from None
                    if result is NO_VALUE:
                        continue
                    row = dict(key_row)
                    row["value"] = result
                    out[sort_key(row)] = row

            return _CompiledRule(head.predicate, frule.rule.span, derive_agg)

        value_fn = compiler.expr(head.value_expr) if head.form == FUNCTIONAL else None

        def derive_plain(rel, out):
            for conj_fn in conj_fns:
                for sol in conj_fn({}, rel):
                    row = {}
                    ok = True
                    for f, fn in key_fields:
                        v = fn(sol, rel)
                        if v is NO_VALUE:
                            ok = False
                            break
                        row[f] = v
                    if not ok:
                        continue
                    if value_fn is not None:
                        v = value_fn(sol, rel)
                        if v is NO_VALUE:
                            continue
                        row["value"] = v
                    out[sort_key(row)] = row

        return _CompiledRule(head.predicate, frule.rule.span, derive_plain)


_compile_cache: "weakref.WeakKeyDictionary[Program, CompiledProgram]" = (
    weakref.WeakKeyDictionary()
)


def compile_program(program) -> CompiledProgram:
    if isinstance(program, CompiledProgram):
        return program
    cached = _compile_cache.get(program)
    if cached is None:
        cached = CompiledProgram(program)
        _compile_cache[program] = cached
    return cached


def evaluate(program, inputs: FactSet) -> FactSet:
    """Derive all facts for all predicates of a validated program.

    `inputs` normally holds Sensor/Memory rows plus optional scenario
    constants; input relations are passed through into the result.
    Raises EvaluationError with rule context on runtime errors.
    """
    compiled = compile_program(program)
    tables: dict[str, dict[tuple, dict]] = dict(inputs._rows)
    relations: dict[str, list[dict]] = {
        pred: [table[k] for k in sorted(table)] for pred, table in tables.items()
    }
    for pred in compiled.order:
        if compiled.kinds.get(pred) == KIND_FUNCTION:
            continue
        rows: dict[tuple, dict] = {}
        for crule in compiled.rules_for.get(pred, []):
            try:
                crule.derive(relations, rows)
            except EvaluationError as e:
                if e.predicate is None:
                    raise EvaluationError(e.message, pred, crule.span) from None
                raise
        tables[pred] = rows
        relations[pred] = [rows[k] for k in sorted(rows)]
    return FactSet._from_tables(tables)


def run_robot_step(
    program, robot_name: str, sensor_row: Fact, memory_rows: list[Fact]
) -> Decision:
    """Evaluate the program for one robot and extract its Decision.

    Exactly one Robot row with a matching robot_name is required; anything
    else (including evaluation errors) produces an error Decision with zero
    desire and unchanged memory.
    """
    prior_memory: Value = None
    for fact in memory_rows:
        if values_equal(fact.row.get("robot_name"), robot_name):
            prior_memory = fact.row.get("memory")
            break

    inputs = FactSet()
    inputs.add_fact(sensor_row)
    for fact in memory_rows:
        inputs.add_fact(fact)

    try:
        facts = evaluate(program, inputs)
    except EvaluationError as e:
        return Decision(dict(ZERO_DESIRE), prior_memory, error=str(e))

    mine = [
        row
        for row in facts.rows("Robot")
        if values_equal(row.get("robot_name"), robot_name)
    ]
    if not mine:
        return Decision(
            dict(ZERO_DESIRE), prior_memory, error=f"no Robot row derived for '{robot_name}'"
        )
    if len(mine) > 1:
        return Decision(
            dict(ZERO_DESIRE),
            prior_memory,
            error=f"ambiguous: {len(mine)} Robot rows derived for '{robot_name}'",
        )
    row = mine[0]
    desire = row.get("desire")
    if type(desire) is not dict:
        return Decision(dict(ZERO_DESIRE), prior_memory, error="desire is not a record")
    for engine_field in ("left_engine", "right_engine"):
        if not is_number(desire.get(engine_field)):
            return Decision(
                dict(ZERO_DESIRE),
                prior_memory,
                error=f"desire.{engine_field} is missing or not a number",
            )
    memory = row["memory"] if "memory" in row else prior_memory
    return Decision(dict(desire), memory, None)
