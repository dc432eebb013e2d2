"""Static validation of parsed programs.

Rejects within-program recursion (state must flow through memory across
rounds instead), unknown aggregation names, undefined predicates in literal
position, and unbound-variable uses. Predicates referenced only in call
position may be supplied as external input relations at evaluation time, so
they validate clean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ast import (
    Aggregate,
    BinaryOp,
    BodyExpr,
    Call,
    Const,
    EqualityLiteral,
    Expr,
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
    head_arg_fields,
    literal_arg_fields,
)
from .analysis import (
    AGGREGATION_NAMES,
    BUILTIN_ARITIES,
    BUILTIN_NAMES,
    INPUT_PREDICATES,
    KIND_FUNCTION,
    BindingProblem,
    analyze_conjunction,
    check_expr,
    classify_predicates,
    dependency_graph,
    find_cycles,
    lower_program,
    rules_by_predicate,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # currently always "error"
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.severity}: line {self.line}, column {self.column}: {self.message}"


def _diag(message: str, span: Optional[Span]) -> Diagnostic:
    line, column = span if span is not None else (1, 1)
    return Diagnostic("error", message, line, column)


def _walk_exprs(expr: Expr, out: list):
    out.append(expr)
    if isinstance(expr, FieldAccess):
        _walk_exprs(expr.base, out)
    elif isinstance(expr, UnaryOp):
        _walk_exprs(expr.operand, out)
    elif isinstance(expr, BinaryOp):
        _walk_exprs(expr.left, out)
        _walk_exprs(expr.right, out)
    elif isinstance(expr, RecordExpr):
        for _, e in expr.fields:
            _walk_exprs(e, out)
    elif isinstance(expr, ListExpr):
        for e in expr.items:
            _walk_exprs(e, out)
    elif isinstance(expr, Call):
        for a in expr.args:
            _walk_exprs(a, out)
    elif isinstance(expr, Aggregate):
        if expr.weight is not None:
            _walk_exprs(expr.weight, out)
        _walk_exprs(expr.value, out)
        _walk_body_exprs(expr.body, out)


def _walk_body_exprs(body: BodyExpr, out: list):
    for conj in body.disjuncts:
        for lit in conj.literals:
            if isinstance(lit, PredicateLiteral):
                for _, e in literal_arg_fields(lit):
                    _walk_exprs(e, out)
            elif isinstance(lit, EqualityLiteral):
                _walk_exprs(lit.left, out)
                _walk_exprs(lit.right, out)
            elif isinstance(lit, MembershipLiteral):
                _walk_exprs(lit.list_expr, out)
            elif isinstance(lit, GuardLiteral):
                _walk_exprs(lit.expr, out)


def _rule_exprs(rule) -> list:
    out: list = []
    head = rule.head
    for _, e in head_arg_fields(head):
        _walk_exprs(e, out)
    for e in (head.value_expr, head.agg_weight, head.agg_expr):
        if e is not None:
            _walk_exprs(e, out)
    if rule.body is not None:
        _walk_body_exprs(rule.body, out)
    return out


def _body_atoms(rule) -> list[PredicateLiteral]:
    atoms: list[PredicateLiteral] = []
    if rule.body is not None:
        stack = [rule.body]
    else:
        stack = []
    for e in _rule_exprs(rule):
        if isinstance(e, Aggregate):
            stack.append(e.body)
    for body in stack:
        for conj in body.disjuncts:
            for lit in conj.literals:
                if isinstance(lit, PredicateLiteral):
                    atoms.append(lit)
    return atoms


def validate(program: Program) -> list[Diagnostic]:
    """Full static check; an empty list means the program is valid."""
    diagnostics: list[Diagnostic] = []

    if not program.rules:
        return [_diag("program has no rules", (1, 1))]

    by_pred = rules_by_predicate(program)
    kinds = classify_predicates(program)
    defined = set(by_pred)

    for name, rules in by_pred.items():
        if name in BUILTIN_NAMES:
            diagnostics.append(_diag(f"'{name}' redefines a builtin function", rules[0].head.span))
        if name in INPUT_PREDICATES:
            diagnostics.append(
                _diag(f"'{name}' redefines a platform input predicate", rules[0].head.span)
            )
        agg_rules = [r for r in rules if r.head.form == AGGREGATING]
        if agg_rules and len(rules) > 1:
            diagnostics.append(
                _diag(
                    f"aggregating predicate '{name}' must be defined by a single rule",
                    rules[1].head.span,
                )
            )

    # Recursion (direct or mutual) among predicates defined in this program.
    cycles = find_cycles(dependency_graph(program))
    for cycle in cycles:
        head = cycle[0]
        path = " -> ".join(cycle)
        span = by_pred[head][0].head.span
        diagnostics.append(_diag(f"recursive definition: {path}", span))

    for rule in program.rules:
        # Unknown aggregation names.
        head = rule.head
        if head.form == AGGREGATING and head.agg_name not in AGGREGATION_NAMES:
            diagnostics.append(
                _diag(
                    f"unknown aggregation '{head.agg_name}' (expected one of "
                    f"{', '.join(sorted(AGGREGATION_NAMES))})",
                    head.span,
                )
            )
        for e in _rule_exprs(rule):
            if isinstance(e, Aggregate) and e.agg_name not in AGGREGATION_NAMES:
                diagnostics.append(_diag(f"unknown aggregation '{e.agg_name}'", e.span))
            if isinstance(e, Call) and e.name in BUILTIN_NAMES and e.name not in defined:
                arity = BUILTIN_ARITIES.get(e.name)
                if arity is not None and len(e.args) not in arity:
                    diagnostics.append(
                        _diag(
                            f"builtin '{e.name}' called with {len(e.args)} argument(s)",
                            e.span,
                        )
                    )

        # Undefined predicates in literal position (call position may be
        # satisfied by external input relations, so it is not checked).
        for atom in _body_atoms(rule):
            if atom.predicate not in defined and atom.predicate not in INPUT_PREDICATES:
                diagnostics.append(
                    _diag(f"undefined predicate '{atom.predicate}'", atom.span)
                )

    if diagnostics:
        # Binding analysis assumes an acyclic, name-resolved program.
        return diagnostics

    # Binding analysis over the lowered form.
    flat = lower_program(program, kinds)
    for frule in flat:
        head = frule.head
        head_var_exprs: list[Expr] = [e for _, e in head_arg_fields(head)]
        for e in (head.value_expr, head.agg_weight, head.agg_expr):
            if e is not None:
                head_var_exprs.append(e)
        for literals in frule.disjuncts:
            problems: list[BindingProblem] = []
            bound = analyze_conjunction(list(literals), set(), problems)
            for e in head_var_exprs:
                check_expr(e, bound, problems)
            for p in problems:
                diagnostics.append(_diag(p.message, p.span or frule.rule.span))

    # Function definitions: the value expression may only use the formals.
    for rule in program.rules:
        if kinds.get(rule.head.predicate) == KIND_FUNCTION:
            formals = {a.name for a in rule.head.pos_args}  # type: ignore[union-attr]
            problems = []
            check_expr(rule.head.value_expr, set(formals), problems)
            for p in problems:
                diagnostics.append(_diag(p.message, p.span or rule.head.span))

    # Deduplicate identical diagnostics from repeated analysis paths.
    seen = set()
    unique = []
    for d in diagnostics:
        key = (d.message, d.line, d.column)
        if key not in seen:
            seen.add(key)
            unique.append(d)
    return unique
