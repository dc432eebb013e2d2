"""Program analysis shared by the validator and the evaluator.

Three jobs:

* classify predicates: function-style definitions (inlined at call sites),
  derived relations (materialized bottom-up), and everything else (inputs);
* lower rules: hoist relation calls out of expressions into explicit join
  literals binding fresh temporaries, so `d == Dist(b)` becomes the join
  `Dist(arg0: b, value: _t0)` followed by `d == _t0`;
* left-to-right binding analysis over the lowered form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .ast import (
    Aggregate,
    BinaryOp,
    BodyExpr,
    BodyLiteral,
    Call,
    Conjunction,
    Const,
    EqualityLiteral,
    Expr,
    FieldAccess,
    GuardLiteral,
    HeadAtom,
    ListExpr,
    MembershipLiteral,
    PredicateLiteral,
    Program,
    RecordExpr,
    Rule,
    Span,
    UnaryOp,
    Var,
    FUNCTIONAL,
    head_arg_fields,
    literal_arg_fields,
)

AGGREGATION_NAMES = frozenset(
    {"Min", "Max", "Sum", "Count", "Avg", "List", "ArgMin", "ArgMax", "WeightedAverage"}
)

BUILTIN_NAMES = frozenset(
    {"Sqrt", "Abs", "Sin", "Cos", "Atan2", "Floor", "Pi", "Least", "Greatest", "Size", "Range", "EdgeDistance"}
)

INPUT_PREDICATES = frozenset({"Sensor", "Memory"})

# Accepted argument counts per builtin; Least/Greatest take two or more.
BUILTIN_ARITIES: dict[str, range] = {
    "Sqrt": range(1, 2),
    "Abs": range(1, 2),
    "Sin": range(1, 2),
    "Cos": range(1, 2),
    "Atan2": range(2, 3),
    "Floor": range(1, 2),
    "Pi": range(0, 1),
    "Least": range(2, 65),
    "Greatest": range(2, 65),
    "Size": range(1, 2),
    "Range": range(1, 2),
    "EdgeDistance": range(3, 4),
}

KIND_FUNCTION = "function"
KIND_DERIVED = "derived"

VALUE_FIELD = "value"


def rules_by_predicate(program: Program) -> dict[str, list[Rule]]:
    out: dict[str, list[Rule]] = {}
    for rule in program.rules:
        out.setdefault(rule.head.predicate, []).append(rule)
    return out


def is_function_definition(rule: Rule) -> bool:
    """True for `F(x, y) = expr;` style rules: bodyless, functional, all
    positional args distinct plain variables. These are inlined at call
    sites instead of materialized."""
    if rule.body is not None or rule.head.form != FUNCTIONAL:
        return False
    args = rule.head.pos_args or ()
    if not args:
        return False
    names = [a.name for a in args if isinstance(a, Var)]
    return len(names) == len(args) and len(set(names)) == len(names)


def classify_predicates(program: Program) -> dict[str, str]:
    """Map each defined predicate to KIND_FUNCTION or KIND_DERIVED."""
    kinds: dict[str, str] = {}
    for name, rules in rules_by_predicate(program).items():
        if len(rules) == 1 and is_function_definition(rules[0]):
            kinds[name] = KIND_FUNCTION
        else:
            kinds[name] = KIND_DERIVED
    return kinds


@dataclass(frozen=True)
class FunctionDef:
    name: str
    formals: tuple[str, ...]
    value_expr: Expr


def function_definitions(program: Program, kinds: dict[str, str]) -> dict[str, FunctionDef]:
    defs = {}
    for rule in program.rules:
        name = rule.head.predicate
        if kinds.get(name) == KIND_FUNCTION:
            formals = tuple(a.name for a in rule.head.pos_args)  # type: ignore[union-attr]
            defs[name] = FunctionDef(name, formals, rule.head.value_expr)
    return defs


@dataclass(frozen=True)
class FlatRule:
    """A rule with relation calls lowered to join literals.

    disjuncts: one literal sequence per body disjunct (a bodyless rule has a
    single empty-or-joins-only sequence). Head expressions reference only
    variables and inlined calls (functions/builtins).
    """

    head: HeadAtom
    disjuncts: tuple[tuple[BodyLiteral, ...], ...]
    rule: Rule


class _Lowerer:
    def __init__(self, kinds: dict[str, str]):
        self.kinds = kinds
        self.counter = 0

    def _fresh(self) -> str:
        name = f"_t{self.counter}"
        self.counter += 1
        return name

    def _is_inline_call(self, name: str) -> bool:
        if self.kinds.get(name) == KIND_FUNCTION:
            return True
        return name in BUILTIN_NAMES and name not in self.kinds

    def rewrite_expr(self, expr: Expr, hoisted: list[BodyLiteral]) -> Expr:
        if isinstance(expr, (Const, Var)):
            return expr
        if isinstance(expr, FieldAccess):
            return FieldAccess(self.rewrite_expr(expr.base, hoisted), expr.field)
        if isinstance(expr, UnaryOp):
            return UnaryOp(expr.op, self.rewrite_expr(expr.operand, hoisted))
        if isinstance(expr, BinaryOp):
            left = self.rewrite_expr(expr.left, hoisted)
            right = self.rewrite_expr(expr.right, hoisted)
            return BinaryOp(expr.op, left, right)
        if isinstance(expr, RecordExpr):
            return RecordExpr(
                tuple((f, self.rewrite_expr(e, hoisted)) for f, e in expr.fields)
            )
        if isinstance(expr, ListExpr):
            return ListExpr(tuple(self.rewrite_expr(e, hoisted) for e in expr.items))
        if isinstance(expr, Call):
            args = tuple(self.rewrite_expr(a, hoisted) for a in expr.args)
            if self._is_inline_call(expr.name):
                return Call(expr.name, args, span=expr.span)
            # Relation (derived or external input): join on arg0..argN, bind value.
            temp = self._fresh()
            named = tuple((f"arg{i}", a) for i, a in enumerate(args)) + (
                (VALUE_FIELD, Var(temp, span=expr.span)),
            )
            hoisted.append(PredicateLiteral(expr.name, named, None, span=expr.span))
            return Var(temp, span=expr.span)
        if isinstance(expr, Aggregate):
            inner = self.rewrite_body(expr.body)
            local: list[BodyLiteral] = []
            weight = self.rewrite_expr(expr.weight, local) if expr.weight is not None else None
            value = self.rewrite_expr(expr.value, local)
            if local:
                inner = tuple(conj + tuple(local) for conj in inner)
            body = BodyExpr(tuple(Conjunction(c) for c in inner))
            return Aggregate(expr.agg_name, weight, value, body, span=expr.span)
        raise TypeError(f"unexpected expression node: {expr!r}")

    def rewrite_literal(self, lit: BodyLiteral, out: list[BodyLiteral]) -> None:
        if isinstance(lit, PredicateLiteral):
            hoisted: list[BodyLiteral] = []
            if lit.named_args is not None:
                named = tuple(
                    (f, a if isinstance(a, Var) else self.rewrite_expr(a, hoisted))
                    for f, a in lit.named_args
                )
                new = PredicateLiteral(lit.predicate, named, None, span=lit.span)
            else:
                pos = tuple(
                    a if isinstance(a, Var) else self.rewrite_expr(a, hoisted)
                    for a in (lit.pos_args or ())
                )
                new = PredicateLiteral(lit.predicate, None, pos, span=lit.span)
            out.extend(hoisted)
            out.append(new)
        elif isinstance(lit, EqualityLiteral):
            hoisted = []
            left = lit.left if isinstance(lit.left, Var) else self.rewrite_expr(lit.left, hoisted)
            right = (
                lit.right if isinstance(lit.right, Var) else self.rewrite_expr(lit.right, hoisted)
            )
            out.extend(hoisted)
            out.append(EqualityLiteral(left, right, span=lit.span))
        elif isinstance(lit, MembershipLiteral):
            hoisted = []
            expr = self.rewrite_expr(lit.list_expr, hoisted)
            out.extend(hoisted)
            out.append(MembershipLiteral(lit.var, expr, span=lit.span))
        elif isinstance(lit, GuardLiteral):
            hoisted = []
            expr = self.rewrite_expr(lit.expr, hoisted)
            out.extend(hoisted)
            out.append(GuardLiteral(expr, span=lit.span))
        else:
            raise TypeError(f"unexpected literal node: {lit!r}")

    def rewrite_body(self, body: BodyExpr) -> tuple[tuple[BodyLiteral, ...], ...]:
        disjuncts = []
        for conj in body.disjuncts:
            out: list[BodyLiteral] = []
            for lit in conj.literals:
                self.rewrite_literal(lit, out)
            disjuncts.append(tuple(out))
        return tuple(disjuncts)

    def lower_rule(self, rule: Rule) -> FlatRule:
        disjuncts = self.rewrite_body(rule.body) if rule.body is not None else ((),)
        head = rule.head
        head_hoists: list[BodyLiteral] = []
        named = pos = None
        if head.named_args is not None:
            named = tuple((f, self.rewrite_expr(e, head_hoists)) for f, e in head.named_args)
        if head.pos_args is not None:
            pos = tuple(self.rewrite_expr(e, head_hoists) for e in head.pos_args)
        value = (
            self.rewrite_expr(head.value_expr, head_hoists)
            if head.value_expr is not None
            else None
        )
        agg_weight = (
            self.rewrite_expr(head.agg_weight, head_hoists)
            if head.agg_weight is not None
            else None
        )
        agg_expr = (
            self.rewrite_expr(head.agg_expr, head_hoists) if head.agg_expr is not None else None
        )
        if head_hoists:
            disjuncts = tuple(conj + tuple(head_hoists) for conj in disjuncts)
        new_head = HeadAtom(
            head.form,
            head.predicate,
            named_args=named,
            pos_args=pos,
            value_expr=value,
            agg_name=head.agg_name,
            agg_weight=agg_weight,
            agg_expr=agg_expr,
            span=head.span,
        )
        return FlatRule(new_head, disjuncts, rule)


def lower_program(program: Program, kinds: Optional[dict[str, str]] = None) -> list[FlatRule]:
    """Lower every non-function rule. Function definitions are not lowered
    (their value expression is evaluated inline at call sites)."""
    if kinds is None:
        kinds = classify_predicates(program)
    lowerer = _Lowerer(kinds)
    return [
        lowerer.lower_rule(rule)
        for rule in program.rules
        if kinds.get(rule.head.predicate) != KIND_FUNCTION
    ]


# --- dependencies -----------------------------------------------------------


def expr_predicates(expr: Expr, acc: set[str]) -> None:
    """Collect predicate names referenced from an expression (calls and
    aggregation bodies), excluding pure builtins."""
    if isinstance(expr, (Const, Var)):
        return
    if isinstance(expr, FieldAccess):
        expr_predicates(expr.base, acc)
    elif isinstance(expr, UnaryOp):
        expr_predicates(expr.operand, acc)
    elif isinstance(expr, BinaryOp):
        expr_predicates(expr.left, acc)
        expr_predicates(expr.right, acc)
    elif isinstance(expr, RecordExpr):
        for _, e in expr.fields:
            expr_predicates(e, acc)
    elif isinstance(expr, ListExpr):
        for e in expr.items:
            expr_predicates(e, acc)
    elif isinstance(expr, Call):
        if expr.name not in BUILTIN_NAMES:
            acc.add(expr.name)
        for a in expr.args:
            expr_predicates(a, acc)
    elif isinstance(expr, Aggregate):
        if expr.weight is not None:
            expr_predicates(expr.weight, acc)
        expr_predicates(expr.value, acc)
        body_predicates(expr.body, acc)


def literal_predicates(lit: BodyLiteral, acc: set[str]) -> None:
    if isinstance(lit, PredicateLiteral):
        acc.add(lit.predicate)
        for _, e in literal_arg_fields(lit):
            expr_predicates(e, acc)
    elif isinstance(lit, EqualityLiteral):
        expr_predicates(lit.left, acc)
        expr_predicates(lit.right, acc)
    elif isinstance(lit, MembershipLiteral):
        expr_predicates(lit.list_expr, acc)
    elif isinstance(lit, GuardLiteral):
        expr_predicates(lit.expr, acc)


def body_predicates(body: BodyExpr, acc: set[str]) -> None:
    for conj in body.disjuncts:
        for lit in conj.literals:
            literal_predicates(lit, acc)


def rule_predicates(rule: Rule) -> set[str]:
    """Every predicate the rule references (body plus head expressions)."""
    acc: set[str] = set()
    if rule.body is not None:
        body_predicates(rule.body, acc)
    head = rule.head
    for _, e in head_arg_fields(head):
        expr_predicates(e, acc)
    for e in (head.value_expr, head.agg_weight, head.agg_expr):
        if e is not None:
            expr_predicates(e, acc)
    return acc


def dependency_graph(program: Program) -> dict[str, set[str]]:
    """head predicate -> referenced predicates (defined or not)."""
    graph: dict[str, set[str]] = {}
    for rule in program.rules:
        graph.setdefault(rule.head.predicate, set()).update(rule_predicates(rule))
    return graph


def find_cycles(graph: dict[str, set[str]]) -> list[list[str]]:
    """Cycles among defined predicates, each reported once as a name path."""
    defined = set(graph)
    color: dict[str, int] = {}
    stack: list[str] = []
    cycles: list[list[str]] = []
    seen_cycles: set[frozenset] = set()

    def visit(node: str) -> None:
        color[node] = 1
        stack.append(node)
        for dep in sorted(graph.get(node, ())):
            if dep not in defined:
                continue
            state = color.get(dep, 0)
            if state == 0:
                visit(dep)
            elif state == 1:
                cycle = stack[stack.index(dep) :] + [dep]
                key = frozenset(cycle)
                if key not in seen_cycles:
                    seen_cycles.add(key)
                    cycles.append(cycle)
        stack.pop()
        color[node] = 2

    for name in sorted(defined):
        if color.get(name, 0) == 0:
            visit(name)
    return cycles


def evaluation_order(program: Program) -> list[str]:
    """Defined predicates in dependency (stratum) order; requires an acyclic
    program (enforced by validation)."""
    graph = dependency_graph(program)
    defined = set(graph)
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(node: str) -> None:
        state[node] = 1
        for dep in sorted(graph.get(node, ())):
            if dep in defined and state.get(dep, 0) == 0:
                visit(dep)
        state[node] = 2
        order.append(node)

    for name in sorted(defined):
        if state.get(name, 0) == 0:
            visit(name)
    return order


# --- binding analysis --------------------------------------------------------


def expr_vars(expr: Expr, acc: set[str]) -> None:
    """Free variables of an expression. Aggregation bodies bind their own
    variables, so an Aggregate contributes nothing here (checked separately)."""
    if isinstance(expr, Var):
        acc.add(expr.name)
    elif isinstance(expr, FieldAccess):
        expr_vars(expr.base, acc)
    elif isinstance(expr, UnaryOp):
        expr_vars(expr.operand, acc)
    elif isinstance(expr, BinaryOp):
        expr_vars(expr.left, acc)
        expr_vars(expr.right, acc)
    elif isinstance(expr, RecordExpr):
        for _, e in expr.fields:
            expr_vars(e, acc)
    elif isinstance(expr, ListExpr):
        for e in expr.items:
            expr_vars(e, acc)
    elif isinstance(expr, Call):
        for a in expr.args:
            expr_vars(a, acc)
    elif isinstance(expr, Aggregate):
        pass


@dataclass
class BindingProblem:
    message: str
    span: Optional[Span]


def check_expr(expr: Expr, bound: set[str], problems: list[BindingProblem]) -> None:
    if isinstance(expr, Aggregate):
        for conj in expr.body.disjuncts:
            inner_bound = analyze_conjunction(list(conj.literals), set(bound), problems)
            for e in (expr.weight, expr.value):
                if e is None:
                    continue
                free: set[str] = set()
                expr_vars(e, free)
                for name in sorted(free - inner_bound):
                    problems.append(
                        BindingProblem(
                            f"variable '{name}' is not bound in the aggregation body",
                            expr.span,
                        )
                    )
        return
    if isinstance(expr, Var):
        if expr.name not in bound:
            problems.append(BindingProblem(f"variable '{expr.name}' is not bound", expr.span))
        return
    if isinstance(expr, FieldAccess):
        check_expr(expr.base, bound, problems)
    elif isinstance(expr, UnaryOp):
        check_expr(expr.operand, bound, problems)
    elif isinstance(expr, BinaryOp):
        check_expr(expr.left, bound, problems)
        check_expr(expr.right, bound, problems)
    elif isinstance(expr, RecordExpr):
        for _, e in expr.fields:
            check_expr(e, bound, problems)
    elif isinstance(expr, ListExpr):
        for e in expr.items:
            check_expr(e, bound, problems)
    elif isinstance(expr, Call):
        for a in expr.args:
            check_expr(a, bound, problems)


def analyze_conjunction(
    literals: Iterable[BodyLiteral], bound: set[str], problems: list[BindingProblem]
) -> set[str]:
    """Simulate left-to-right binding over lowered literals; returns the
    bound-variable set and appends problems for uses of unbound variables."""
    for lit in literals:
        if isinstance(lit, PredicateLiteral):
            for _, e in literal_arg_fields(lit):
                if isinstance(e, Var) and e.name not in bound:
                    bound.add(e.name)
                else:
                    check_expr(e, bound, problems)
        elif isinstance(lit, EqualityLiteral):
            left_unbound = isinstance(lit.left, Var) and lit.left.name not in bound
            right_unbound = isinstance(lit.right, Var) and lit.right.name not in bound
            if left_unbound and not right_unbound:
                check_expr(lit.right, bound, problems)
                bound.add(lit.left.name)
            elif right_unbound and not left_unbound:
                check_expr(lit.left, bound, problems)
                bound.add(lit.right.name)
            else:
                check_expr(lit.left, bound, problems)
                check_expr(lit.right, bound, problems)
        elif isinstance(lit, MembershipLiteral):
            check_expr(lit.list_expr, bound, problems)
            bound.add(lit.var)
        elif isinstance(lit, GuardLiteral):
            check_expr(lit.expr, bound, problems)
    return bound
