"""AST node definitions for LogiCore rule programs.

All nodes are frozen dataclasses; structural equality ignores source spans,
so `parse(format(p)) == p` holds whenever the trees match shape-for-shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Span = tuple[int, int]  # (line, column), 1-based


def _span_field():
    return field(default=None, compare=False, repr=False)


# --- Expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Const:
    """Literal value: number (float), string, bool, or None."""

    value: Union[None, bool, float, str]


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class FieldAccess:
    base: "Expr"
    field: str


@dataclass(frozen=True)
class UnaryOp:
    op: str  # '-'
    operand: "Expr"


@dataclass(frozen=True)
class BinaryOp:
    op: str  # + - * / < <= > >= !=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class RecordExpr:
    fields: tuple[tuple[str, "Expr"], ...]  # source order preserved


@dataclass(frozen=True)
class ListExpr:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Call:
    """Call-position reference: builtin, function predicate, or relation."""

    name: str
    args: tuple["Expr", ...]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Aggregate:
    """Inline aggregation: `Agg { value :- body }` or `Agg { weight -> value :- body }`."""

    agg_name: str
    weight: Optional["Expr"]
    value: "Expr"
    body: "BodyExpr"
    span: Optional[Span] = _span_field()


Expr = Union[Const, Var, FieldAccess, UnaryOp, BinaryOp, RecordExpr, ListExpr, Call, Aggregate]


# --- Body ------------------------------------------------------------------


@dataclass(frozen=True)
class PredicateLiteral:
    """Atom in a body: named args (`P(f: e)`) or positional (`P(e1, e2)`).

    Exactly one of named_args / pos_args is non-None; `P()` parses as
    positional with zero args.
    """

    predicate: str
    named_args: Optional[tuple[tuple[str, Expr], ...]]
    pos_args: Optional[tuple[Expr, ...]]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EqualityLiteral:
    """`lhs = rhs` / `lhs == rhs`: binds an unbound-variable side, else tests."""

    left: Expr
    right: Expr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class MembershipLiteral:
    """`var in list_expr`."""

    var: str
    list_expr: Expr
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class GuardLiteral:
    """Boolean expression filter."""

    expr: Expr
    span: Optional[Span] = _span_field()


BodyLiteral = Union[PredicateLiteral, EqualityLiteral, MembershipLiteral, GuardLiteral]


@dataclass(frozen=True)
class Conjunction:
    literals: tuple[BodyLiteral, ...]


@dataclass(frozen=True)
class BodyExpr:
    disjuncts: tuple[Conjunction, ...]  # source order, left to right around `|`


# --- Rules -----------------------------------------------------------------

RELATIONAL = "relational"
FUNCTIONAL = "functional"
AGGREGATING = "aggregating"


@dataclass(frozen=True)
class HeadAtom:
    """Rule head in one of three forms.

    relational:  P(f: e, ...)           -> named_args set
    functional:  F(e1, ..) = value_expr -> pos_args + value_expr
    aggregating: P(e1, ..) Agg= expr    -> pos_args (or named) + agg fields

    Positional args project to row fields arg0..argN; functional and
    aggregating results land in field `value`.
    """

    form: str
    predicate: str
    named_args: Optional[tuple[tuple[str, Expr], ...]] = None
    pos_args: Optional[tuple[Expr, ...]] = None
    value_expr: Optional[Expr] = None
    agg_name: Optional[str] = None
    agg_weight: Optional[Expr] = None
    agg_expr: Optional[Expr] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Rule:
    head: HeadAtom
    body: Optional[BodyExpr]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...]


def head_arg_fields(head: HeadAtom) -> list[tuple[str, Expr]]:
    """Row fields contributed by the head's argument list (value excluded)."""
    if head.named_args is not None:
        return list(head.named_args)
    if head.pos_args is not None:
        return [(f"arg{i}", e) for i, e in enumerate(head.pos_args)]
    return []


def literal_arg_fields(lit: PredicateLiteral) -> list[tuple[str, Expr]]:
    if lit.named_args is not None:
        return list(lit.named_args)
    return [(f"arg{i}", e) for i, e in enumerate(lit.pos_args or ())]
