"""Canonical pretty-printer: `parse_program(format_program(p))` is
structurally equal to `p`.

Canonical choices: `==` for all equalities, shorthand `P(field:)` whenever
the argument is the same-named variable, minimal parentheses, two-space
indentation, one conjunct per line in single-disjunct bodies.
"""

from __future__ import annotations

import math

from .ast import (
    Aggregate,
    BinaryOp,
    BodyExpr,
    BodyLiteral,
    Call,
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
    UnaryOp,
    Var,
    AGGREGATING,
    FUNCTIONAL,
)
from .lexer import encode_string

_PREC_CMP = 2
_PREC_ADD = 3
_PREC_MUL = 4
_PREC_UNARY = 5
_PREC_POSTFIX = 6

_BIN_PREC = {
    "<": _PREC_CMP,
    "<=": _PREC_CMP,
    ">": _PREC_CMP,
    ">=": _PREC_CMP,
    "!=": _PREC_CMP,
    "+": _PREC_ADD,
    "-": _PREC_ADD,
    "*": _PREC_MUL,
    "/": _PREC_MUL,
}


def _number(value: float) -> str:
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _prec(expr: Expr) -> int:
    if isinstance(expr, BinaryOp):
        return _BIN_PREC[expr.op]
    if isinstance(expr, UnaryOp):
        return _PREC_UNARY
    if isinstance(expr, Const) and isinstance(expr.value, float) and expr.value < 0:
        return _PREC_UNARY
    return _PREC_POSTFIX


def _wrap(expr: Expr, limit: int) -> str:
    text = format_expr(expr)
    return f"({text})" if _prec(expr) < limit else text


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Const):
        v = expr.value
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return _number(v)
        return encode_string(v)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, FieldAccess):
        return f"{_wrap(expr.base, _PREC_POSTFIX)}.{expr.field}"
    if isinstance(expr, UnaryOp):
        return f"-{_wrap(expr.operand, _PREC_UNARY)}"
    if isinstance(expr, BinaryOp):
        prec = _BIN_PREC[expr.op]
        left = _wrap(expr.left, prec)
        # Right operand needs parens at equal precedence to keep tree shape
        # (a - (b - c)), and comparisons do not chain.
        right_limit = prec + 1 if expr.op not in ("<", "<=", ">", ">=", "!=") else prec + 1
        right = _wrap(expr.right, right_limit)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, RecordExpr):
        inner = ", ".join(f"{f}: {format_expr(e)}" for f, e in expr.fields)
        return "{" + inner + "}"
    if isinstance(expr, ListExpr):
        return "[" + ", ".join(format_expr(e) for e in expr.items) + "]"
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(format_expr(a) for a in expr.args)})"
    if isinstance(expr, Aggregate):
        head = format_expr(expr.value)
        if expr.weight is not None:
            head = f"{format_expr(expr.weight)} -> {head}"
        return f"{expr.agg_name} {{{head} :- {_body_inline(expr.body)}}}"
    raise TypeError(f"unexpected expression node: {expr!r}")


def _literal(lit: BodyLiteral) -> str:
    if isinstance(lit, PredicateLiteral):
        if lit.named_args is not None:
            parts = []
            for field, e in lit.named_args:
                if isinstance(e, Var) and e.name == field:
                    parts.append(f"{field}:")
                else:
                    parts.append(f"{field}: {format_expr(e)}")
            return f"{lit.predicate}({', '.join(parts)})"
        return f"{lit.predicate}({', '.join(format_expr(a) for a in lit.pos_args or ())})"
    if isinstance(lit, EqualityLiteral):
        return f"{format_expr(lit.left)} == {format_expr(lit.right)}"
    if isinstance(lit, MembershipLiteral):
        return f"{lit.var} in {format_expr(lit.list_expr)}"
    if isinstance(lit, GuardLiteral):
        return format_expr(lit.expr)
    raise TypeError(f"unexpected literal node: {lit!r}")


def _body_inline(body: BodyExpr) -> str:
    return " | ".join(
        ", ".join(_literal(l) for l in conj.literals) for conj in body.disjuncts
    )


def _head(head: HeadAtom) -> str:
    if head.named_args is not None:
        parts = []
        for field, e in head.named_args:
            if isinstance(e, Var) and e.name == field:
                parts.append(f"{field}:")
            else:
                parts.append(f"{field}: {format_expr(e)}")
        args = ", ".join(parts)
    else:
        args = ", ".join(format_expr(a) for a in head.pos_args or ())
    base = f"{head.predicate}({args})"
    if head.form == FUNCTIONAL:
        return f"{base} = {format_expr(head.value_expr)}"
    if head.form == AGGREGATING:
        value = format_expr(head.agg_expr)
        if head.agg_weight is not None:
            value = f"{format_expr(head.agg_weight)} -> {value}"
        return f"{base} {head.agg_name}= {value}"
    return base


def format_rule(rule: Rule) -> str:
    text = _head(rule.head)
    if rule.body is None:
        return f"{text};"
    if len(rule.body.disjuncts) == 1:
        lines = ",\n  ".join(_literal(l) for l in rule.body.disjuncts[0].literals)
        return f"{text} :-\n  {lines};"
    lines = " |\n  ".join(
        ", ".join(_literal(l) for l in conj.literals) for conj in rule.body.disjuncts
    )
    return f"{text} :-\n  {lines};"


def format_program(program: Program) -> str:
    """Canonical source text for a program (trailing newline included)."""
    return "\n".join(format_rule(rule) for rule in program.rules) + "\n"
