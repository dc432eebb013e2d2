"""LogiCore rule language: lexer, parser, validator, formatter."""

from .ast import (
    Aggregate,
    BinaryOp,
    BodyExpr,
    Call,
    Conjunction,
    Const,
    EqualityLiteral,
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
    RELATIONAL,
)
from .lexer import LexError, Token, tokenize
from .parser import ParseError, parse_program
from .validator import Diagnostic, validate
from .formatter import format_expr, format_program, format_rule

__all__ = [
    "Aggregate",
    "BinaryOp",
    "BodyExpr",
    "Call",
    "Conjunction",
    "Const",
    "Diagnostic",
    "EqualityLiteral",
    "FieldAccess",
    "GuardLiteral",
    "HeadAtom",
    "LexError",
    "ListExpr",
    "MembershipLiteral",
    "ParseError",
    "PredicateLiteral",
    "Program",
    "RecordExpr",
    "Rule",
    "Token",
    "UnaryOp",
    "Var",
    "AGGREGATING",
    "FUNCTIONAL",
    "RELATIONAL",
    "format_expr",
    "format_program",
    "format_rule",
    "parse_program",
    "tokenize",
    "validate",
]
