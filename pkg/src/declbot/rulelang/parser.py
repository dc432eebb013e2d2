"""Recursive-descent parser for LogiCore.

Grammar sketch (first error aborts, no recovery):

    program  = { rule }
    rule     = head [ ":-" body ] ";"          (final ";" optional at EOF)
    head     = PRED "(" args ")"               relational
             | PRED "(" exprs ")" "=" expr     functional
             | PRED "(" args ")" AGG "=" expr [ "->" expr swapped ]   aggregating
    body     = conj { "|" conj }
    conj     = literal { "," literal }
    literal  = atom | var "in" expr | expr ("="|"==") expr | expr

Operator precedence, loose to tight: comparison < additive < multiplicative
< unary minus < field access. `=`/`==` live at the literal level only.
"""

from __future__ import annotations

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
    UnaryOp,
    Var,
    AGGREGATING,
    FUNCTIONAL,
    RELATIONAL,
)
from .lexer import LexError, Token, decode_string, tokenize

_CMP_OPS = ("<", "<=", ">", ">=", "!=")


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _eof_position(source: str) -> tuple[int, int]:
    lines = source.split("\n")
    return len(lines), len(lines[-1]) + 1


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.eof_line, self.eof_col = _eof_position(source)

    # -- token access ---------------------------------------------------

    def _peek(self, offset: int = 0) -> Token | None:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def _at(self, text: str, offset: int = 0) -> bool:
        tok = self._peek(offset)
        return tok is not None and tok.kind in ("punctuation", "keyword") and tok.text == text

    def _advance(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.eof_line, self.eof_col)
        self.pos += 1
        return tok

    def _here(self) -> tuple[int, int]:
        tok = self._peek()
        if tok is None:
            return self.eof_line, self.eof_col
        return tok.line, tok.column

    def _err(self, expected: str) -> ParseError:
        tok = self._peek()
        line, col = self._here()
        found = "end of input" if tok is None else repr(tok.text)
        return ParseError(f"expected {expected}, found {found}", line, col)

    def _expect(self, text: str, expected: str | None = None) -> Token:
        if not self._at(text):
            raise self._err(expected or repr(text))
        return self._advance()

    def _ident(self, expected: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind != "identifier":
            raise self._err(expected)
        return self._advance()

    # -- program / rules --------------------------------------------------

    def parse_program(self) -> Program:
        rules = []
        while self._peek() is not None:
            rules.append(self._rule())
        return Program(tuple(rules))

    def _rule(self) -> Rule:
        head = self._head()
        body = None
        if self._at(":-"):
            self._advance()
            body = self._body(stop="; at end of rule")
        if self._peek() is None:
            return Rule(head, body, span=head.span)  # final ';' optional
        self._expect(";", "';' at end of rule")
        return Rule(head, body, span=head.span)

    def _head(self) -> HeadAtom:
        name_tok = self._ident("a rule head predicate")
        if not name_tok.text[0].isupper():
            raise ParseError(
                f"predicate name must start uppercase: {name_tok.text!r}",
                name_tok.line,
                name_tok.column,
            )
        span = (name_tok.line, name_tok.column)
        self._expect("(", "'(' after predicate name")
        named, positional = self._arg_list()
        self._expect(")", "')' or ',' in argument list")

        if self._at("="):
            if named is not None:
                raise ParseError(
                    "functional heads take positional arguments", name_tok.line, name_tok.column
                )
            self._advance()
            value = self._expr()
            return HeadAtom(
                FUNCTIONAL, name_tok.text, pos_args=positional, value_expr=value, span=span
            )

        nxt = self._peek()
        if nxt is not None and nxt.kind == "identifier" and self._at("=", offset=1):
            agg_tok = self._advance()
            self._advance()  # '='
            first = self._expr()
            weight = None
            value = first
            if self._at("->"):
                self._advance()
                weight = first
                value = self._expr()
            return HeadAtom(
                AGGREGATING,
                name_tok.text,
                named_args=named,
                pos_args=positional,
                agg_name=agg_tok.text,
                agg_weight=weight,
                agg_expr=value,
                span=span,
            )

        if named is None and positional is not None and len(positional) > 0:
            # Relational heads with positional args are allowed: fields arg0..argN.
            return HeadAtom(RELATIONAL, name_tok.text, pos_args=positional, span=span)
        return HeadAtom(
            RELATIONAL, name_tok.text, named_args=named, pos_args=positional, span=span
        )

    def _arg_list(self):
        """Parse inside parens: returns (named_args | None, pos_args | None)."""
        if self._at(")"):
            return None, ()
        first = self._peek()
        if (
            first is not None
            and first.kind == "identifier"
            and not first.text[0].isupper()
            and self._at(":", offset=1)
        ):
            named = [self._named_arg()]
            while self._at(","):
                self._advance()
                named.append(self._named_arg())
            return tuple(named), None
        positional = [self._expr()]
        while self._at(","):
            self._advance()
            positional.append(self._expr())
        return None, tuple(positional)

    def _named_arg(self) -> tuple[str, Expr]:
        field_tok = self._ident("an argument name")
        self._expect(":", "':' after argument name")
        if self._at(",") or self._at(")"):
            # Shorthand `P(field:)` means `P(field: field)`.
            return field_tok.text, Var(field_tok.text, span=(field_tok.line, field_tok.column))
        return field_tok.text, self._expr()

    # -- body --------------------------------------------------------------

    def _body(self, stop: str) -> BodyExpr:
        disjuncts = [self._conjunction(stop)]
        while self._at("|"):
            self._advance()
            disjuncts.append(self._conjunction(stop))
        return BodyExpr(tuple(disjuncts))

    def _conjunction(self, stop: str) -> Conjunction:
        literals = [self._literal(stop)]
        while self._at(","):
            self._advance()
            literals.append(self._literal(stop))
        return Conjunction(tuple(literals))

    def _literal(self, stop: str) -> BodyLiteral:
        tok = self._peek()
        if tok is None:
            raise self._err(stop)
        span = (tok.line, tok.column)

        if tok.kind == "identifier" and tok.text[0].isupper() and self._at("(", offset=1):
            # Could be a predicate literal or the start of an expression
            # (`F(x) + 1 > 0`); commit to the atom reading only when the
            # following token ends a literal.
            save = self.pos
            try:
                atom = self._atom_literal()
            except ParseError:
                self.pos = save
                atom = None
            if atom is not None:
                if self._peek() is None or self._at(",") or self._at("|") or self._at(";") or self._at("}"):
                    return atom
                self.pos = save

        expr = self._expr()
        if self._at("in"):
            self._advance()
            if not isinstance(expr, Var):
                raise ParseError(
                    "left side of 'in' must be a variable", span[0], span[1]
                )
            return MembershipLiteral(expr.name, self._expr(), span=span)
        if self._at("=") or self._at("=="):
            self._advance()
            return EqualityLiteral(expr, self._expr(), span=span)
        return GuardLiteral(expr, span=span)

    def _atom_literal(self) -> PredicateLiteral:
        name_tok = self._advance()
        span = (name_tok.line, name_tok.column)
        self._expect("(", "'('")
        named, positional = self._arg_list()
        self._expect(")", "')' or ',' in argument list")
        return PredicateLiteral(name_tok.text, named, positional, span=span)

    # -- expressions ---------------------------------------------------------

    def _expr(self) -> Expr:
        left = self._additive()
        for op in _CMP_OPS:
            if self._at(op):
                self._advance()
                return BinaryOp(op, left, self._additive())
        return left

    def _additive(self) -> Expr:
        left = self._multiplicative()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            left = BinaryOp(op, left, self._multiplicative())
        return left

    def _multiplicative(self) -> Expr:
        left = self._unary()
        while self._at("*") or self._at("/"):
            op = self._advance().text
            left = BinaryOp(op, left, self._unary())
        return left

    def _unary(self) -> Expr:
        if self._at("-"):
            self._advance()
            operand = self._unary()
            if isinstance(operand, Const) and isinstance(operand.value, float):
                return Const(-operand.value)
            return UnaryOp("-", operand)
        return self._postfix()

    def _postfix(self) -> Expr:
        expr = self._primary()
        while self._at("."):
            self._advance()
            field_tok = self._ident("a field name after '.'")
            expr = FieldAccess(expr, field_tok.text)
        return expr

    def _primary(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise self._err("an expression")

        if tok.kind == "number":
            self._advance()
            return Const(float(tok.text))
        if tok.kind == "string":
            self._advance()
            return Const(decode_string(tok.text))
        if tok.kind == "keyword":
            if tok.text == "null":
                self._advance()
                return Const(None)
            if tok.text == "true":
                self._advance()
                return Const(True)
            if tok.text == "false":
                self._advance()
                return Const(False)
            raise self._err("an expression")

        if tok.kind == "identifier":
            if tok.text[0].isupper():
                return self._call_or_aggregate()
            self._advance()
            return Var(tok.text, span=(tok.line, tok.column))

        if self._at("("):
            self._advance()
            inner = self._expr()
            self._expect(")", "')'")
            return inner
        if self._at("{"):
            return self._record()
        if self._at("["):
            self._advance()
            items = []
            if not self._at("]"):
                items.append(self._expr())
                while self._at(","):
                    self._advance()
                    items.append(self._expr())
            self._expect("]", "']'")
            return ListExpr(tuple(items))

        raise self._err("an expression")

    def _call_or_aggregate(self) -> Expr:
        name_tok = self._advance()
        span = (name_tok.line, name_tok.column)
        if self._at("{"):
            self._advance()
            first = self._expr()
            weight = None
            value = first
            if self._at("->"):
                self._advance()
                weight = first
                value = self._expr()
            self._expect(":-", "':-' introducing the aggregation body")
            body = self._body(stop="'}' closing the aggregation")
            self._expect("}", "'}' closing the aggregation")
            return Aggregate(name_tok.text, weight, value, body, span=span)
        self._expect("(", "'(' or '{' after name")
        args = []
        if not self._at(")"):
            args.append(self._expr())
            while self._at(","):
                self._advance()
                args.append(self._expr())
        self._expect(")", "')' or ',' in call arguments")
        return Call(name_tok.text, tuple(args), span=span)

    def _record(self) -> Expr:
        self._expect("{", "'{'")
        fields = []
        if not self._at("}"):
            fields.append(self._record_field())
            while self._at(","):
                self._advance()
                fields.append(self._record_field())
        self._expect("}", "'}' or ',' in record")
        return RecordExpr(tuple(fields))

    def _record_field(self) -> tuple[str, Expr]:
        name_tok = self._ident("a record field name")
        self._expect(":", "':' after record field name")
        return name_tok.text, self._expr()


def parse_program(source: str) -> Program:
    """Parse LogiCore source into a Program AST.

    Raises ParseError (syntax) or LexError (lexical), each with line/column.
    """
    return _Parser(source).parse_program()


__all__ = ["parse_program", "ParseError", "LexError"]
