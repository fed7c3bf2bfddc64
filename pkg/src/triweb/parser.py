"""Recursive-descent parser for the expression grammar.

Grammar (whitespace-insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := number | ident | '(' expr ')' | '-' base | 'sqrt' '(' expr ')'
    number := integer ('/' integer)?

sqrt is admitted only in numeric mode.  A number like 3/4 is a single
rational literal, so 3/4^2 parses as (3/4)^2; x/4^2 stays x/(4^2).  Symbolic
mode folds the tree straight into a canonical RatExpr; numeric mode returns
the expression tree for float/jet evaluation.
"""

from __future__ import annotations

import re

from .kernel import QQ
from . import numeric as N
from .rational import RatExpr


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|([-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = n - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group(1):
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("ident", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, numeric_mode):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.numeric_mode = numeric_mode

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                node = N.Add(node, rhs) if val == "+" else N.Sub(node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.factor()
                node = N.Mul(node, rhs) if val == "*" else N.Div(node, rhs)
            else:
                return node

    def factor(self):
        node = self.base()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            sign = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "-":
                self.advance()
                sign = -1
                kind, val, pos = self.peek()
            if kind != "num":
                raise ParseError("expected integer exponent after '^'", pos)
            self.advance()
            node = N.Pow(node, sign * int(val))
        return node

    def base(self):
        kind, val, pos = self.advance()
        if kind == "num":
            # greedy rational literal: integer '/' integer
            k2, v2, p2 = self.peek()
            if k2 == "op" and v2 == "/":
                k3, v3, p3 = self.tokens[self.i + 1]
                if k3 == "num":
                    self.i += 2
                    if int(v3) == 0:
                        raise ParseError("division by zero constant", p3)
                    return N.Const(QQ(int(val), int(v3)))
            return N.Const(QQ(int(val)))
        if kind == "ident":
            if val == "sqrt":
                k2, v2, p2 = self.peek()
                if k2 == "op" and v2 == "(":
                    if not self.numeric_mode:
                        raise ParseError("sqrt is not allowed in symbolic mode",
                                         pos)
                    self.advance()
                    arg = self.expr()
                    self.expect_op(")")
                    return N.Sqrt(arg)
                raise ParseError("sqrt must be applied to a parenthesized "
                                 "argument", pos)
            return N.Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "op" and val == "-":
            return N.Neg(self.base())
        raise ParseError(f"unexpected token {val!r}" if val else
                         "unexpected end of input", pos)


def parse_numeric(text):
    """Parse in numeric mode: returns a NumExpr tree (sqrt allowed)."""
    return _Parser(text, numeric_mode=True).parse()


def parse_symbolic(text):
    """Parse in symbolic mode: returns a canonical RatExpr."""
    tree = _Parser(text, numeric_mode=False).parse()
    return _lower(tree)


def parse(text, mode="symbolic"):
    if mode == "symbolic":
        return parse_symbolic(text)
    if mode == "numeric":
        return parse_numeric(text)
    raise ValueError(f"unknown parse mode {mode!r}")


def _lower(node):
    if isinstance(node, N.Const):
        return RatExpr.const(node.value)
    if isinstance(node, N.Var):
        return RatExpr.var(node.name)
    if isinstance(node, N.Add):
        return _lower(node.left) + _lower(node.right)
    if isinstance(node, N.Sub):
        return _lower(node.left) - _lower(node.right)
    if isinstance(node, N.Mul):
        return _lower(node.left) * _lower(node.right)
    if isinstance(node, N.Div):
        den = _lower(node.right)
        if den.is_zero:
            raise ParseError(f"division by zero expression '{node.right}'", 0)
        return _lower(node.left) / den
    if isinstance(node, N.Pow):
        return _lower(node.base) ** node.exponent
    if isinstance(node, N.Neg):
        return -_lower(node.arg)
    raise ParseError("sqrt is not allowed in symbolic mode", 0)
