"""Recursive-descent parser for the textual formula grammar.

::

    formula := formula "->" formula | formula "|" formula | formula "&" formula
             | "!" formula | ("A" | "E") var "." formula | "(" formula ")"
             | "true" | "false" | atom
    atom    := term ("=" | "!=" | "<=" | ">=" | "<" | ">") term
             | term "==" term "(mod" integer ")"
    term    := integer | var | integer ["*"] var | term ("+" | "-") term

Binding strength, tightest first: ``!``, ``&``, ``|``, ``->`` (right
associative); a quantifier body extends as far right as possible.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from ..errors import FormulaSyntaxError
from .syntax import (FALSE, TRUE, And, Cong, Const, Eq, Exists, Forall, Formula, Le, Not, Or,
                     Term, cong, eq, free_vars, leq, mk_and, mk_implies, mk_not, mk_or)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(->|==|<=|>=|!=|[-+*()<>=!&|.]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(pos, "a token", text)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, value: str, k: int = 0) -> bool:
        kind, v, _ = self.peek(k)
        return kind in ("op", "id") and v == value

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        if not self.at(value):
            self.fail(repr(value))
        return self.take()

    def fail(self, expected: str):
        raise FormulaSyntaxError(self.peek()[2], expected, self.text)

    # formulas

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return mk_implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.at("|"):
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.at("&"):
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.at("!"):
            self.take()
            return Not(self.unary())
        if self.at("A") or self.at("E"):
            q = self.take()[1]
            kind, name, _ = self.peek()
            if kind != "id" or name in ("A", "E", "mod", "true", "false"):
                self.fail("a variable")
            self.take()
            self.expect(".")
            body = self.formula()
            return Forall(name, body) if q == "A" else Exists(name, body)
        if self.at("("):
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true"):
            self.take()
            return TRUE
        if self.at("false"):
            self.take()
            return FALSE
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.term()
        kind, op, _ = self.peek()
        if kind != "op" or op not in ("=", "==", "!=", "<=", ">=", "<", ">"):
            self.fail("a comparison operator")
        self.take()
        rhs = self.term()
        if op == "==":
            self.expect("(")
            self.expect("mod")
            kind, val, _ = self.peek()
            neg = False
            if self.at("-"):
                self.take()
                neg = True
                kind, val, _ = self.peek()
            if kind != "int":
                self.fail("a modulus")
            self.take()
            self.expect(")")
            m = -int(val) if neg else int(val)
            if m == 0:
                raise FormulaSyntaxError(self.peek()[2], "a nonzero modulus", self.text)
            return cong(m, lhs - rhs)
        if op == "=":
            return eq(lhs - rhs)
        if op == "!=":
            return mk_not(eq(lhs - rhs))
        if op == "<=":
            return leq(lhs, rhs)
        if op == ">=":
            return leq(rhs, lhs)
        if op == "<":
            return leq(lhs.shift(1), rhs)
        return leq(rhs.shift(1), lhs)

    def term(self) -> Term:
        total = Term()
        sign = 1
        if self.at("-"):
            self.take()
            sign = -1
        elif self.at("+"):
            self.take()
        total = total + self.monomial().scale(sign)
        while self.at("+") or self.at("-"):
            sign = 1 if self.take()[1] == "+" else -1
            total = total + self.monomial().scale(sign)
        return total

    def monomial(self) -> Term:
        kind, val, _ = self.peek()
        if kind == "int":
            self.take()
            k = int(val)
            if self.at("*"):
                self.take()
                kind, val, _ = self.peek()
                if kind == "int":
                    self.take()
                    return Term.constant(k * int(val))
                return Term.var(self._var(), k)
            kind, val, _ = self.peek()
            if kind == "id" and val not in ("A", "E", "mod", "true", "false"):
                return Term.var(self._var(), k)
            return Term.constant(k)
        if kind == "id":
            name = self._var()
            if self.at("*"):
                self.take()
                kind, val, _ = self.peek()
                if kind != "int":
                    self.fail("an integer coefficient")
                self.take()
                return Term.var(name, int(val))
            return Term.var(name)
        self.fail("a term")

    def _var(self) -> str:
        kind, val, _ = self.peek()
        if kind != "id" or val in ("A", "E", "mod", "true", "false"):
            self.fail("a variable")
        self.take()
        return val


def _fresh(base: str, taken: set) -> str:
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def _hygiene(f: Formula, scope: dict, taken: set) -> Formula:
    """Rename bound variables that shadow an enclosing binder or a free variable."""
    if isinstance(f, (Le, Eq, Cong)):
        if not any(v in scope for v in f.term.vars):
            return f
        t = f.term.rename(scope)
        if isinstance(f, Le):
            return Le(t)
        if isinstance(f, Eq):
            return Eq(t)
        return Cong(f.modulus, t)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(_hygiene(f.arg, scope, taken))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_hygiene(a, scope, taken) for a in f.args))
    if isinstance(f, (Exists, Forall)):
        name = f.var
        if name in taken:
            name = _fresh(f.var, taken)
        taken.add(name)
        inner = dict(scope)
        if name != f.var:
            inner[f.var] = name
        else:
            inner.pop(f.var, None)
        return type(f)(name, _hygiene(f.body, inner, taken))
    raise TypeError(f"unexpected node {f!r}")


def parse(text: str) -> Formula:
    """Parse formula text; raises FormulaSyntaxError with a position."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail("end of input")
    return _hygiene(f, {}, set(free_vars(f)))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "eof":
        p.fail("end of input")
    return t
