"""Render formulas back into the input grammar (round-trips through ``parse``)."""

from __future__ import annotations

from .syntax import (And, Cong, Const, Eq, Exists, Forall, Formula, Le, Not, Or, Term,
                     format_term)

_PREC = {"quant": 0, "or": 2, "and": 3, "not": 4, "atom": 5}


def _atom_text(f) -> str:
    t: Term = f.term
    if isinstance(f, Cong):
        return f"{format_term(t.var_part())} == {f.residue} (mod {f.modulus})"
    op = "<=" if isinstance(f, Le) else "="
    lhs = format_term(t.var_part())
    return f"{lhs} {op} {-t.const}"


def _render(f: Formula):
    if isinstance(f, Const):
        return ("true" if f.value else "false"), _PREC["atom"]
    if isinstance(f, (Le, Eq, Cong)):
        return _atom_text(f), _PREC["atom"]
    if isinstance(f, Not):
        inner, p = _render(f.arg)
        if p < _PREC["atom"] or isinstance(f.arg, (Le, Eq, Cong)):
            inner = f"({inner})"
        return f"!{inner}", _PREC["not"]
    if isinstance(f, (And, Or)):
        key = "and" if isinstance(f, And) else "or"
        sep = " & " if key == "and" else " | "
        parts = []
        for a in f.args:
            text, p = _render(a)
            parts.append(f"({text})" if p <= _PREC[key] else text)
        return sep.join(parts), _PREC[key]
    if isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        body, _ = _render(f.body)
        return f"{q} {f.var}. {body}", _PREC["quant"]
    raise TypeError(f"cannot render {f!r}")


def to_text(f: Formula) -> str:
    return _render(f)[0]
