"""Presburger terms and formulas.

Atoms are kept in a normalized single-term shape: ``Le(t)`` is ``t <= 0``,
``Eq(t)`` is ``t = 0`` and ``Cong(m, t)`` is ``t == 0 (mod m)``. The smart
constructors :func:`le`, :func:`eq`, :func:`cong`, :func:`mk_and`,
:func:`mk_or` and :func:`mk_not` fold constants and divide out common
factors, so structurally equal formulas compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple, Union


@dataclass(frozen=True)
class Term:
    coeffs: Tuple[Tuple[str, int], ...] = ()
    const: int = 0

    @classmethod
    def make(cls, coeffs: Mapping[str, int], const: int = 0) -> "Term":
        return cls(tuple(sorted((v, int(c)) for v, c in coeffs.items() if c != 0)), int(const))

    @classmethod
    def var(cls, name: str, coeff: int = 1) -> "Term":
        return cls.make({name: coeff})

    @classmethod
    def constant(cls, k: int) -> "Term":
        return cls((), int(k))

    def as_dict(self) -> Dict[str, int]:
        return dict(self.coeffs)

    def coeff(self, v: str) -> int:
        for name, c in self.coeffs:
            if name == v:
                return c
        return 0

    @property
    def vars(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def __add__(self, other: "Term") -> "Term":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return Term.make(d, self.const + other.const)

    def __neg__(self) -> "Term":
        return Term(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other: "Term") -> "Term":
        return self + (-other)

    def scale(self, k: int) -> "Term":
        return Term.make({v: c * k for v, c in self.coeffs}, self.const * k)

    def shift(self, k: int) -> "Term":
        return Term(self.coeffs, self.const + k)

    def without(self, v: str) -> "Term":
        return Term(tuple((n, c) for n, c in self.coeffs if n != v), self.const)

    def substitute(self, v: str, t: "Term") -> "Term":
        c = self.coeff(v)
        if c == 0:
            return self
        return self.without(v) + t.scale(c)

    def rename(self, mapping: Mapping[str, str]) -> "Term":
        return Term.make({mapping.get(v, v): c for v, c in self.coeffs}, self.const)

    def evaluate(self, env: Mapping[str, int]):
        total = self.const
        for v, c in self.coeffs:
            total = total + c * env[v]
        return total

    def var_part(self) -> "Term":
        return Term(self.coeffs, 0)

    def __str__(self):
        return format_term(self)


def format_term(t: Term, with_const: bool = True) -> str:
    parts = []
    for v, c in t.coeffs:
        mag = abs(c)
        body = v if mag == 1 else f"{mag}*{v}"
        parts.append(("-" if c < 0 else "+", body))
    if with_const and (t.const != 0 or not parts):
        parts.append(("-" if t.const < 0 else "+", str(abs(t.const))))
    out = ""
    for i, (s, body) in enumerate(parts):
        if i == 0:
            out = body if s == "+" else f"-{body}"
        else:
            out += f" {s} {body}"
    return out


class Formula:
    """Base class of the formula AST."""

    __slots__ = ()

    def __and__(self, other):
        return mk_and([self, other])

    def __or__(self, other):
        return mk_or([self, other])

    def __invert__(self):
        return mk_not(self)

    def __str__(self):
        from .printer import to_text

        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Le(Formula):
    term: Term


@dataclass(frozen=True)
class Eq(Formula):
    term: Term


@dataclass(frozen=True)
class Cong(Formula):
    modulus: int
    term: Term

    @property
    def residue(self) -> int:
        """``r`` such that the atom reads ``var_part == r (mod m)``."""
        return (-self.term.const) % self.modulus


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Atom = Union[Le, Eq, Cong]
ATOMS = (Le, Eq, Cong)


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def le(t: Term) -> Formula:
    """``t <= 0``."""
    if not t.coeffs:
        return Const(t.const <= 0)
    g = _gcd_all(c for _, c in t.coeffs)
    if g > 1:
        t = Term(tuple((v, c // g) for v, c in t.coeffs), -((-t.const) // g))
    return Le(t)


def leq(lhs: Term, rhs: Term) -> Formula:
    return le(lhs - rhs)


def eq(t: Term, rhs: Term = None) -> Formula:
    """``t = 0`` (or ``t = rhs``)."""
    if rhs is not None:
        t = t - rhs
    if not t.coeffs:
        return Const(t.const == 0)
    g = _gcd_all(c for _, c in t.coeffs)
    if t.const % g:
        return FALSE
    if t.coeffs[0][1] < 0:
        g = -g
    return Eq(Term(tuple((v, c // g) for v, c in t.coeffs), t.const // g))


def cong(m: int, t: Term, r: int = 0) -> Formula:
    """``t == r (mod m)``; negative moduli and any residue are accepted."""
    m = abs(int(m))
    if m == 0:
        return eq(t.shift(-r))
    t = t.shift(-r)
    coeffs = tuple((v, c % m) for v, c in t.coeffs if c % m)
    const = t.const % m
    h = _gcd_all([m] + [c for _, c in coeffs])
    if const % h:
        return FALSE
    if h > 1:
        m //= h
        coeffs = tuple((v, c // h) for v, c in coeffs)
        const //= h
    if m == 1:
        return TRUE
    if not coeffs:
        return Const(const % m == 0)
    return Cong(m, Term(coeffs, const))


def mk_not(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def _flatten(args: Iterable[Formula], cls) -> list:
    out, seen = [], set()
    for a in args:
        items = a.args if isinstance(a, cls) else (a,)
        for item in items:
            if item not in seen:
                seen.add(item)
                out.append(item)
    return out


def mk_and(args: Iterable[Formula]) -> Formula:
    items = []
    for a in _flatten(args, And):
        if a == FALSE:
            return FALSE
        if a != TRUE:
            items.append(a)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def mk_or(args: Iterable[Formula]) -> Formula:
    items = []
    for a in _flatten(args, Or):
        if a == TRUE:
            return TRUE
        if a != FALSE:
            items.append(a)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


def mk_implies(a: Formula, b: Formula) -> Formula:
    return mk_or([mk_not(a), b])


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, ATOMS):
        return frozenset(f.term.vars)
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    return True


def size(f: Formula) -> int:
    """Number of AST nodes, counting each atom as one."""
    if isinstance(f, Not):
        return 1 + size(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a) for a in f.args)
    if isinstance(f, (Exists, Forall)):
        return 1 + size(f.body)
    return 1


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild a quantifier-free formula with every atom replaced by ``fn(atom)``."""
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return mk_not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return mk_and(map_atoms(a, fn) for a in f.args)
    if isinstance(f, Or):
        return mk_or(map_atoms(a, fn) for a in f.args)
    raise TypeError(f"map_atoms needs a quantifier-free formula, got {type(f).__name__}")


def atoms(f: Formula):
    if isinstance(f, ATOMS):
        yield f
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, (Exists, Forall)):
        yield from atoms(f.body)


def substitute(f: Formula, v: str, t: Term) -> Formula:
    """Replace the free variable ``v`` by ``t`` in a quantifier-free formula."""

    def sub(a):
        if isinstance(a, Le):
            return le(a.term.substitute(v, t))
        if isinstance(a, Eq):
            return eq(a.term.substitute(v, t))
        return cong(a.modulus, a.term.substitute(v, t))

    return map_atoms(f, sub)
