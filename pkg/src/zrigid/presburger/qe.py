"""Cooper-style quantifier elimination and the single-variable congruence normal form."""

from __future__ import annotations

import itertools
import math
from functools import reduce
from typing import List

from ..errors import CapacityExceeded
from ..profinite import factorize
from .syntax import (ATOMS, FALSE, TRUE, And, Cong, Const, Eq, Exists, Forall, Formula, Le,
                     Not, Or, Term, cong, eq, free_vars, is_quantifier_free, le, mk_and, mk_not,
                     mk_or, size, substitute)

DEFAULT_NODE_CAP = 10 ** 6


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form of a quantifier-free formula.

    Negated inequalities and equalities are rewritten into positive atoms;
    only congruences may remain under a ``Not``.
    """
    if isinstance(f, Const):
        return f if positive else Const(not f.value)
    if isinstance(f, Le):
        return f if positive else le((-f.term).shift(1))
    if isinstance(f, Eq):
        if positive:
            return f
        return mk_or([le(f.term.shift(1)), le((-f.term).shift(1))])
    if isinstance(f, Cong):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = [nnf(a, positive) for a in f.args]
        return mk_and(parts) if positive else mk_or(parts)
    if isinstance(f, Or):
        parts = [nnf(a, positive) for a in f.args]
        return mk_or(parts) if positive else mk_and(parts)
    raise TypeError(f"nnf needs a quantifier-free formula, got {type(f).__name__}")


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap

    def check(self, f: Formula) -> Formula:
        if size(f) > self.cap:
            raise CapacityExceeded(f"formula exceeds node cap {self.cap}")
        return f


def _literals_with(f: Formula, x: str):
    """Atoms mentioning ``x`` in an NNF formula, regardless of polarity."""
    if isinstance(f, ATOMS):
        if f.term.coeff(x):
            yield f
    elif isinstance(f, Not):
        yield from _literals_with(f.arg, x)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _literals_with(a, x)


def _map_nnf(f: Formula, fn) -> Formula:
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return mk_not(_map_nnf(f.arg, fn))
    if isinstance(f, And):
        return mk_and(_map_nnf(a, fn) for a in f.args)
    if isinstance(f, Or):
        return mk_or(_map_nnf(a, fn) for a in f.args)
    raise TypeError(type(f).__name__)


def _scale_atom(a, k: int):
    """Multiply an atom through by the positive integer ``k`` (same truth set)."""
    if isinstance(a, Le):
        return Le(a.term.scale(k))
    if isinstance(a, Eq):
        return Eq(a.term.scale(k))
    return Cong(a.modulus * k, a.term.scale(k))


def _rebuild(a, t: Term):
    if isinstance(a, Le):
        return le(t)
    if isinstance(a, Eq):
        return eq(t)
    return cong(a.modulus, t)


def _eliminate_by_equation(x: str, eqn: Eq, rest: Formula) -> Formula:
    """exists x (a*x + s = 0 & rest)  ==  a | s & rest[x := -s/a], cleared of denominators."""
    a = eqn.term.coeff(x)
    s = eqn.term.without(x)
    if a < 0:
        a, s = -a, -s

    def sub(atom):
        c = atom.term.coeff(x)
        if c == 0:
            return atom
        # a*(c*x + r) with a*x = -s
        t = (-s).scale(c) + atom.term.without(x).scale(a)
        if isinstance(atom, Cong):
            return cong(atom.modulus * a, t)
        return _rebuild(atom, t)

    return mk_and([cong(a, s), _map_nnf(rest, sub)])


def _cooper(x: str, f: Formula, budget: _Budget) -> Formula:
    lits = list(_literals_with(f, x))
    delta = reduce(_lcm, (abs(a.term.coeff(x)) for a in lits), 1)

    def unit(atom):
        c = atom.term.coeff(x)
        if c == 0:
            return atom
        k = delta // abs(c)
        t = atom.term.without(x).scale(k) + Term.var(x, 1 if c > 0 else -1)
        if isinstance(atom, Cong):
            return Cong(atom.modulus * k, t)
        return type(atom)(t)

    g = _map_nnf(f, unit)
    if delta > 1:
        g = mk_and([g, Cong(delta, Term.var(x))])

    lower, upper = [], []
    period = 1
    for a in _literals_with(g, x):
        c = a.term.coeff(x)
        rest = a.term.without(x)
        if isinstance(a, Cong):
            period = _lcm(period, a.modulus)
        elif isinstance(a, Eq):
            # x = -rest (c = 1) or x = rest (c = -1)
            point = -rest if c > 0 else rest
            lower.append(point)
            upper.append(point)
        elif c > 0:
            upper.append(-rest)       # x <= -rest
        else:
            lower.append(rest)        # x >= rest
    lower = list(dict.fromkeys(lower))
    upper = list(dict.fromkeys(upper))

    use_lower = len(lower) <= len(upper)

    def at_infinity(atom):
        c = atom.term.coeff(x)
        if c == 0 or isinstance(atom, Cong):
            return atom
        if isinstance(atom, Eq):
            return FALSE
        # left end: upper bounds (c > 0) hold, lower bounds fail
        if use_lower:
            return TRUE if c > 0 else FALSE
        return FALSE if c > 0 else TRUE

    inf = _map_nnf(g, at_infinity)
    disjuncts: List[Formula] = []
    step = 1 if use_lower else -1
    total = 0

    def push(d: Formula):
        nonlocal total
        total += size(d)
        if total > budget.cap:
            raise CapacityExceeded(f"formula exceeds node cap {budget.cap}")
        disjuncts.append(d)

    for j in range(1, period + 1):
        push(substitute(inf, x, Term.constant(step * j)))
    for b in (lower if use_lower else upper):
        for j in range(period):
            push(substitute(g, x, b.shift(step * j)))
    return budget.check(mk_or(disjuncts))


def _exists(x: str, f: Formula, budget: _Budget) -> Formula:
    f = nnf(f)
    if x not in free_vars(f):
        return f
    if isinstance(f, Or):
        return budget.check(mk_or(_exists(x, a, budget) for a in f.args))
    args = f.args if isinstance(f, And) else (f,)
    outside = [a for a in args if x not in free_vars(a)]
    inside = [a for a in args if x in free_vars(a)]
    for i, a in enumerate(inside):
        if isinstance(a, Eq):
            rest = mk_and(inside[:i] + inside[i + 1:])
            return budget.check(mk_and(outside + [_eliminate_by_equation(x, a, rest)]))
    core = _cooper(x, mk_and(inside), budget)
    return budget.check(mk_and(outside + [core]))


def eliminate_quantifiers(f: Formula, node_cap: int = DEFAULT_NODE_CAP) -> Formula:
    """Equivalent quantifier-free formula (term congruences allowed)."""
    budget = _Budget(node_cap)
    return _eliminate(f, budget)


def _eliminate(f: Formula, budget: _Budget) -> Formula:
    if isinstance(f, Exists):
        return _exists(f.var, _eliminate(f.body, budget), budget)
    if isinstance(f, Forall):
        body = _eliminate(f.body, budget)
        return nnf(mk_not(_exists(f.var, nnf(mk_not(body)), budget)))
    if isinstance(f, Not):
        return nnf(mk_not(_eliminate(f.arg, budget)))
    if isinstance(f, And):
        return mk_and(_eliminate(a, budget) for a in f.args)
    if isinstance(f, Or):
        return mk_or(_eliminate(a, budget) for a in f.args)
    return f


def decide_sentence(f: Formula, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Truth value in <Z, +, <=> of a sentence (hence in every Z-group)."""
    from .semantics import eval_qf_int

    leftover = free_vars(f)
    if leftover:
        raise ValueError(f"not a sentence: free variables {sorted(leftover)}")
    return eval_qf_int(eliminate_quantifiers(f, node_cap), {})


# ---------------------------------------------------------------------------
# normal form


def _single_var_cong(m: int, t: Term) -> Formula:
    """Normalized ``t == 0 (mod m)`` with exactly one variable, coefficient 1."""
    ((v, c),) = t.coeffs
    g = math.gcd(c, m)
    if t.const % g:
        return FALSE
    m2 = m // g
    if m2 == 1:
        return TRUE
    r = (-(t.const // g) * pow(c // g, -1, m2)) % m2
    return cong(m2, Term.var(v), r)


def _expand_cong(a: Cong, budget: _Budget) -> Formula:
    if len(a.term.coeffs) == 1:
        return _single_var_cong(a.modulus, a.term)
    parts = []
    for p, e in factorize(a.modulus).items():
        pe = p ** e
        vars_, mods = [], []
        for v, c in a.term.coeffs:
            c %= pe
            if c == 0:
                continue
            vp = 0
            while c % p == 0 and vp < e:
                c //= p
                vp += 1
            vars_.append((v, a.term.coeff(v)))
            mods.append(p ** (e - vp))
        if not vars_:
            parts.append(Const(a.term.const % pe == 0))
            continue
        count = 1
        for mi in mods:
            count *= mi
        if count > budget.cap:
            raise CapacityExceeded(f"congruence expansion of {count} cases exceeds node cap")
        options = []
        for residues in itertools.product(*(range(mi) for mi in mods)):
            total = a.term.const + sum(c * r for (_, c), r in zip(vars_, residues))
            if total % pe == 0:
                options.append(mk_and(cong(mi, Term.var(v), r)
                                      for (v, _), mi, r in zip(vars_, mods, residues)))
        parts.append(mk_or(options))
    return budget.check(mk_and(parts))


def normalize(f: Formula, node_cap: int = DEFAULT_NODE_CAP) -> Formula:
    """Rewrite a quantifier-free formula so every congruence has one variable.

    Equalities become pairs of inequalities; multi-variable congruences are
    split over prime powers and expanded into residue tuples.
    """
    if not is_quantifier_free(f):
        raise ValueError("normalize needs a quantifier-free formula")
    budget = _Budget(node_cap)

    def atom(a):
        if isinstance(a, Le):
            return a
        if isinstance(a, Eq):
            return mk_and([le(a.term), le(-a.term)])
        return _expand_cong(a, budget)

    def walk(g):
        if isinstance(g, ATOMS):
            return atom(g)
        if isinstance(g, Const):
            return g
        if isinstance(g, Not):
            return mk_not(walk(g.arg))
        if isinstance(g, And):
            return mk_and(walk(a) for a in g.args)
        return mk_or(walk(a) for a in g.args)

    return budget.check(walk(nnf(f)))


def is_normal_form(f: Formula) -> bool:
    if isinstance(f, Cong):
        return len(f.term.coeffs) == 1 and f.term.coeffs[0][1] == 1
    if isinstance(f, Eq) or isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_normal_form(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_normal_form(a) for a in f.args)
    return True
