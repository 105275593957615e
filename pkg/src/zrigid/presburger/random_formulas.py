"""Seeded random formula generator for soundness checks.

Formulas use at most three variables, coefficients in ``[-5, 5]``, moduli in
``[2, 6]`` and quantifier depth at most two.
"""

from __future__ import annotations

import random
from typing import List, Tuple

from .syntax import Exists, Forall, Formula, Term, cong, eq, le, mk_and, mk_not, mk_or

VARIABLES = ("x", "y", "z")


def random_term(rng: random.Random, variables: List[str], max_coeff: int = 5,
                max_const: int = 10) -> Term:
    coeffs = {}
    for v in variables:
        if rng.random() < 0.7:
            coeffs[v] = rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c])
    if not coeffs:
        coeffs[rng.choice(variables)] = rng.choice([-1, 1])
    return Term.make(coeffs, rng.randint(-max_const, max_const))


def random_atom(rng: random.Random, variables: List[str], max_coeff: int = 5,
                max_modulus: int = 6) -> Formula:
    t = random_term(rng, variables, max_coeff)
    kind = rng.random()
    if kind < 0.5:
        return le(t)
    if kind < 0.7:
        return eq(t)
    return cong(rng.randint(2, max_modulus), t, 0)


def random_qf(rng: random.Random, variables: List[str], n_atoms: int, and_bias: float = 0.6,
              **kw) -> Formula:
    parts = [random_atom(rng, variables, **kw) for _ in range(n_atoms)]
    parts = [mk_not(p) if rng.random() < 0.25 else p for p in parts]
    f = parts[0]
    for p in parts[1:]:
        f = mk_and([f, p]) if rng.random() < and_bias else mk_or([f, p])
    return f


def random_formula(rng: random.Random, n_free: int, depth: int, max_atoms: int = 3,
                   **kw) -> Tuple[Formula, List[str]]:
    """A formula with ``n_free`` free and ``depth`` nested bound variables."""
    if n_free + depth > len(VARIABLES):
        raise ValueError("at most three variables")
    free = list(VARIABLES[:n_free])
    bound = list(VARIABLES[n_free:n_free + depth])
    quants = [rng.random() < 0.5 for _ in range(depth)]
    # guarded shapes: conjunctions under an existential, disjunctions under a universal
    bias = 0.6 if not depth else (0.8 if quants[-1] else 0.2)
    body = random_qf(rng, free + bound, rng.randint(1, max_atoms), and_bias=bias, **kw)
    for i in reversed(range(depth)):
        v = bound[i]
        if i < depth - 1 and rng.random() < 0.4:
            side = random_qf(rng, free + bound[:i + 1], 1, **kw)
            body = mk_and([side, body]) if quants[i] else mk_or([side, body])
        body = Exists(v, body) if quants[i] else Forall(v, body)
    return body, free


def formula_suite(seed: int, count: int = 200) -> List[Tuple[Formula, List[str]]]:
    rng = random.Random(seed)
    shapes = [(1, 1), (2, 1), (1, 2), (0, 2), (0, 1), (2, 0)]
    weights = [4, 3, 3, 1, 1, 1]
    out = []
    for _ in range(count):
        n_free, depth = rng.choices(shapes, weights)[0]
        out.append(random_formula(rng, n_free, depth, max_atoms=4))
    return out
