"""Bounded brute-force semantics, used as an independent check on elimination.

A quantifier ``Q v. phi`` is evaluated by enumerating ``v`` over a window
``[-W, W]``. When ``phi`` is quantifier-free the window is exact: outside
``max |rest| / |a|`` over the atoms ``a*v + rest`` every (in)equality has a
fixed truth value, and the congruences repeat with the lcm ``M`` of their
moduli, so ``W = max |rest|/|a| + M + 1`` sees every behaviour. When ``phi``
itself has quantifiers, the window is taken from the atoms of its eliminated
form (the instance's Cooper bound); the enumeration of ``phi`` below it stays
brute force.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Dict, List, Sequence

import numpy as np

from .qe import eliminate_quantifiers
from .semantics import eval_array
from .syntax import (And, Cong, Const, Eq, Exists, Forall, Formula, Le, Not, Or, atoms,
                     is_quantifier_free)


class BoundedEvaluator:
    def __init__(self, node_cap: int = 10 ** 6):
        self.node_cap = node_cap
        self._qf_cache: Dict[Formula, Formula] = {}
        self.max_window = 0

    def _quantifier_free(self, f: Formula) -> Formula:
        if is_quantifier_free(f):
            return f
        if f not in self._qf_cache:
            self._qf_cache[f] = eliminate_quantifiers(f, self.node_cap)
        return self._qf_cache[f]

    def window(self, v: str, body: Formula, env) -> int:
        psi = self._quantifier_free(body)
        crit, period = 0, 1
        for a in atoms(psi):
            c = a.term.coeff(v)
            if c == 0:
                continue
            if isinstance(a, Cong):
                period = period * a.modulus // math.gcd(period, a.modulus)
                continue
            rest = a.term.without(v)
            value = np.abs(np.asarray(rest.evaluate(env)))
            crit = max(crit, -(-int(value.max()) // abs(c)))
        w = crit + period + 1
        self.max_window = max(self.max_window, w)
        return w

    def evaluate(self, f: Formula, env, ndim: int) -> np.ndarray:
        if isinstance(f, (Exists, Forall)):
            w = self.window(f.var, f.body, env)
            inner = {k: np.asarray(a)[..., None] for k, a in env.items()}
            inner[f.var] = np.arange(-w, w + 1).reshape((1,) * ndim + (2 * w + 1,))
            res = np.asarray(self.evaluate(f.body, inner, ndim + 1))
            if res.ndim < ndim + 1:
                res = res.reshape((1,) * (ndim + 1 - res.ndim) + res.shape)
            return res.any(axis=-1) if isinstance(f, Exists) else res.all(axis=-1)
        if isinstance(f, Not):
            return ~self.evaluate(f.arg, env, ndim)
        if isinstance(f, And):
            out = np.asarray(True)
            for a in f.args:
                out = out & self.evaluate(a, env, ndim)
            return out
        if isinstance(f, Or):
            out = np.asarray(False)
            for a in f.args:
                out = out | self.evaluate(a, env, ndim)
            return out
        return eval_array(f, env)


def brute_force_grid(f: Formula, free: Sequence[str], box: int = 50,
                     evaluator: BoundedEvaluator = None) -> np.ndarray:
    """Truth table of ``f`` on ``[-box, box]^k`` by bounded enumeration.

    Axis ``i`` of the result is indexed by ``free[i] + box``.
    """
    ev = evaluator or BoundedEvaluator()
    values = np.arange(-box, box + 1, dtype=np.int64)
    k = len(free)
    if k == 0:
        return np.asarray(ev.evaluate(f, {}, 0), dtype=bool)
    rest = free[1:]
    grids = np.meshgrid(*([values] * len(rest)), indexing="ij") if rest else []
    rows = []
    for x0 in values:
        env = {free[0]: np.full(grids[0].shape if rest else (), x0, dtype=np.int64)}
        env.update(dict(zip(rest, grids)))
        res = np.asarray(ev.evaluate(f, env, len(rest)))
        rows.append(np.broadcast_to(res, (len(values),) * len(rest)))
    return np.stack(rows).astype(bool)


def grid_eval(f: Formula, free: Sequence[str], box: int = 50) -> np.ndarray:
    """Truth table of a quantifier-free formula on ``[-box, box]^k``."""
    values = np.arange(-box, box + 1, dtype=np.int64)
    if not free:
        return np.asarray(eval_array(f, {}), dtype=bool)
    grids = np.meshgrid(*([values] * len(free)), indexing="ij")
    res = eval_array(f, dict(zip(free, grids)))
    return np.broadcast_to(res, grids[0].shape).astype(bool)
