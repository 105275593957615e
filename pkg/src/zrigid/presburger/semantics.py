"""Evaluation of quantifier-free formulas over Z, over numpy grids, and in Z-groups."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..errors import UnboundVariable
from .syntax import (And, Cong, Const, Eq, Exists, Forall, Formula, Le, Not, Or, Term,
                     free_vars)


def _term_value(t: Term, env: Mapping):
    missing = [v for v in t.vars if v not in env]
    if missing:
        raise UnboundVariable(f"no value for {', '.join(missing)}")
    return t.evaluate(env)


def eval_qf_int(f: Formula, env: Mapping[str, int]) -> bool:
    """Truth of a quantifier-free formula under an integer assignment."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Le):
        return _term_value(f.term, env) <= 0
    if isinstance(f, Eq):
        return _term_value(f.term, env) == 0
    if isinstance(f, Cong):
        return _term_value(f.term, env) % f.modulus == 0
    if isinstance(f, Not):
        return not eval_qf_int(f.arg, env)
    if isinstance(f, And):
        return all(eval_qf_int(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(eval_qf_int(a, env) for a in f.args)
    if isinstance(f, (Exists, Forall)):
        raise ValueError("eval_qf_int needs a quantifier-free formula")
    raise TypeError(f"not a formula: {f!r}")


def eval_array(f: Formula, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized :func:`eval_qf_int` over broadcastable integer arrays."""
    if isinstance(f, Const):
        return np.asarray(f.value)
    if isinstance(f, (Le, Eq, Cong)):
        val = _term_value(f.term, env)
        if isinstance(f, Le):
            return np.asarray(val <= 0)
        if isinstance(f, Eq):
            return np.asarray(val == 0)
        return np.asarray(val % f.modulus == 0)
    if isinstance(f, Not):
        return ~eval_array(f.arg, env)
    if isinstance(f, And):
        out = np.asarray(True)
        for a in f.args:
            out = out & eval_array(a, env)
        return out
    if isinstance(f, Or):
        out = np.asarray(False)
        for a in f.args:
            out = out | eval_array(a, env)
        return out
    raise ValueError("eval_array needs a quantifier-free formula")


def eval_qf_model(f: Formula, model, env: Mapping) -> bool:
    """Truth of a quantifier-free formula at model elements.

    Congruences use the model's residue maps and inequalities its exact
    lexicographic order; ``env`` maps variables to model elements.
    """
    if isinstance(f, Const):
        return f.value
    if isinstance(f, (Le, Eq, Cong)):
        missing = [v for v in f.term.vars if v not in env]
        if missing:
            raise UnboundVariable(f"no value for {', '.join(missing)}")
        value = model.int_scale(f.term.const, model.one())
        for v, c in f.term.coeffs:
            value = value + model.int_scale(c, env[v])
        if isinstance(f, Cong):
            return model.residue_elem(value, f.modulus) == 0
        if isinstance(f, Eq):
            return value == model.zero()
        return model.compare(value, model.zero()) <= 0
    if isinstance(f, Not):
        return not eval_qf_model(f.arg, model, env)
    if isinstance(f, And):
        return all(eval_qf_model(a, model, env) for a in f.args)
    if isinstance(f, Or):
        return any(eval_qf_model(a, model, env) for a in f.args)
    raise ValueError("eval_qf_model needs a quantifier-free formula")


__all__ = ["eval_qf_int", "eval_array", "eval_qf_model", "free_vars"]
