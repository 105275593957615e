"""Presburger formulas: parsing, quantifier elimination, normal form, evaluation."""

from .parser import parse, parse_term
from .printer import to_text
from .qe import (DEFAULT_NODE_CAP, decide_sentence, eliminate_quantifiers, is_normal_form, nnf,
                 normalize)
from .semantics import eval_array, eval_qf_int, eval_qf_model
from .syntax import (FALSE, TRUE, And, Cong, Const, Eq, Exists, Forall, Formula, Le, Not, Or,
                     Term, cong, eq, free_vars, is_quantifier_free, le, leq, mk_and, mk_not,
                     mk_or)

__all__ = [
    "parse", "parse_term", "to_text", "eliminate_quantifiers", "normalize", "decide_sentence",
    "nnf", "is_normal_form", "eval_qf_int", "eval_qf_model", "eval_array", "Term", "Formula",
    "Le", "Eq", "Cong", "Not", "And", "Or", "Exists", "Forall", "Const", "TRUE", "FALSE", "le",
    "leq", "eq", "cong", "mk_and", "mk_or", "mk_not", "free_vars", "is_quantifier_free",
    "DEFAULT_NODE_CAP",
]
