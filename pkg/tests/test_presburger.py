import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zrigid.errors import CapacityExceeded, FormulaSyntaxError, UnboundVariable
from zrigid.presburger import (And, Cong, Exists, Forall, Le, Or, Term, decide_sentence,
                               eliminate_quantifiers, eval_qf_int, free_vars,
                               is_normal_form, is_quantifier_free, normalize, parse, to_text)
from zrigid.presburger import qe as qe_module
from zrigid.presburger.oracle import BoundedEvaluator, brute_force_grid, grid_eval
from zrigid.presburger.random_formulas import random_formula, random_qf

XS = range(-50, 51)


def truth_table(f, var="x"):
    return [eval_qf_int(f, {var: v}) for v in XS]


def test_parse_shapes():
    f = parse("A x. E y. (x = 2*y | x = 2*y + 1)")
    assert isinstance(f, Forall) and isinstance(f.body, Exists) and isinstance(f.body.body, Or)
    c = parse("x == 1 (mod 2)")
    assert isinstance(c, Cong) and c.modulus == 2 and c.residue == 1
    assert isinstance(parse("3y <= x"), Le)
    assert parse("x == -1 (mod 3)") == parse("x == 2 (mod 3)")
    assert parse("x == 1 (mod -2)") == parse("x == 1 (mod 2)")
    assert str(parse("x == 1 (mod 1)")) == "true"


@pytest.mark.parametrize("text", ["x = (", "E x x = 1", "x <= ", "x == 1 (mod 0)", "A . x = 1",
                                  "x = 1 &"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.position >= 0


def test_hygiene():
    f = parse("E x. (x = y & E x. x = 2*y)")
    inner = f.body.args[1] if isinstance(f.body, And) else None
    assert inner is not None and isinstance(inner, Exists) and inner.var != "x"
    assert free_vars(f) == {"y"}


def test_printer_round_trip():
    for text in ["A x. E y. (x = 2*y | x = 2*y + 1)", "x + y == 0 (mod 2) & !(x < 3)",
                 "E z. (x >= 0 -> y = z)"]:
        f = parse(text)
        assert parse(to_text(f)) == f


def test_qe_examples():
    parity = eliminate_quantifiers(parse("E y. x = 2*y"))
    assert is_quantifier_free(parity)
    assert truth_table(parity) == [v % 2 == 0 for v in XS]
    nonneg = eliminate_quantifiers(parse("E y. (y >= 0 & x >= y)"))
    oracle = [any(0 <= y <= v for y in range(-60, 61)) for v in XS]
    assert truth_table(nonneg) == oracle == [v >= 0 for v in XS]
    assert eval_qf_int(eliminate_quantifiers(parse("E x. (x >= a & x <= a)")), {"a": 5})
    assert eliminate_quantifiers(parse("E x. (x >= a & x <= a)")) == parse("true")


def test_normalize_examples():
    f = normalize(parse("x + y == 0 (mod 2)"))
    assert is_normal_form(f)
    for x, y in itertools.product(range(-6, 7), repeat=2):
        assert eval_qf_int(f, {"x": x, "y": y}) == ((x + y) % 2 == 0)
    assert normalize(parse("x == 1 (mod 2)")) == parse("x == 1 (mod 2)")
    g = normalize(parse("2*x == 0 (mod 4)"))
    assert is_normal_form(g)
    assert [eval_qf_int(g, {"x": v}) for v in range(4)] == [(2 * v) % 4 == 0 for v in range(4)]
    assert g == parse("x == 0 (mod 2)")


def test_normal_form_shape():
    f = normalize(eliminate_quantifiers(parse("E z. (x + 2*y = 3*z & z <= x - y)")))
    assert is_normal_form(f)
    assert not is_normal_form(parse("x + y == 0 (mod 2)"))
    assert not is_normal_form(parse("E x. x <= 0"))


def test_decide_examples():
    assert decide_sentence(parse("A x. E y. (x = 2*y | x = 2*y + 1)"))
    assert not decide_sentence(parse("E x. 2*x = 1"))
    assert decide_sentence(parse("A x. E y. (x = 3*y | x = 3*y + 1 | x = 3*y + 2)"))
    assert not decide_sentence(parse("A x. E y. x = 2*y"))
    assert decide_sentence(parse("A x. A y. (x < y -> x + 1 <= y)"))
    assert not decide_sentence(parse("E x. (0 < x & x < 1)"))
    with pytest.raises(ValueError):
        decide_sentence(parse("E x. x = y"))


def test_eval_examples():
    assert not eval_qf_int(parse("x >= 0"), {"x": -1})
    assert eval_qf_int(parse("x == 1 (mod 2)"), {"x": 7})
    assert eval_qf_int(normalize(eliminate_quantifiers(parse("E y. x = 2*y"))), {"x": 6})
    with pytest.raises(UnboundVariable):
        eval_qf_int(parse("x <= y"), {"x": 1})


def test_node_cap():
    f = parse("E x. E y. (5*x + 3*y - 4*z == 1 (mod 6) & x <= 2*y & 3*z < x + 7 & 4*x >= z)")
    with pytest.raises(CapacityExceeded):
        eliminate_quantifiers(f, node_cap=20)
    with pytest.raises(CapacityExceeded):
        normalize(parse("2*x + 3*y + 5*z == 1 (mod 30)"), node_cap=10)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([(1, 1), (2, 1), (1, 2), (0, 2), (2, 0)]))
def test_qe_sound_against_brute_force(seed, shape):
    f, free = random_formula(random.Random(seed), *shape, max_atoms=4)
    q = normalize(eliminate_quantifiers(f))
    assert is_normal_form(q)
    box = 20
    assert np.array_equal(grid_eval(q, free, box), brute_force_grid(f, free, box))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_normalize_preserves_truth(seed):
    f = random_qf(random.Random(seed), ["x", "y"], 3)
    assert np.array_equal(grid_eval(normalize(f), ["x", "y"]), grid_eval(f, ["x", "y"]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_decide_matches_bounded_enumeration(seed):
    f, _ = random_formula(random.Random(seed), 0, 2, max_atoms=3)
    ev = BoundedEvaluator()
    assert decide_sentence(f) == bool(brute_force_grid(f, [], evaluator=ev))
    assert ev.max_window <= 10 ** 4


def test_oracle_detects_broken_elimination(monkeypatch):
    """Dropping the last disjunct of every elimination step must be caught."""
    original = qe_module.mk_or

    def lossy_or(args):
        args = list(args)
        return original(args[:-1]) if len(args) > 2 else original(args)

    formulas = [random_formula(random.Random(s), 1, 1, max_atoms=4) for s in range(200)]
    expected = [brute_force_grid(f, free) for f, free in formulas]
    monkeypatch.setattr(qe_module, "mk_or", lossy_or)
    caught = sum(not np.array_equal(grid_eval(eliminate_quantifiers(f), free), table)
                 for (f, free), table in zip(formulas, expected))
    assert caught > 0


def test_term_arithmetic():
    t = Term.make({"x": 2, "y": -3}, 4)
    assert t.evaluate({"x": 1, "y": 1}) == 3
    assert (t - t) == Term.constant(0)
    assert t.substitute("x", Term.var("y")).coeff("y") == -1
