import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zrigid import realspan as rs
from zrigid.errors import (EqualElements, GeneratorInZ, IndependenceViolation, InvalidSpec,
                           NotInGroup, PreconditionFailed)
from zrigid.models import CATALOG, U_TWO, g_exm_spec, g_laurent_spec
from zrigid.presburger import normalize
from zrigid.presburger.random_formulas import random_qf
from zrigid.presburger.semantics import eval_qf_model
from zrigid.profinite import divide_exact, from_integer, from_prime_component, residue
from zrigid.zgroup import (DDim, LGen, ModelSpec, ORDERED, UNORDERED, build_model,
                           separating_modulus_bound)

G_EXM = build_model(g_exm_spec())
G_LAURENT = build_model(g_laurent_spec())
G_UNORD = build_model(g_exm_spec(UNORDERED))
MODELS = [G_EXM, G_LAURENT]
seeds = st.integers(0, 10 ** 9)


def test_build_examples():
    assert G_EXM.describe()["d_dimension"] == 1
    assert G_LAURENT.laurent and not G_LAURENT.is_leibnizian()
    with pytest.raises(IndependenceViolation):
        build_model(ModelSpec(ORDERED, (DDim("d0", rs.rational(1)), DDim("d1", rs.rational(1)))))


def test_build_rejections():
    with pytest.raises(GeneratorInZ):
        build_model(ModelSpec(ORDERED, (), (LGen("u", from_integer(3), rs.rational(1)),)))
    with pytest.raises(IndependenceViolation):
        build_model(ModelSpec(ORDERED, (), (LGen("u", U_TWO, rs.rational(1)),
                                            LGen("v", U_TWO * 2 + 1, rs.sqrt_rational(2)))))
    with pytest.raises(InvalidSpec):
        build_model(ModelSpec(ORDERED, (DDim("d0"),)))
    with pytest.raises(IndependenceViolation):
        build_model(ModelSpec(ORDERED, (), (LGen("u", U_TWO, rs.parse_real("pi")),), rs.LAURENT))
    with pytest.raises(InvalidSpec):
        build_model({"mode": "ordered", "d_basis": [{"nu1": "1"}]})
    # zero valuations are fine without an order
    build_model(ModelSpec(UNORDERED, (DDim("d0"),), (LGen("u", U_TWO),)))


def test_level_canonicalization():
    m = build_model(ModelSpec(ORDERED, (DDim("d0", rs.ZERO, rs.rational(1)),),
                              (LGen("u", U_TWO, rs.ZERO, rs.sqrt_rational(2)),)))
    assert m.levels_swapped and m.d_level1() == ["d0"] and m.l_level1() == ["u"]


def test_spec_json_round_trip():
    for make in CATALOG.values():
        spec = make()
        again = ModelSpec.from_json(spec.to_json())
        assert again == spec


def test_elem_examples():
    one = G_EXM.elem(a0=1)
    assert one == G_EXM.one()
    x = G_EXM.elem({}, 1, {"u": 1}, 2)
    assert residue(U_TWO + 1, 2) == 0
    assert (x.a0, x.a, x.m) == (1, (1,), 2)
    with pytest.raises(NotInGroup):
        G_EXM.elem(a0=1, m=2)
    with pytest.raises(InvalidSpec):
        G_EXM.elem({"d9": 1})


def test_arithmetic_examples():
    x = G_EXM.elem({}, 1, {"u": 1}, 2)
    y = G_EXM.elem({}, 1, {"u": -1}, 2)
    assert x + (-x) == G_EXM.zero()
    assert G_EXM.int_scale(2, G_EXM.one()) == G_EXM.elem(a0=2)
    assert x + y == G_EXM.one()


def test_residue_examples():
    x = G_EXM.elem({}, 1, {"u": 1}, 2)
    assert G_EXM.residue_elem(x, 2) == residue(divide_exact(U_TWO + 1, 2), 2) == 1
    for n in (2, 3, 10, 97):
        assert G_EXM.residue_elem(G_EXM.one(), n) == 1
        assert G_EXM.residue_elem(G_EXM.d_unit("d0", Fraction(5, 3)), n) == 0


def test_nu_and_compare_examples():
    x = G_EXM.elem({}, 1, {"u": 1}, 2)
    assert G_EXM.nu(G_EXM.one(), 1).is_zero()
    assert G_EXM.nu(G_EXM.d_unit("d0"), 1) == rs.rational(1)
    assert G_EXM.nu(x, 1) == rs.sqrt_rational(2).scale(Fraction(1, 2))
    assert G_EXM.compare(x, x) == 0
    assert G_EXM.compare(x, G_EXM.elem(a0=10 ** 6)) == 1
    assert G_EXM.compare(G_EXM.one(), G_EXM.zero()) == 1
    with pytest.raises(PreconditionFailed):
        G_UNORD.compare(G_UNORD.one(), G_UNORD.zero())


def test_divide_examples():
    k, y = G_EXM.divide_by_p_with_remainder(G_EXM.elem(a0=7), 3)
    assert (k, y) == (1, G_EXM.elem(a0=2))
    x = G_EXM.elem({}, 1, {"u": 1}, 2)
    k, y = G_EXM.divide_by_p_with_remainder(x, 2)
    assert k == G_EXM.residue_elem(x, 2) == 1 and y * 2 + G_EXM.one() == x
    d = G_EXM.d_unit("d0", 3)
    assert G_EXM.divide_by_p_with_remainder(d, 5) == (0, G_EXM.d_unit("d0", Fraction(3, 5)))


def test_decompose_examples():
    u = G_EXM.generator("u")
    d = G_EXM.d_unit("d0", 2)
    assert G_EXM.decompose(u) == (G_EXM.zero(), u)
    assert G_EXM.decompose(d) == (d, G_EXM.zero())
    x = d + G_EXM.elem({}, 1, {"u": 1}, 2)
    dp, lp = G_EXM.decompose(x)
    assert dp + lp == x


def test_leibnizian():
    assert build_model(CATALOG["leibnizian"]()).is_leibnizian()
    assert not G_EXM.is_leibnizian() and not G_LAURENT.is_leibnizian()


def test_separate_examples():
    a = G_EXM.d_unit("d0", 3)
    assert G_EXM.separate(a, a * 2).kind == "same_type"
    u = G_EXM.generator("u")
    s = G_EXM.separate(u, u + G_EXM.one())
    oracle = next(n for n in range(2, 50) if residue(U_TWO, n) != residue(U_TWO + 1, n))
    assert (s.kind, s.modulus, s.residue) == ("congruence", oracle, residue(U_TWO, oracle))
    assert (oracle, residue(U_TWO, 2)) == (2, 1)
    p = G_EXM.separate(G_EXM.zero(), G_EXM.elem(a0=5))
    assert p.kind == "point" and p.point == 0
    assert str(p.formula) == "-v <= 0 & v <= 0"
    assert G_EXM.separate(a, -a).kind == "sign"
    with pytest.raises(EqualElements):
        G_EXM.separate(a, a)


def test_separating_modulus_bound():
    def least(z):
        return next(n for n in range(2, 10 ** 4) if residue(z, n) != 0)

    cases = [from_prime_component(2, 4, 0), from_integer(8), from_prime_component(3, 9, 6),
             from_prime_component(5, 0, 30), from_integer(-1)]
    for z in cases:
        bound = separating_modulus_bound(z)
        assert residue(z, bound) != 0 and least(z) <= bound
    assert [separating_modulus_bound(z) for z in cases] == [8, 3, 4, 4, 2]


@pytest.mark.parametrize("model", MODELS, ids=["G_exm", "G_laurent"])
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_order_axioms(model, seed):
    rng = random.Random(seed)
    x, y, z = (model.random_element(rng) for _ in range(3))
    c = model.compare(x, y)
    assert c == -model.compare(y, x)
    assert (c == 0) == (x == y)
    assert model.compare(x + z, y + z) == c
    if c <= 0 and model.compare(y, z) <= 0:
        assert model.compare(x, z) <= 0
    assert not (model.compare(model.zero(), z) < 0 and model.compare(z, model.one()) < 0)
    if model.sign(x) > 0:
        assert model.compare(x, model.one()) >= 0


@pytest.mark.parametrize("model", MODELS + [G_UNORD], ids=["G_exm", "G_laurent", "unordered"])
@settings(max_examples=25, deadline=None)
@given(seed=seeds, p=st.sampled_from([2, 3, 5, 7]))
def test_divisibility_and_decompose(model, seed, p):
    x = model.random_element(random.Random(seed))
    k, y = model.divide_by_p_with_remainder(x, p)
    assert 0 <= k < p and y * p + model.elem(a0=k) == x
    d, l = model.decompose(x)
    assert d + l == x
    for n in range(2, 101):
        assert model.residue_elem(d, n) == 0
        assert model.residue_elem(l, n) == model.residue_elem(x, n)


@pytest.mark.parametrize("model", [G_EXM, G_UNORD, G_LAURENT],
                         ids=["G_exm", "unordered", "G_laurent"])
@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_separation_sound(model, seed):
    rng = random.Random(seed)
    pool = [model.random_element(rng) for _ in range(2)] + [model.elem(a0=rng.randint(-3, 3))]
    x, y = rng.sample(pool, 2)
    if x == y:
        return
    s = model.separate(x, y)
    if s.formula is not None:
        assert eval_qf_model(s.formula, model, {"v": x})
        assert not eval_qf_model(s.formula, model, {"v": y})
    else:
        for _ in range(20):
            f = normalize(random_qf(rng, ["v"], rng.randint(1, 3)))
            if not model.ordered and "<=" in str(f):
                continue
            assert eval_qf_model(f, model, {"v": x}) == eval_qf_model(f, model, {"v": y})


def test_eval_in_model_examples():
    from zrigid.presburger import parse

    u = G_EXM.generator("u")
    assert eval_qf_model(parse("x == 1 (mod 2)"), G_EXM, {"x": u})
    assert eval_qf_model(parse("x >= 1"), G_EXM, {"x": G_EXM.one()})
    big = G_EXM.d_unit("d0", Fraction(1, 1000))
    for n in range(-50, 51, 7):
        assert eval_qf_model(parse(f"x >= {n}"), G_EXM, {"x": big})


def test_element_json_round_trip():
    rng = random.Random(4)
    for model in MODELS:
        for _ in range(20):
            x = model.random_element(rng)
            assert model.element_from_json(x.to_json()) == x
    assert G_EXM.element_from_json("-12") == G_EXM.elem(a0=-12)
