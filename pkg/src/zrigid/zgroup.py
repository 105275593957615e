"""Finitely described Z-groups G = D + L with a two-level lexicographic order.

``D`` is a Q-vector space with a finite named basis (or, for the Laurent
span, the lazy basis ``pi^k``, k in Z). ``L`` is the pure closure in Z^ of
``Z*1 + sum_j Z*u_j`` for profinite generators ``u_j``; its elements are
written ``(a0 + sum_j a_j u_j) / m`` and carry a purity certificate.

In ordered mode each basis vector and generator has two real valuations
``nu1`` and ``nu2``; an element is positive when ``nu1 > 0``, or ``nu1 = 0``
and ``nu2 > 0``, or both vanish and it is a positive integer.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import realspan as rs
from .errors import (EqualElements, GeneratorInZ, IndependenceViolation, InvalidSpec,
                     NotInGroup, OutsideSpan, PreconditionFailed)
from .linalg import solve
from .presburger.syntax import Formula, Term, cong, eq, le, mk_and, mk_not, mk_or
from .profinite import (ProfiniteElement, divide_exact, factorize, format_rational,
                        from_integer, is_prime, parse_rational, residue, valuation)
from .realspan import FINITE, LAURENT, SpanElement

ORDERED = "ordered"
UNORDERED = "unordered"

_LAURENT_NAME = re.compile(r"^pi\^(-?\d+)$")


def laurent_name(k: int) -> str:
    return f"pi^{k}"


@dataclass(frozen=True)
class DDim:
    name: str
    nu1: SpanElement = rs.ZERO
    nu2: SpanElement = rs.ZERO


@dataclass(frozen=True)
class LGen:
    name: str
    u: ProfiniteElement
    nu1: SpanElement = rs.ZERO
    nu2: SpanElement = rs.ZERO


@dataclass(frozen=True)
class ModelSpec:
    mode: str = ORDERED
    d_basis: Tuple[DDim, ...] = ()
    l_generators: Tuple[LGen, ...] = ()
    span_structure: str = FINITE
    name: str = ""

    @classmethod
    def from_json(cls, data) -> "ModelSpec":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            structure = data.get("span_structure", FINITE)
            d_raw = data.get("d_basis", [])
            if structure == LAURENT:
                if d_raw not in ([], "laurent_pi", None):
                    raise InvalidSpec("a laurent_pi model has the implicit D basis pi^k")
                d_basis = ()
            else:
                d_basis = tuple(DDim(d["name"], rs.parse_real(d.get("nu1", "0")),
                                     rs.parse_real(d.get("nu2", "0"))) for d in d_raw)
            gens = tuple(LGen(g["name"], ProfiniteElement.from_json(g["profinite"]),
                              rs.parse_real(g.get("nu1", "0")), rs.parse_real(g.get("nu2", "0")))
                         for g in data.get("l_generators", []))
            return cls(data.get("mode", ORDERED), d_basis, gens, structure, data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"malformed model spec: {exc}") from exc

    def to_json(self) -> dict:
        out = {"name": self.name, "mode": self.mode, "span_structure": self.span_structure}
        if self.span_structure == LAURENT:
            out["d_basis"] = "laurent_pi"
        else:
            out["d_basis"] = [{"name": d.name, "nu1": str(d.nu1), "nu2": str(d.nu2)}
                              for d in self.d_basis]
        out["l_generators"] = [{"name": g.name, "profinite": g.u.to_json(), "nu1": str(g.nu1),
                                "nu2": str(g.nu2)} for g in self.l_generators]
        return out


@dataclass(frozen=True)
class Element:
    """``sum d_i e_i + (a0 + sum a_j u_j) / m`` in a fixed model."""

    d: Tuple[Tuple[str, Fraction], ...]
    a0: int
    a: Tuple[int, ...]
    m: int
    model: "Model" = field(compare=False, repr=False, hash=False)

    @cached_property
    def l_value(self) -> ProfiniteElement:
        """Image of the element under the residue map into Z^."""
        return divide_exact(self.model._lsum(self.a0, self.a), self.m)

    def d_dict(self) -> Dict[str, Fraction]:
        return dict(self.d)

    def is_standard(self) -> bool:
        return not self.d and not any(self.a) and self.m == 1

    def is_pure_d(self) -> bool:
        return self.a0 == 0 and not any(self.a)

    def __add__(self, other):
        return self.model.add(self, other)

    def __sub__(self, other):
        return self.model.add(self, self.model.neg(other))

    def __neg__(self):
        return self.model.neg(self)

    def __mul__(self, k: int):
        return self.model.int_scale(k, self)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "d": {n: format_rational(c) for n, c in self.d},
            "a0": self.a0,
            "a": {g.name: c for g, c in zip(self.model.gens, self.a) if c},
            "m": self.m,
        }

    def __str__(self):
        def term(c, name):
            return name if c == 1 else f"-{name}" if c == -1 else f"{format_rational(c)}*{name}"

        parts = [term(c, n) for n, c in self.d]
        l_terms = [str(self.a0)] if self.a0 or not any(self.a) else []
        l_terms += [term(c, g.name) for g, c in zip(self.model.gens, self.a) if c]
        l_text = " + ".join(l_terms)
        if self.m != 1:
            l_text = f"({l_text})/{self.m}"
        if self.is_pure_d() and parts:
            return " + ".join(parts).replace("+ -", "- ")
        return " + ".join(parts + [l_text]).replace("+ -", "- ")


@dataclass(frozen=True)
class Separation:
    """How two elements are told apart by a parameter-free formula in ``v``.

    ``kind`` is ``"congruence"``, ``"point"``, ``"sign"`` or ``"same_type"``;
    ``formula`` (absent for same_type) holds at the first element and fails at
    the second.
    """

    kind: str
    formula: Optional[Formula] = None
    modulus: Optional[int] = None
    residue: Optional[int] = None
    point: Optional[int] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.formula is not None:
            out["formula"] = str(self.formula)
        for key in ("modulus", "residue", "point"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


class Model:
    """A validated Z-group; build through :func:`build_model`."""

    def __init__(self, spec: ModelSpec, max_bits: int = rs.DEFAULT_MAX_BITS):
        self.spec = spec
        self.max_bits = max_bits
        self.mode = spec.mode
        self.laurent = spec.span_structure == LAURENT
        self.gens: Tuple[LGen, ...] = spec.l_generators
        self._gen_index = {g.name: i for i, g in enumerate(self.gens)}
        self._d_index = {d.name: d for d in spec.d_basis}
        self.levels_swapped = False
        if self.ordered and not self.laurent:
            if all(d.nu1.is_zero() for d in spec.d_basis) and all(g.nu1.is_zero() for g in self.gens):
                # level 1 is degenerate: promote level 2
                self.levels_swapped = True
                self._d_index = {d.name: DDim(d.name, d.nu2, d.nu1) for d in spec.d_basis}
                self.gens = tuple(LGen(g.name, g.u, g.nu2, g.nu1) for g in self.gens)
        self.d_span = rs.RealSpan(spec.span_structure, tuple(sorted(
            {b for d in self._d_index.values() for b in d.nu1.bases()}, key=rs.BaseReal.sort_key)))

    # structure

    @property
    def ordered(self) -> bool:
        return self.mode == ORDERED

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def d_names(self) -> List[str]:
        return list(self._d_index)

    def d_dim(self, name: str) -> DDim:
        if self.laurent:
            m = _LAURENT_NAME.match(name)
            if m is None:
                raise InvalidSpec(f"unknown D coordinate {name!r} (expected pi^k)")
            k = int(m.group(1))
            return DDim(name, SpanElement.of(rs.pi_power(k)))
        try:
            return self._d_index[name]
        except KeyError:
            raise InvalidSpec(f"unknown D coordinate {name!r}") from None

    def gen_index(self, name: str) -> int:
        try:
            return self._gen_index[name]
        except KeyError:
            raise InvalidSpec(f"unknown L generator {name!r}") from None

    def has_d(self) -> bool:
        return self.laurent or bool(self._d_index)

    def d_level1(self) -> List[str]:
        return [n for n, d in self._d_index.items() if not d.nu1.is_zero()]

    def d_level2_only(self) -> List[str]:
        return [n for n, d in self._d_index.items() if d.nu1.is_zero()]

    def l_level1(self) -> List[str]:
        return [g.name for g in self.gens if not g.nu1.is_zero()]

    def l_level2_only(self) -> List[str]:
        return [g.name for g in self.gens if g.nu1.is_zero()]

    def d_archimedean(self) -> bool:
        return self.laurent or not self.d_level2_only()

    # validation

    def validate(self) -> "Model":
        spec = self.spec
        if spec.mode not in (ORDERED, UNORDERED):
            raise InvalidSpec(f"mode must be ordered or unordered, got {spec.mode!r}")
        names = [d.name for d in spec.d_basis] + [g.name for g in spec.l_generators]
        if len(set(names)) != len(names) or any(not n for n in names):
            raise InvalidSpec("basis and generator names must be distinct and nonempty")
        if self.laurent and any(_LAURENT_NAME.match(g.name) for g in self.gens):
            raise InvalidSpec("generator names may not look like pi^k")
        for g in self.gens:
            if g.u.is_integer():
                raise GeneratorInZ(f"generator {g.name} = {g.u} is an integer")
        from .profinite import integer_relation_rank

        family = [from_integer(1)] + [g.u for g in self.gens]
        if integer_relation_rank(family) < len(family):
            raise IndependenceViolation("1 and the L generators are Z-linearly dependent in Z^")
        if self.ordered:
            self._validate_order()
        return self

    def _validate_order(self):
        dims = list(self._d_index.values())
        for item in dims + list(self.gens):
            if item.nu1.is_zero() and item.nu2.is_zero():
                raise InvalidSpec(f"{item.name} has both valuations zero; the order would not be total")
        if self.laurent:
            level1 = [self._strip_laurent(g.nu1) for g in self.gens if not g.nu1.is_zero()]
            if any(v.is_zero() for v in level1):
                raise IndependenceViolation("an L level-1 value lies in the Laurent D span")
            if level1:
                rs.check_independent(level1, "level-1 values modulo D''")
        else:
            level1 = [x.nu1 for x in dims + list(self.gens) if not x.nu1.is_zero()]
            if level1:
                rs.check_independent(level1, "level-1 values")
        level2 = [x.nu2 for x in dims + list(self.gens) if x.nu1.is_zero()]
        if level2:
            rs.check_independent(level2, "level-2 values")

    @staticmethod
    def _strip_laurent(v: SpanElement) -> SpanElement:
        return SpanElement.from_map({b: c for b, c in v.coords if rs.pi_exponent(b) is None})

    # elements

    def _lsum(self, a0: int, a: Sequence[int]) -> ProfiniteElement:
        total = from_integer(a0)
        for g, c in zip(self.gens, a):
            if c:
                total = total + g.u * c
        return total

    def _make(self, d: Mapping[str, Fraction], a0: int, a: Sequence[int], m: int,
              certify: bool = True) -> Element:
        if m < 1:
            raise ValueError("denominator m must be >= 1")
        a = tuple(int(c) for c in a)
        g = math.gcd(a0, m, *a)
        if g > 1:
            a0, m, a = a0 // g, m // g, tuple(c // g for c in a)
        if certify and m > 1 and residue(self._lsum(a0, a), m) != 0:
            raise NotInGroup(f"{a0} + {list(a)} . u is not divisible by {m} in Z^")
        items = tuple(sorted((n, Fraction(c)) for n, c in d.items() if c != 0))
        return Element(items, int(a0), a, int(m), self)

    def elem(self, d_coords: Mapping[str, object] = None, a0: int = 0,
             a: Union[Mapping[str, int], Sequence[int]] = (), m: int = 1) -> Element:
        """Certified element ``sum d + (a0 + sum a_j u_j) / m``."""
        d = {}
        for n, c in (d_coords or {}).items():
            self.d_dim(n)
            d[n] = parse_rational(c)
        if isinstance(a, Mapping):
            vec = [0] * len(self.gens)
            for n, c in a.items():
                vec[self.gen_index(n)] = int(c)
        else:
            vec = list(a) + [0] * (len(self.gens) - len(a))
        return self._make(d, int(a0), vec, int(m))

    def element_from_json(self, data) -> Element:
        if isinstance(data, str):
            text = data.strip()
            if re.fullmatch(r"-?\d+", text):
                return self.elem(a0=int(text))
            data = json.loads(text)
        if isinstance(data, int):
            return self.elem(a0=data)
        return self.elem(data.get("d", {}), int(data.get("a0", 0)), data.get("a", {}),
                         int(data.get("m", 1)))

    def one(self) -> Element:
        return self._make({}, 1, [0] * len(self.gens), 1, certify=False)

    def zero(self) -> Element:
        return self._make({}, 0, [0] * len(self.gens), 1, certify=False)

    def d_unit(self, name: str, coeff=1) -> Element:
        self.d_dim(name)
        return self._make({name: Fraction(coeff)}, 0, [0] * len(self.gens), 1, certify=False)

    def generator(self, name: str) -> Element:
        vec = [0] * len(self.gens)
        vec[self.gen_index(name)] = 1
        return self._make({}, 0, vec, 1, certify=False)

    def add(self, x: Element, y: Element) -> Element:
        d = x.d_dict()
        for n, c in y.d:
            d[n] = d.get(n, Fraction(0)) + c
        m = x.m * y.m // math.gcd(x.m, y.m)
        fx, fy = m // x.m, m // y.m
        a = [cx * fx + cy * fy for cx, cy in zip(x.a, y.a)]
        return self._make(d, x.a0 * fx + y.a0 * fy, a, m)

    def neg(self, x: Element) -> Element:
        return Element(tuple((n, -c) for n, c in x.d), -x.a0, tuple(-c for c in x.a), x.m, self)

    def int_scale(self, k: int, x: Element) -> Element:
        return self._make({n: c * k for n, c in x.d}, x.a0 * k, [c * k for c in x.a], x.m,
                          certify=False)

    def d_element(self, coords: Mapping[str, Fraction]) -> Element:
        return self._make(dict(coords), 0, [0] * len(self.gens), 1, certify=False)

    # residues, valuations, order

    def residue_elem(self, x: Element, n: int) -> int:
        return residue(x.l_value, n)

    def nu(self, x: Element, level: int) -> SpanElement:
        if not self.ordered:
            raise PreconditionFailed("valuations exist only in ordered mode")
        total = rs.ZERO
        for n, c in x.d:
            dim = self.d_dim(n)
            total = total + (dim.nu1 if level == 1 else dim.nu2).scale(c)
        for g, c in zip(self.gens, x.a):
            if c:
                total = total + (g.nu1 if level == 1 else g.nu2).scale(Fraction(c, x.m))
        return total

    def sign(self, x: Element) -> int:
        s = rs.sign(self.nu(x, 1), self.max_bits)
        if s:
            return s
        s = rs.sign(self.nu(x, 2), self.max_bits)
        if s:
            return s
        if not x.is_standard():
            raise AssertionError(f"{x} has zero valuations but is not an integer")
        return (x.a0 > 0) - (x.a0 < 0)

    def compare(self, x: Element, y: Element) -> int:
        if not self.ordered:
            raise PreconditionFailed("compare needs an ordered model")
        return self.sign(x - y)

    def divide_by_p_with_remainder(self, x: Element, p: int) -> Tuple[int, Element]:
        """``(k, y)`` with ``x = p*y + k`` and ``0 <= k < p``."""
        k = self.residue_elem(x, p)
        y = self._make({n: c / p for n, c in x.d}, x.a0 - k * x.m, x.a, x.m * p)
        return k, y

    def decompose(self, x: Element) -> Tuple[Element, Element]:
        d_part = self._make(x.d_dict(), 0, [0] * len(self.gens), 1, certify=False)
        l_part = Element((), x.a0, x.a, x.m, self)
        return d_part, l_part

    def nu_d_inverse(self, value: SpanElement) -> Element:
        """The unique D element with level-1 valuation ``value`` (D archimedean)."""
        if not self.d_archimedean():
            raise PreconditionFailed("nu restricted to D is not injective")
        if self.laurent:
            coords = {}
            for b, c in value.coords:
                k = rs.pi_exponent(b)
                if k is None:
                    raise OutsideSpan(f"{value} is not in the Laurent D span")
                coords[laurent_name(k)] = c
            return self.d_element(coords)
        names = self.d_level1()
        bases = sorted({b for n in names for b in self._d_index[n].nu1.bases()} |
                       set(value.bases()), key=rs.BaseReal.sort_key)
        matrix = [[self._d_index[n].nu1.coeff(b) for n in names] for b in bases]
        sol = solve(matrix, [value.coeff(b) for b in bases])
        if sol is None:
            raise OutsideSpan(f"{value} is not in D''")
        return self.d_element(dict(zip(names, sol)))

    def in_d_span(self, value: SpanElement) -> bool:
        try:
            self.nu_d_inverse(value)
            return True
        except OutsideSpan:
            return False

    # Leibnizian structure

    def is_leibnizian(self) -> bool:
        return not self.has_d()

    def separate(self, x: Element, y: Element, var: str = "v") -> Separation:
        """A formula in ``var`` true at ``x`` and false at ``y``, or same_type."""
        if x == y:
            raise EqualElements(f"{x} equals {y}")
        v = Term.var(var)
        if x.is_standard():
            c = x.a0
            f = eq(v - Term.constant(c)) if not self.ordered else mk_and(
                [le(Term.constant(c) - v), le(v - Term.constant(c))])
            return Separation("point", f, point=c)
        if y.is_standard():
            c = y.a0
            if self.ordered:
                f = mk_or([le(v - Term.constant(c - 1)), le(Term.constant(c + 1) - v)])
            else:
                f = mk_not(eq(v - Term.constant(c)))
            return Separation("point", f, point=c)
        if x.l_value != y.l_value:
            n, k = self._least_separating_modulus(x, y)
            return Separation("congruence", cong(n, v, k), modulus=n, residue=k)
        if self.ordered:
            sx, sy = self.sign(x), self.sign(y)
            if sx != sy:
                f = le(-v) if sx > 0 else le(v)
                return Separation("sign", f)
        return Separation("same_type")

    def _least_separating_modulus(self, x: Element, y: Element) -> Tuple[int, int]:
        diff = x.l_value - y.l_value
        bound = separating_modulus_bound(diff)
        for n in range(2, bound + 1):
            kx, ky = self.residue_elem(x, n), self.residue_elem(y, n)
            if kx != ky:
                return n, kx
        raise AssertionError(f"no separating modulus up to {bound}")

    # sampling

    def random_element(self, rng: random.Random, d_height: int = 20, l_height: int = 3,
                       max_m: int = 6) -> Element:
        d = {}
        names = [laurent_name(k) for k in range(-2, 3)] if self.laurent else self.d_names
        for n in names:
            if rng.random() < 0.7:
                d[n] = Fraction(rng.randint(-d_height, d_height), rng.randint(1, 6))
        a = [rng.randint(-l_height, l_height) for _ in self.gens]
        m = rng.randint(1, max_m)
        r = residue(self._lsum(0, a), m)
        a0 = (-r) % m + m * rng.randint(-l_height, l_height)
        return self._make(d, a0, a, m)

    def basis_elements(self) -> List[Element]:
        names = [laurent_name(k) for k in range(-2, 3)] if self.laurent else self.d_names
        return [self.one()] + [self.d_unit(n) for n in names] + [self.generator(g.name)
                                                                 for g in self.gens]

    def describe(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "span_structure": self.spec.span_structure,
            "d_dimension": "infinite (pi^k, k in Z)" if self.laurent else len(self._d_index),
            "l_generators": [g.name for g in self.gens],
            "leibnizian": self.is_leibnizian(),
            "levels_swapped": self.levels_swapped,
        }


def separating_modulus_bound(z: ProfiniteElement) -> int:
    """A modulus ``n`` with ``z mod n != 0`` for a nonzero ``z`` in Z^."""
    candidates = []
    for p, c in z.support:
        if c != 0:
            candidates.append(p ** (valuation(c, p) + 1))
    if z.default != 0:
        support = set(z.primes())
        p = 2
        while not candidates or p < min(candidates):
            if is_prime(p) and p not in support:
                candidates.append(p ** (valuation(z.default, p) + 1))
            p += 1
    if not candidates:
        raise ValueError("zero has no separating modulus")
    return min(candidates)


def build_model(spec: Union[ModelSpec, dict, str], max_bits: int = rs.DEFAULT_MAX_BITS) -> Model:
    """Validate a spec and return the model (raises on inconsistent data)."""
    if not isinstance(spec, ModelSpec):
        spec = ModelSpec.from_json(spec)
    return Model(spec, max_bits).validate()
