"""Automorphisms of Z-groups, their verification, and the rigidity decision.

Every automorphism of ``G = D + L`` has the form ``d + l -> g(d) + h(l) + l``
with ``g`` a Q-linear automorphism of ``D`` and ``h: L -> D`` additive and
zero on 1. Witnesses are stored model-free (D coordinates by name) so their
JSON can be applied to any model with matching names.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from . import realspan as rs
from .errors import (GammaNotAdmissible, InvalidSpec, NotInvertible, OutsideSpan,
                     PreconditionFailed, ZRigidError)
from .linalg import identity, inverse
from .profinite import format_rational, parse_rational
from .realspan import Gamma
from .zgroup import Element, Model, _LAURENT_NAME, laurent_name

Coords = Dict[str, Fraction]


def _add_coords(out: Coords, coords: Mapping[str, Fraction], scale: Fraction = Fraction(1)):
    for n, c in coords.items():
        out[n] = out.get(n, Fraction(0)) + c * scale
    return out


def _coords_json(coords: Mapping[str, Fraction]) -> dict:
    return {n: format_rational(c) for n, c in coords.items() if c != 0}


def _coords_from_json(data: Mapping) -> Coords:
    return {n: parse_rational(c) for n, c in data.items()}


# maps on D


class DMap:
    def apply(self, coords: Mapping[str, Fraction]) -> Coords:
        raise NotImplementedError

    def inverse(self) -> "DMap":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data) -> "DMap":
        kind = data.get("kind")
        if kind == "matrix":
            names = tuple(data["names"])
            rows = tuple(tuple(parse_rational(c) for c in row) for row in data["rows"])
            return MatrixMap(names, rows)
        if kind == "scale":
            return ScaleMap(Gamma.parse(data["gamma"]))
        raise InvalidSpec(f"unknown D map kind {kind!r}")


@dataclass(frozen=True)
class MatrixMap(DMap):
    """``g(e_j) = sum_i rows[i][j] e_i`` on the named basis; other names fixed."""

    names: Tuple[str, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_columns(cls, names, columns: Mapping[str, Mapping[str, Fraction]]) -> "MatrixMap":
        names = tuple(names)
        for n in columns:
            if n not in names:
                raise InvalidSpec(f"unknown D coordinate {n!r}")
        rows = tuple(tuple(Fraction(columns[nj].get(ni, 0)) if nj in columns else
                           Fraction(int(ni == nj)) for nj in names) for ni in names)
        return cls(names, rows)

    @classmethod
    def scalar(cls, names, factor, only=None) -> "MatrixMap":
        names = tuple(names)
        factor = Fraction(factor)
        rows = tuple(tuple((factor if (only is None or ni in only) else Fraction(1))
                           if ni == nj else Fraction(0) for nj in names) for ni in names)
        return cls(names, rows)

    def apply(self, coords):
        out = {n: c for n, c in coords.items() if n not in self.names}
        for i, ni in enumerate(self.names):
            v = sum((self.rows[i][j] * coords.get(nj, 0) for j, nj in enumerate(self.names)),
                    Fraction(0))
            if v:
                out[ni] = v
        return out

    def inverse(self):
        inv = inverse([list(r) for r in self.rows]) if self.names else []
        if inv is None:
            raise NotInvertible("g is a singular matrix")
        return MatrixMap(self.names, tuple(tuple(r) for r in inv))

    def is_identity(self) -> bool:
        return [list(r) for r in self.rows] == identity(len(self.names))

    def to_json(self):
        return {"kind": "matrix", "names": list(self.names),
                "rows": [[format_rational(c) for c in r] for r in self.rows]}


@dataclass(frozen=True)
class ScaleMap(DMap):
    """Multiplication by ``gamma = q*pi^k``; shifts ``pi^j`` names by ``k``."""

    gamma: Gamma

    def apply(self, coords):
        out = {}
        for n, c in coords.items():
            if self.gamma.pi_exp:
                m = _LAURENT_NAME.match(n)
                if m is None:
                    raise OutsideSpan(f"cannot multiply {n} by {self.gamma}")
                n = laurent_name(int(m.group(1)) + self.gamma.pi_exp)
            out[n] = c * self.gamma.coeff
        return out

    def inverse(self):
        return ScaleMap(self.gamma.inverse())

    def is_identity(self) -> bool:
        return self.gamma.is_one()

    def to_json(self):
        return {"kind": "scale", "gamma": str(self.gamma)}


# automorphisms


class Automorphism:
    form = ""

    def apply(self, model: Model, x: Element) -> Element:
        raise NotImplementedError

    def inverse(self, model: Model) -> "Automorphism":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data) -> "Automorphism":
        form = data.get("form")
        if form == "gh":
            h = {u: _coords_from_json(c) for u, c in data.get("h", {}).items()}
            return GH(DMap.from_json(data["g"]), h)
        if form == "d_shift":
            return DShift(parse_rational(data["factor"]))
        if form == "l_translate":
            return LTranslate({u: _coords_from_json(c) for u, c in data["f0"].items()})
        if form == "f_gamma":
            return FGamma(Gamma.parse(data["gamma"]))
        raise InvalidSpec(f"unknown automorphism form {form!r}")


def _apply_gh(model: Model, g: DMap, h: Mapping[str, Coords], x: Element) -> Element:
    d = g.apply(x.d_dict())
    for gen, c in zip(model.gens, x.a):
        if c and gen.name in h:
            _add_coords(d, h[gen.name], Fraction(c, x.m))
    for n in d:
        model.d_dim(n)
    return model._make(d, x.a0, x.a, x.m, certify=False)


@dataclass(frozen=True)
class GH(Automorphism):
    g: DMap
    h: Mapping[str, Coords] = field(default_factory=dict)
    form = "gh"

    def apply(self, model, x):
        return _apply_gh(model, self.g, self.h, x)

    def inverse(self, model):
        g_inv = self.g.inverse()
        h_inv = {u: {n: -c for n, c in g_inv.apply(img).items()} for u, img in self.h.items()}
        return GH(g_inv, h_inv)

    def to_json(self):
        return {"form": "gh", "g": self.g.to_json(),
                "h": {u: _coords_json(c) for u, c in self.h.items()}}


@dataclass(frozen=True)
class DShift(Automorphism):
    """Scale the level-1 part of D by ``factor`` and fix everything else."""

    factor: Fraction = Fraction(2)
    form = "d_shift"

    def _g(self, model: Model) -> DMap:
        if model.laurent:
            return ScaleMap(Gamma(self.factor))
        return MatrixMap.scalar(model.d_names, self.factor, only=set(model.d_level1()))

    def apply(self, model, x):
        return _apply_gh(model, self._g(model), {}, x)

    def inverse(self, model):
        return DShift(1 / self.factor)

    def to_json(self):
        return {"form": "d_shift", "factor": format_rational(self.factor)}


@dataclass(frozen=True)
class LTranslate(Automorphism):
    """``x -> x + f0(x)`` where ``f0`` sends generators into D and kills D."""

    f0: Mapping[str, Coords]
    form = "l_translate"

    def apply(self, model, x):
        return _apply_gh(model, MatrixMap((), ()), self.f0, x)

    def inverse(self, model):
        return LTranslate({u: {n: -c for n, c in img.items()} for u, img in self.f0.items()})

    def to_json(self):
        return {"form": "l_translate", "f0": {u: _coords_json(c) for u, c in self.f0.items()}}


@dataclass(frozen=True)
class FGamma(Automorphism):
    """``x -> x + nu_D^-1((gamma - 1) nu(x))``."""

    gamma: Gamma
    form = "f_gamma"

    def apply(self, model, x):
        v = model.nu(x, 1)
        shifted = rs.mul_by_gamma(v, self.gamma, rs.RealSpan(model.spec.span_structure)) - v
        return x + model.nu_d_inverse(shifted)

    def inverse(self, model):
        return FGamma(self.gamma.inverse())

    def to_json(self):
        return {"form": "f_gamma", "gamma": str(self.gamma)}


def identity_aut(model: Model) -> GH:
    if model.laurent:
        return GH(ScaleMap(Gamma(1)), {})
    return GH(MatrixMap.scalar(model.d_names, 1), {})


def aut_from_gh(model: Model, g, h: Mapping[str, object] = None) -> GH:
    """``d + l -> g(d) + h(l) + l``.

    ``g`` is a DMap, a scalar, or a column map ``name -> {name: coeff}``;
    ``h`` maps generator names to pure-D elements or D coordinates.
    """
    if isinstance(g, (int, Fraction, str)):
        factor = parse_rational(g)
        if factor == 0:
            raise NotInvertible("g = 0 is not invertible")
        if factor > 0:
            g = ScaleMap(Gamma(factor))
        elif model.laurent:
            raise PreconditionFailed("negative scalars on the Laurent basis are not supported")
        else:
            g = MatrixMap.scalar(model.d_names, factor)
    elif isinstance(g, Mapping):
        g = MatrixMap.from_columns(model.d_names, g)
    g.inverse()
    images = {}
    for u, img in (h or {}).items():
        model.gen_index(u)
        if isinstance(img, Element):
            if not img.is_pure_d():
                raise InvalidSpec(f"h({u}) must lie in D")
            img = img.d_dict()
        images[u] = {n: parse_rational(c) for n, c in img.items()}
        for n in images[u]:
            model.d_dim(n)
    return GH(g, images)


def extract_gh(model: Model, f: Automorphism) -> GH:
    """Recover the (g, h) form of ``f`` from its values on D units and generators."""
    if model.laurent:
        img = f.apply(model, model.d_unit(laurent_name(0))).d_dict()
        if len(img) != 1:
            raise PreconditionFailed("g is not a monomial multiplier on the Laurent basis")
        (n, c), = img.items()
        g: DMap = ScaleMap(Gamma(c, int(_LAURENT_NAME.match(n).group(1))))
        for k in range(-3, 4):
            e = model.d_unit(laurent_name(k))
            if f.apply(model, e).d_dict() != g.apply(e.d_dict()):
                raise PreconditionFailed("g is not a monomial multiplier on the Laurent basis")
    else:
        columns = {n: f.apply(model, model.d_unit(n)).d_dict() for n in model.d_names}
        g = MatrixMap.from_columns(model.d_names, columns)
    h = {}
    for gen in model.gens:
        u = model.generator(gen.name)
        diff = f.apply(model, u) - u
        if not diff.is_pure_d():
            raise PreconditionFailed(f"f({gen.name}) - {gen.name} is not in D")
        if diff.d:
            h[gen.name] = diff.d_dict()
    return GH(g, h)


def d_shift_witness(model: Model, factor=2) -> DShift:
    if not model.ordered:
        raise PreconditionFailed("d_shift needs an ordered model")
    if model.l_level1() or not (model.laurent or model.d_level1()):
        raise PreconditionFailed("d_shift needs level-1 D and no level-1 L generator")
    return DShift(Fraction(factor))


def l_translate_witness(model: Model) -> LTranslate:
    if not model.ordered:
        raise PreconditionFailed("l_translate needs an ordered model")
    low_d, high_l = model.d_level2_only(), model.l_level1()
    if not low_d or not high_l:
        raise PreconditionFailed("l_translate needs a level-2 D dimension and a level-1 L generator")
    return LTranslate({high_l[0]: {low_d[0]: Fraction(1)}})


def gamma_admissible(model: Model, gamma: Gamma) -> Optional[str]:
    """None if ``gamma*D'' = D''`` and ``(gamma - 1)*L'' in D''``, else the reason."""
    if not model.laurent and not gamma.is_rational():
        return f"{gamma} * D'' is not D'' for a finite span"
    span = rs.RealSpan(model.spec.span_structure)
    for gen in model.gens:
        if gen.nu1.is_zero():
            continue
        try:
            moved = rs.mul_by_gamma(gen.nu1, gamma, span) - gen.nu1
        except OutsideSpan as exc:
            return str(exc)
        if not model.in_d_span(moved):
            return f"({gamma} - 1) * {gen.nu1} = {moved} is not in D''"
    return None


def build_f_gamma(model: Model, gamma) -> FGamma:
    gamma = Gamma.parse(gamma)
    if not model.ordered:
        raise GammaNotAdmissible("f_gamma needs an ordered model")
    if not model.has_d() or not model.d_archimedean():
        raise GammaNotAdmissible("f_gamma needs D archimedean with nonzero level-1 values")
    reason = gamma_admissible(model, gamma)
    if reason is not None:
        raise GammaNotAdmissible(reason)
    return FGamma(gamma)


# verification


@dataclass
class VerificationReport:
    passed: bool
    checks: Dict[str, Optional[bool]]
    non_identity: bool
    samples: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": self.checks, "non_identity": self.non_identity,
               "samples": self.samples}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def _convergents(x: Fraction, max_den: int) -> List[Tuple[int, int]]:
    out, (h0, h1), (k0, k1) = [], (0, 1), (1, 0)
    while True:
        a = x.numerator // x.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return out
        out.append((h1, k1))
        frac = x - a
        if frac == 0:
            return out
        x = 1 / frac


def structured_samples(model: Model, max_den: int = 10 ** 6) -> List[Element]:
    """Basis elements and near-cancelling integer combinations at each level.

    The combinations ``q*b - p*a`` with ``p/q`` a convergent of
    ``nu(b)/nu(a)`` have valuations of alternating sign and shrinking size, so
    any additive map that rescales one direction relative to another flips the
    sign of one of them.
    """
    out = model.basis_elements()
    if not model.ordered:
        return out
    for level in (1, 2):
        items = [e for e in out[1:] if model.nu(e, 1).is_zero() == (level == 2)]
        items = [e for e in items if not model.nu(e, level).is_zero()]
        for i, a in enumerate(items):
            va = rs.evaluate(model.nu(a, level), 256)
            for b in items[i + 1:]:
                vb = rs.evaluate(model.nu(b, level), 256)
                ratio = Fraction(vb.lo + vb.hi) / Fraction(va.lo + va.hi)
                for p, q in _convergents(ratio, max_den):
                    z = b * q - a * p
                    out += [z, -z]
    return out


def verify_automorphism(model: Model, f: Automorphism, samples: int = 100, trials: int = 200,
                        seed: int = 0, fail_fast: bool = False) -> VerificationReport:
    """Randomized exact check that ``f`` is an automorphism of ``model``."""
    rng = random.Random(seed)
    elems = structured_samples(model) + [model.random_element(rng) for _ in range(samples)]
    pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(trials)]
    checks: Dict[str, Optional[bool]] = {"defined": True, "additivity": True, "fixes_one": True,
                                         "residues": True, "inverse": True,
                                         "order": True if model.ordered else None}
    report = VerificationReport(True, checks, False, len(elems))

    def fail(name, **info):
        checks[name] = False
        report.passed = False
        if report.counterexample is None:
            report.counterexample = {"check": name,
                                     **{k: (str(v) if isinstance(v, Element) else v)
                                        for k, v in info.items()}}
        return fail_fast

    try:
        f_inv = f.inverse(model)
        images = {}
        for x in elems:
            images[x] = f.apply(model, x)
    except ZRigidError as exc:
        fail("defined", error=str(exc))
        return report
    report.non_identity = any(images[x] != x for x in elems)

    if f.apply(model, model.one()) != model.one() and fail("fixes_one"):
        return report
    if model.ordered:
        for x in elems:
            if model.sign(images[x]) != model.sign(x):
                if fail("order", x=x, fx=images[x]):
                    return report
                break
        if checks["order"]:
            for x, y in pairs:
                if model.compare(x, y) != model.compare(images[x], images[y]):
                    if fail("order", x=x, y=y):
                        return report
                    break
    for x, y in pairs:
        if f.apply(model, x + y) != images[x] + images[y]:
            if fail("additivity", x=x, y=y):
                return report
            break
    for x in elems:
        bad = next((n for n in range(2, 31)
                    if model.residue_elem(images[x], n) != model.residue_elem(x, n)), None)
        if bad is not None:
            if fail("residues", x=x, n=bad):
                return report
            break
    for x in elems:
        try:
            back = f_inv.apply(model, images[x])
        except ZRigidError as exc:
            back = None
            err = str(exc)
        if back != x:
            if fail("inverse", x=x, **({"error": err} if back is None else {})):
                return report
            break
    return report


# rigidity decision


RIGID = "Rigid"
NON_RIGID = "NonRigid"
UNKNOWN = "Unknown"


@dataclass
class Verdict:
    status: str
    justification: List[str] = field(default_factory=list)
    witness: Optional[Automorphism] = None
    verification: Optional[VerificationReport] = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status, "justification": self.justification}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.verification is not None:
            out["verification"] = self.verification.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


FINITE_DIM = "finite_dim"
COUNTEREXAMPLE_GAMMA = "counterexample_gamma"


@dataclass(frozen=True)
class MultiplierReport:
    """Outcome of checking that only gamma = 1 satisfies
    ``gamma*D'' = D''`` and ``(gamma - 1)*L'' in D''``."""

    branch: str
    gamma: Optional[Gamma] = None
    searched: int = 0

    def to_json(self) -> dict:
        out = {"branch": self.branch, "searched": self.searched}
        if self.gamma is not None:
            out["gamma"] = str(self.gamma)
        return out


def small_rationals(height: int, positive: bool = True) -> List[Fraction]:
    seen = sorted({Fraction(p, q) for p in range(1, height + 1) for q in range(1, height + 1)},
                  key=lambda r: (max(r.numerator, r.denominator), r))
    return seen if positive else seen + [-r for r in seen]


def gamma_candidates(max_pi_exp: int = 3, height: int = 10) -> List[Gamma]:
    exps = [0] + [s * k for k in range(1, max_pi_exp + 1) for s in (1, -1)]
    return [Gamma(c, k) for k in exps for c in small_rationals(height)
            if not (k == 0 and c == 1)]


def multiplier_condition_report(model: Model, max_pi_exp: int = 3,
                                height: int = 10) -> MultiplierReport:
    """Finite D'' always satisfies the condition; Laurent D'' gets a bounded search."""
    if not model.ordered or not model.d_archimedean() or not model.has_d() or not model.l_level1():
        raise PreconditionFailed("needs an ordered model with D archimedean, D and L cofinal")
    if not model.laurent:
        return MultiplierReport(FINITE_DIM)
    cands = gamma_candidates(max_pi_exp, height)
    for i, gamma in enumerate(cands):
        if gamma_admissible(model, gamma) is None:
            return MultiplierReport(COUNTEREXAMPLE_GAMMA, gamma, i + 1)
    return MultiplierReport(UNKNOWN, None, len(cands))


def _with_witness(model: Model, witness: Automorphism, justification: List[str],
                  samples: int, seed: int) -> Verdict:
    report = verify_automorphism(model, witness, samples=samples, seed=seed)
    if not report.passed or not report.non_identity:
        return Verdict(UNKNOWN, justification, witness, report,
                       reason="candidate witness failed verification")
    return Verdict(NON_RIGID, justification, witness, report)


def decide_rigidity(model: Model, samples: int = 100, seed: int = 0) -> Verdict:
    if not model.ordered:
        if not model.has_d():
            return Verdict(RIGID, ["unordered model", "D is trivial, so G embeds in Z^ by the "
                                   "residue map, and automorphisms preserve residues"])
        return _with_witness(model, aut_from_gh(model, 2), [
            "unordered model", "D is nontrivial",
            "d + l -> 2d + l is an automorphism of the unordered group"], samples, seed)
    if not model.has_d():
        return Verdict(RIGID, ["ordered model", "D is trivial: the model is Leibnizian",
                               "Leibnizian structures are rigid"])
    if model.l_level1() and model.d_level2_only():
        kind = "D is not archimedean" if model.d_level1() else "D is not cofinal"
        return _with_witness(model, l_translate_witness(model), [
            "ordered model", kind,
            "a level-1 L generator can be moved by a D element inside the lower convex subgroup"],
            samples, seed)
    if not model.l_level1():
        return _with_witness(model, d_shift_witness(model), [
            "ordered model", "L is not cofinal",
            "doubling the level-1 D block preserves the lexicographic order"], samples, seed)
    chain = ["ordered model", "D is archimedean and cofinal, L is cofinal",
             "rigid iff gamma = 1 is the only gamma > 0 with gamma*D'' = D'' "
             "and (gamma - 1)*L'' in D''"]
    cond = multiplier_condition_report(model)
    if cond.branch == FINITE_DIM:
        return Verdict(RIGID, chain + [
            "D'' is finite-dimensional over Q and meets L'' trivially, so no gamma != 1 works"])
    if cond.branch == COUNTEREXAMPLE_GAMMA:
        return _with_witness(model, build_f_gamma(model, cond.gamma),
                             chain + [f"gamma = {cond.gamma} satisfies both conditions"],
                             samples, seed)
    return Verdict(UNKNOWN, chain, reason=f"no admissible gamma among {cond.searched} "
                                          "small candidates; the condition is undecided")


# adversarial search for rigid models


@dataclass
class SearchResult:
    candidates: int
    rejected_at_construction: int
    passing: List[dict]
    identity_passes: bool

    def to_json(self) -> dict:
        return {"candidates": self.candidates,
                "rejected_at_construction": self.rejected_at_construction,
                "passing_non_identity": self.passing, "identity_passes": self.identity_passes}


def _random_candidate(model: Model, rng: random.Random, height: int) -> Automorphism:
    rats = small_rationals(height, positive=False) + [Fraction(0)] * 8
    names = [laurent_name(k) for k in range(-1, 2)] if model.laurent else model.d_names
    if model.laurent:
        g: DMap = ScaleMap(Gamma(rng.choice(small_rationals(height)), rng.randint(-2, 2)))
    else:
        while True:
            columns = {nj: {ni: rng.choice(rats) for ni in names} for nj in names}
            g = MatrixMap.from_columns(names, columns)
            try:
                g.inverse()
                break
            except NotInvertible:
                continue
    h = {gen.name: {n: c for n in names if (c := rng.choice(rats))} for gen in model.gens}
    return GH(g, {u: img for u, img in h.items() if img})


def adversarial_search(model: Model, count: int = 1000, height: int = 10, seed: int = 0,
                       samples: int = 20) -> SearchResult:
    """Try ``count`` GH candidates plus every small gamma; report non-identity survivors."""
    rng = random.Random(seed)
    passing, rejected, tried = [], 0, 0
    seen = set()
    ident = verify_automorphism(model, identity_aut(model), samples=samples, seed=seed)
    while tried < count:
        f = _random_candidate(model, rng, height)
        key = repr(f.to_json())
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        rep = verify_automorphism(model, f, samples=samples, seed=seed, fail_fast=True)
        if rep.passed and rep.non_identity:
            passing.append(f.to_json())
    for gamma in gamma_candidates(3 if model.laurent else 0, height):
        tried += 1
        try:
            f = build_f_gamma(model, gamma)
        except (GammaNotAdmissible, OutsideSpan):
            rejected += 1
            continue
        rep = verify_automorphism(model, f, samples=samples, seed=seed, fail_fast=True)
        if rep.passed and rep.non_identity:
            passing.append(f.to_json())
    return SearchResult(tried, rejected, passing, ident.passed and not ident.non_identity)
