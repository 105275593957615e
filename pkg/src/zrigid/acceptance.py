"""The nine acceptance criteria, shared by the test suite and ``zrigid selftest``.

Each check returns a :class:`CriterionResult`; a criterion passes only when
every instance is exact and the wall-clock time is within its budget.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from . import demos
from .models import g_exm_spec, g_laurent_spec
from .presburger.oracle import BoundedEvaluator, brute_force_grid, grid_eval
from .presburger.qe import eliminate_quantifiers, is_normal_form, normalize
from .presburger.random_formulas import formula_suite, random_qf
from .presburger.semantics import eval_qf_model
from .profinite import from_integer, is_divisible, random_element as random_profinite
from .rigidity import (GH, NON_RIGID, RIGID, Automorphism, ScaleMap, build_f_gamma,
                       verify_automorphism)
from .realspan import Gamma
from .zgroup import ORDERED, UNORDERED, build_model


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number}: {self.name} "
                f"({self.seconds:.1f}s of {self.budget:.0f}s) {self.detail}")

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3), "budget": self.budget}


def _timed(number: int, name: str, budget: float, body: Callable[[], tuple]) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if ok and elapsed >= budget:
        ok, detail = False, f"{detail}; over the time budget"
    return CriterionResult(number, name, ok, detail, elapsed, budget)


def qe_soundness(seed: int = 0, count: int = 200, box: int = 50) -> CriterionResult:
    def body():
        bad = []
        for f, free in formula_suite(seed, count):
            q = normalize(eliminate_quantifiers(f))
            if not is_normal_form(q):
                bad.append(f"not normal: {f}")
                continue
            expected = brute_force_grid(f, free, box, BoundedEvaluator())
            if not np.array_equal(grid_eval(q, free, box), expected):
                bad.append(str(f))
        return not bad, f"{count - len(bad)}/{count} formulas agree on [-{box},{box}]^k" + (
            f"; first mismatch: {bad[0]}" if bad else "")
    return _timed(1, "QE soundness", 60, body)


def zhat_structure(seed: int = 0, count: int = 100) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        failures = 0
        for _ in range(count):
            x = random_profinite(rng)
            for p in (2, 3, 5, 7):
                hits = sum(is_divisible(x + i, p) for i in range(p))
                failures += hits != 1
                failures += is_divisible(from_integer(1), p)
        return failures == 0, f"{count} elements x 4 primes, {failures} failures"
    return _timed(2, "Z^ structure", 5, body)


def zgroup_axioms(seed: int = 0, count: int = 100) -> CriterionResult:
    def body():
        problems = []
        for spec in (g_exm_spec(), g_laurent_spec()):
            model = build_model(spec)
            rng = random.Random(seed)
            xs = [model.random_element(rng) for _ in range(count)]
            zero, one = model.zero(), model.one()
            for i, x in enumerate(xs):
                y, z = xs[(i + 1) % count], xs[(i + 7) % count]
                cxy = model.compare(x, y)
                if cxy != -model.compare(y, x) or (cxy == 0) != (x == y):
                    problems.append(f"{spec.name}: totality/antisymmetry at {x}, {y}")
                if model.compare(x + z, y + z) != cxy:
                    problems.append(f"{spec.name}: translation at {x}, {y}, {z}")
                if cxy <= 0 and model.compare(y, z) <= 0 and model.compare(x, z) > 0:
                    problems.append(f"{spec.name}: transitivity at {x}, {y}, {z}")
                if model.compare(zero, x) < 0 and model.compare(x, one) < 0:
                    problems.append(f"{spec.name}: {x} lies strictly between 0 and 1")
                for p in (2, 3, 5, 7):
                    k, q = model.divide_by_p_with_remainder(x, p)
                    if not 0 <= k < p or q * p + model.int_scale(k, one) != x:
                        problems.append(f"{spec.name}: division of {x} by {p}")
        return not problems, (problems[0] if problems else
                              f"G_exm and G_laurent, {count} elements each")
    return _timed(3, "Z-group axioms", 30, body)


def separation(seed: int = 0, formulas: int = 20, pairs: int = 100) -> CriterionResult:
    def body():
        problems = []
        rng = random.Random(seed)
        model = build_model(g_exm_spec())
        a = model.elem({"d0": Fraction(3, 2)})
        two_a = model.int_scale(2, a)
        sep = model.separate(a, two_a)
        if sep.kind != "same_type":
            problems.append(f"a vs 2a gave {sep.kind}")
        for _ in range(formulas):
            f = normalize(random_qf(rng, ["v"], rng.randint(1, 4)))
            if eval_qf_model(f, model, {"v": a}) != eval_qf_model(f, model, {"v": two_a}):
                problems.append(f"a and 2a disagree on {f}")
        checked = 0
        for spec in (g_exm_spec(), g_exm_spec(UNORDERED), g_laurent_spec()):
            m = build_model(spec)
            pool = [m.random_element(rng) for _ in range(pairs)]
            pool += [m.elem(a0=k) for k in range(-3, 4)]
            pool += [m.d_unit(m.d_names[0] if m.d_names else "pi^0", c) for c in (1, -1, 2)]
            for _ in range(pairs):
                x, y = rng.sample(pool, 2)
                if x == y:
                    continue
                s = m.separate(x, y)
                if s.formula is None:
                    continue
                checked += 1
                if not eval_qf_model(s.formula, m, {"v": x}) or eval_qf_model(s.formula, m, {"v": y}):
                    problems.append(f"{spec.name}: {s.kind} formula {s.formula} fails on {x}, {y}")
        return not problems, (problems[0] if problems else
                              f"same type on {formulas} formulas; {checked} separating formulas sound")
    return _timed(4, "separation", 30, body)


def exm_mult(seed: int = 0, samples: int = 100) -> CriterionResult:
    def body():
        out = demos.exm_mult(seed=seed, samples=samples)
        v = out["verdict"]
        if v["status"] != NON_RIGID or v["witness"] != {"form": "f_gamma", "gamma": "pi"}:
            return False, f"verdict {v['status']} with witness {v.get('witness')}"
        rep = out["verification"]
        ok = rep["passed"] and rep["non_identity"] and rep["samples"] >= samples
        return ok, f"non-rigid with gamma = pi; verification {rep['checks']} on {rep['samples']} samples"
    return _timed(5, "multiplier model is non-rigid", 60, body)


def exm_exist(seed: int = 0, candidates: int = 1000) -> CriterionResult:
    def body():
        out = demos.exm_exist(seed=seed, search=candidates)
        if out["verdict"]["status"] != RIGID:
            return False, f"verdict {out['verdict']['status']}"
        s = out["adversarial_search"]
        ok = s["candidates"] >= candidates and not s["passing_non_identity"] and s["identity_passes"]
        return ok, (f"rigid; {s['candidates']} candidates, "
                    f"{len(s['passing_non_identity'])} non-identity survivors")
    return _timed(6, "rigid construction", 120, body)


def unordered_doubling(seed: int = 0) -> CriterionResult:
    def body():
        out = demos.unordered_nonrigid(seed=seed)
        v = out["verdict"]
        witness = Automorphism.from_json(v.get("witness", {"form": "none"})) if "witness" in v else None
        is_doubling = isinstance(witness, GH) and witness.g == ScaleMap(Gamma(2)) and not witness.h
        ok = (v["status"] == NON_RIGID and is_doubling and v["verification"]["passed"]
              and not out["ordered_check"]["passed"]
              and out["ordered_check"]["checks"]["order"] is False)
        return ok, (f"unordered verdict {v['status']}; ordered order check "
                    f"{out.get('ordered_check', {}).get('checks', {}).get('order')}")
    return _timed(7, "unordered doubling", 10, body)


def decomposition(seed: int = 0, count: int = 100) -> CriterionResult:
    def body():
        model = build_model(g_exm_spec())
        rng = random.Random(seed)
        problems = 0
        for _ in range(count):
            x = model.random_element(rng)
            d, l = model.decompose(x)
            problems += d + l != x
            for n in range(2, 101):
                problems += model.residue_elem(d, n) != 0
                problems += model.residue_elem(l, n) != model.residue_elem(x, n)
        return problems == 0, f"{count} elements, {problems} failures"
    return _timed(8, "decomposition", 10, body)


def f_gamma_inverse(seed: int = 0, count: int = 100) -> CriterionResult:
    def body():
        model = build_model(g_laurent_spec())
        f, g = build_f_gamma(model, "pi"), build_f_gamma(model, "pi^-1")
        rng = random.Random(seed)
        bad = moved = 0
        for _ in range(count):
            x = model.random_element(rng)
            fx = f.apply(model, x)
            moved += fx != x
            bad += g.apply(model, fx) != x
        return bad == 0 and moved > 0, f"{count} samples, {bad} failures, {moved} moved"
    return _timed(9, "f_gamma inverse law", 10, body)


CRITERIA = [qe_soundness, zhat_structure, zgroup_axioms, separation, exm_mult, exm_exist,
            unordered_doubling, decomposition, f_gamma_inverse]


def run_all(seed: int = 0, echo: Callable[[str], None] = None) -> List[CriterionResult]:
    results = []
    for check in CRITERIA:
        r = check(seed=seed)
        results.append(r)
        if echo:
            echo(r.line())
    return results
