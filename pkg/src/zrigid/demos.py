"""Demo scenarios: a rigid non-Leibnizian model, a non-rigid multiplier model,
and the unordered doubling map."""

from __future__ import annotations

from .models import g_exm_spec, g_laurent_spec
from .rigidity import (RIGID, adversarial_search, decide_rigidity, verify_automorphism)
from .zgroup import ORDERED, UNORDERED, build_model


def exm_exist(seed: int = 0, samples: int = 100, search: int = 0) -> dict:
    """G_exm: D'' = Q, L'' = Q*sqrt(2). Optionally runs the adversarial search."""
    model = build_model(g_exm_spec())
    verdict = decide_rigidity(model, samples=samples, seed=seed)
    out = {"model": model.describe(), "verdict": verdict.to_json()}
    if search and verdict.status == RIGID:
        out["adversarial_search"] = adversarial_search(model, count=search, seed=seed).to_json()
    return out


def exm_mult(seed: int = 0, samples: int = 100) -> dict:
    """G_laurent: D'' = Q[pi, 1/pi], L'' = Q/(pi - 1); gamma = pi moves it."""
    model = build_model(g_laurent_spec())
    verdict = decide_rigidity(model, samples=samples, seed=seed)
    out = {"model": model.describe(), "verdict": verdict.to_json()}
    if verdict.witness is not None:
        report = verify_automorphism(model, verdict.witness, samples=samples, seed=seed + 1)
        out["verification"] = report.to_json()
    return out


def unordered_nonrigid(seed: int = 0, samples: int = 100) -> dict:
    """Doubling D is an automorphism of the unordered group but not of the ordered one."""
    unordered = build_model(g_exm_spec(UNORDERED))
    verdict = decide_rigidity(unordered, samples=samples, seed=seed)
    out = {"model": unordered.describe(), "verdict": verdict.to_json()}
    if verdict.witness is not None:
        ordered = build_model(g_exm_spec(ORDERED))
        out["ordered_check"] = verify_automorphism(ordered, verdict.witness, samples=samples,
                                                   seed=seed).to_json()
    return out


DEMOS = {"exm-exist": exm_exist, "exm-mult": exm_mult, "unordered-nonrigid": unordered_nonrigid}
