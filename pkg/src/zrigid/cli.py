"""Command-line front end. Output is JSON on stdout; ``--pretty`` renders it as text.

Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import demos
from .acceptance import run_all
from .errors import InvalidSpec, ZRigidError
from .models import CATALOG
from .presburger import decide_sentence, eliminate_quantifiers, normalize, parse
from .presburger.qe import DEFAULT_NODE_CAP
from .realspan import DEFAULT_MAX_BITS
from .rigidity import Automorphism, decide_rigidity, verify_automorphism
from .zgroup import Model, build_model


def _load_json(arg: str, what: str):
    """``arg`` is a path to a JSON file or inline JSON text."""
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{what} is neither a readable file nor valid JSON: {exc}") from exc


def _model(args) -> Model:
    if args.spec in CATALOG and not os.path.exists(args.spec):
        return build_model(CATALOG[args.spec](), max_bits=args.max_bits)
    return build_model(_load_json(args.spec, "model spec"), max_bits=args.max_bits)


def _witness(arg: str) -> Automorphism:
    data = _load_json(arg, "witness")
    if "witness" in data:
        data = data["witness"]
    return Automorphism.from_json(data)


def _elem(model: Model, text: str):
    return model.element_from_json(text)


def _render(value, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {v}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            sub = _render(v, indent + 1)
            lines.append(f"{pad}- {sub[0].strip()}")
            lines += sub[1:]
        return lines
    return [f"{pad}{value}"]


# handlers


def cmd_presburger(args):
    f = parse(args.formula)
    if args.action == "decide":
        return {"result": decide_sentence(f, args.node_cap)}
    q = eliminate_quantifiers(f, args.node_cap)
    if args.action == "normalize":
        q = normalize(q, args.node_cap)
    return {"formula": str(q)}


def cmd_model(args):
    model = _model(args)
    action = args.action
    if action == "build":
        return model.describe()
    if action == "leibnizian":
        return {"leibnizian": model.is_leibnizian()}
    if action == "rigidity":
        return decide_rigidity(model, samples=args.samples, seed=args.seed).to_json()
    x = _elem(model, args.x)
    if action == "elem":
        return {"element": x.to_json(), "text": str(x)}
    if action == "residue":
        return {"residue": model.residue_elem(x, args.n), "modulus": args.n}
    if action == "decompose":
        d, l = model.decompose(x)
        return {"d_part": d.to_json(), "l_part": l.to_json()}
    y = _elem(model, args.y)
    if action == "compare":
        return {"result": model.compare(x, y)}
    if action == "separate":
        return model.separate(x, y).to_json()
    raise AssertionError(action)


def cmd_aut(args):
    model = _model(args)
    f = _witness(args.witness)
    if args.action == "apply":
        y = f.apply(model, _elem(model, args.x))
        return {"image": y.to_json(), "text": str(y)}
    return verify_automorphism(model, f, samples=args.samples, trials=args.trials,
                               seed=args.seed).to_json()


def cmd_demo(args):
    fn = demos.DEMOS[args.name]
    kwargs = {"seed": args.seed, "samples": args.samples}
    if args.name == "exm-exist" and args.search:
        kwargs["search"] = args.search
    return fn(**kwargs)


def cmd_selftest(args):
    echo = (lambda line: print(line, file=sys.stderr)) if not args.pretty else None
    results = run_all(seed=args.seed, echo=echo)
    out = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    return out, (0 if out["passed"] else 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="RNG seed for sampling (default 0)")
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS,
                        help="random elements per verification (default 100)")
    common.add_argument("--max-bits", type=int, default=argparse.SUPPRESS,
                        help="precision cap for real sign decisions (default 4096)")
    common.add_argument("--node-cap", type=int, default=argparse.SUPPRESS,
                        help="formula size cap for quantifier elimination")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")

    parser = argparse.ArgumentParser(prog="zrigid", parents=[common],
                                     description="Z-groups, Presburger arithmetic and rigidity.")
    parser.set_defaults(seed=0, samples=100, max_bits=DEFAULT_MAX_BITS, node_cap=DEFAULT_NODE_CAP,
                        pretty=False)
    sub = parser.add_subparsers(dest="command", required=True)

    pres = sub.add_parser("presburger", help="decide, eliminate quantifiers, normalize")
    pres_sub = pres.add_subparsers(dest="action", required=True)
    for action in ("decide", "qe", "normalize"):
        p = pres_sub.add_parser(action, parents=[common])
        p.add_argument("formula")
        p.set_defaults(handler=cmd_presburger)

    model = sub.add_parser("model", help="build and query Z-group models")
    model_sub = model.add_subparsers(dest="action", required=True)
    arities = {"build": [], "leibnizian": [], "rigidity": [], "elem": ["x"], "decompose": ["x"],
               "residue": ["x", "n"], "compare": ["x", "y"], "separate": ["x", "y"]}
    for action, extra in arities.items():
        p = model_sub.add_parser(action, parents=[common])
        p.add_argument("spec", help="model spec JSON (file or inline) or a builtin name: "
                       + ", ".join(CATALOG))
        for name in extra:
            p.add_argument(name, type=int if name == "n" else str)
        p.set_defaults(handler=cmd_model)
    aut = model_sub.add_parser("aut", help="apply or verify a witness automorphism")
    aut_sub = aut.add_subparsers(dest="action", required=True)
    p = aut_sub.add_parser("apply", parents=[common])
    p.add_argument("spec")
    p.add_argument("witness", help="witness JSON (file or inline), or a rigidity verdict")
    p.add_argument("x")
    p.set_defaults(handler=cmd_aut)
    p = aut_sub.add_parser("verify", parents=[common])
    p.add_argument("spec")
    p.add_argument("witness")
    p.add_argument("--trials", type=int, default=200, help="random pairs for pairwise checks")
    p.set_defaults(handler=cmd_aut)

    demo = sub.add_parser("demo", parents=[common], help="run a demo scenario")
    demo.add_argument("name", choices=sorted(demos.DEMOS))
    demo.add_argument("--search", type=int, default=0,
                      help="exm-exist: number of adversarial candidates to try")
    demo.set_defaults(handler=cmd_demo)

    selftest = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = 0
    try:
        out = args.handler(args)
        if isinstance(out, tuple):
            out, code = out
    except ZRigidError as exc:
        out, code = {"error": type(exc).__name__, "message": str(exc)}, 1
        for key in ("position", "expected"):
            if getattr(exc, key, None) is not None:
                out[key] = getattr(exc, key)
    if args.pretty:
        print("\n".join(_render(out)))
    else:
        print(json.dumps(out, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
