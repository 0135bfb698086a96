"""Command-line interface: classify, decompose, verify, disc."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .actions import Action, ActionError
from .classifier import blift_equiv, blift_is_trivial, classify, half_delta, twist_pair
from .decompose import DecompositionError, decompose
from .discriminant import glued
from .k3 import MODELS, class_of
from .lattice import LatticeError
from .oracle import DEFAULT_MAX_D, SUITES, OracleError, run_suite, structure_classes

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def to_jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Action):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "value"):
        return x.value
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass(frozen=True)
class OutputEnvelope:
    command: str
    inputs: dict
    result: Any
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return to_jsonable({"command": self.command, "inputs": self.inputs,
                            "result": self.result, "warnings": list(self.warnings)})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OutputEnvelope":
        data = json.loads(text)
        return cls(data["command"], data["inputs"], data["result"], data["warnings"])

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        lines += _text_block(self.to_dict()["result"], 0)
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def _text_block(x: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(x, dict):
        width = max((len(k) for k in x), default=0)
        out = []
        for k in sorted(x):
            v = x[k]
            if _has_dicts(v):
                out.append(f"{pad}{k}:")
                out += _text_block(v, indent + 1)
            else:
                out.append(f"{pad}{k.ljust(width)}  {_inline(v)}")
        return out
    if isinstance(x, list):
        out = []
        for i, v in enumerate(x):
            out.append(f"{pad}[{i}]")
            out += _text_block(v, indent + 1)
        return out
    return [f"{pad}{_inline(x)}"]


def _has_dicts(v: Any) -> bool:
    items = v.values() if isinstance(v, dict) else v if isinstance(v, list) else ()
    return any(isinstance(i, dict) for i in items)


def _inline(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(i) for i in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(v[k])}" for k in sorted(v)) + "}"
    return str(v)


def cmd_classify(args) -> tuple[OutputEnvelope, int]:
    v = classify(args.d, args.div)
    result = {
        "kind": v.kind.value,
        "d": v.d,
        "div": v.div,
        "tau": v.tau,
        "partners_raw": v.partners_raw,
        "partners_mod_negation": v.partners_mod_negation,
        "b_split": v.b_split,
        "matches": v.matches,
    }
    return OutputEnvelope("classify", {"d": args.d, "div": args.div}, result,
                          list(v.warnings)), EXIT_OK


def _twist_label(B) -> str:
    if blift_is_trivial(B):
        return "trivial"
    if blift_equiv(B, half_delta(B.order, B.pic, "reduced")):
        return "delta/2"
    return "other"


def cmd_decompose(args) -> tuple[OutputEnvelope, int]:
    b = args.b if args.b is not None else 0
    if args.div == 2 and b:
        raise ActionError("divisibility 2 actions carry no b component")
    target = Action(args.div, args.d, args.a, b)
    inputs = {"d": args.d, "a": args.a, "b": b, "div": args.div, "twist_free": args.twist_free}
    try:
        chain = decompose(args.d, target, twist_free=args.twist_free)
    except DecompositionError as exc:
        return OutputEnvelope("decompose", inputs, {"error": str(exc)}), EXIT_VERIFY
    steps = []
    for st, act in zip(chain.steps, chain.verified_actions):
        x, y = twist_pair(st)
        steps.append({
            "r": st.r, "s": st.s, "l": st.l, "div": st.div, "n": st.n, "m": st.m,
            "t": st.t, "action": act, "twists": [_twist_label(x), _twist_label(y)],
        })
    result = {
        "target": target,
        "steps": steps,
        "verified_actions": list(chain.verified_actions),
        "composed": chain.composed(),
        "negated": chain.negated,
    }
    return OutputEnvelope("decompose", inputs, result), EXIT_OK


def cmd_verify(args) -> tuple[OutputEnvelope, int]:
    rep = run_suite(args.suite, args.max_d, args.jobs)
    inputs = {"suite": args.suite, "max_d": args.max_d or DEFAULT_MAX_D[args.suite],
              "jobs": args.jobs}
    data = rep.to_dict()
    warnings = data.pop("warnings")
    return OutputEnvelope("verify", inputs, data, warnings), \
        (EXIT_OK if rep.passed else EXIT_VERIFY)


def disc_representative(d: int, div: int) -> tuple[str, tuple]:
    for fam, rsl, dv in structure_classes(d):
        if dv == div:
            return fam, rsl
    raise ActionError(f"no representative for d={d}, div={div}")


def cmd_disc(args) -> tuple[OutputEnvelope, int]:
    if args.d < 1:
        raise ActionError("d must be positive")
    if args.div == 2 and args.d % 4 != 3:
        raise ActionError("divisibility 2 needs d = 3 mod 4")
    fam, rsl = disc_representative(args.d, args.div)
    G = glued(class_of(fam, *rsl, model_name=args.model), args.model)
    D = G.disc
    gens = [G.gamma] + ([G.delta] if G.delta is not None else [])
    orders = [D.order(g) for g in gens]
    result = {
        "polarization": {"family": fam, "rsl": list(rsl)},
        "orders": orders,
        "quads": [D.quadratic(g) for g in gens],
        "bil": [[D.bilinear(g, h) for h in gens] for g in gens],
        "gamma_lift": list(G.gamma_lift),
        "gluing_index": G.gluing_index,
        "size": D.size,
    }
    inputs = {"d": args.d, "div": args.div, "model": args.model}
    return OutputEnvelope("disc", inputs, result), EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hkderived", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="derived or twisted verdict and partner counts")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--div", type=int, choices=(1, 2), default=1)

    dc = sub.add_parser("decompose", help="reflection chain realizing an action")
    dc.add_argument("--d", type=int, required=True)
    dc.add_argument("--a", type=int, required=True)
    dc.add_argument("--b", type=int, choices=(0, 1))
    dc.add_argument("--div", type=int, choices=(1, 2), default=1)
    dc.add_argument("--twist-free", action="store_true",
                    help="only use steps whose twists are trivial")

    v = sub.add_parser("verify", help="run a brute-force verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--max-d", type=int)
    v.add_argument("--jobs", type=int, default=1)

    ds = sub.add_parser("disc", help="discriminant group of a transcendental lattice")
    ds.add_argument("--d", type=int, required=True)
    ds.add_argument("--div", type=int, choices=(1, 2), default=1)
    ds.add_argument("--model", choices=MODELS, default="reduced")

    for sp in (c, dc, v, ds):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
    return p


COMMANDS = {"classify": cmd_classify, "decompose": cmd_decompose,
            "verify": cmd_verify, "disc": cmd_disc}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    if getattr(args, "jobs", 1) < 1:
        print("hkderived: error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        env, code = COMMANDS[args.command](args)
    except (ActionError, LatticeError, OracleError, ValueError) as exc:
        print(f"hkderived: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(env.to_json() if args.json else env.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
