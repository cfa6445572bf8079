"""Batch command-line interface: gen | check | construct | verify-theorems.

Reports are canonical JSON on stdout (or --out) and are byte-identical
for a fixed seed; wall-clock timing goes to stderr so it never perturbs
the report bytes.  Exit status: 0 all verdicts pass, 1 a check or
certificate failed, 2 parse or validation error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .analysis import (
    check_end_frame,
    check_generalized_end_frame,
    check_generalized_k_end_frame,
    check_g_frame,
    check_k_end_frame,
    check_k_g_frame,
    check_star_frame_commutative,
    check_star_g_frame_commutative,
    check_star_k_frame_commutative,
    check_star_k_g_frame_commutative,
    check_star_sampled,
    check_vector_frame,
    VectorFamily,
)
from .constructions import (
    direct_sum_lift,
    frame_from_injective,
    k2k1_frame,
    k_frame_from_frame,
    parseval_k_from_family,
    power_k_frame,
    surjective_demotion,
)
from .errors import FrameToolkitError, ParseError, UnknownProfile, ValidationError
from .iojson import (
    canonical_dumps,
    certificate_to_json,
    element_from_json,
    load_instance,
    op_to_json,
    report_to_json,
)
from .profiles import PROFILES, build_instance
from .verification import run_equivalence_suites

CONSTRUCTIONS = ("direct-sum-lift", "parseval-k", "k-frame-from-frame",
                 "k2k1", "power-k", "surjective-demotion", "frame-from-injective")


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _request_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _run_request(req: dict, resolved: dict, tol: float, samples: int, seed: int):
    family = resolved["families"][req["family"]]
    k = resolved["operators"][req["k"]] if "k" in req else None
    kind = req["check"]
    if kind == "g-frame":
        return check_g_frame(family, tol)
    if kind == "vector-frame":
        return check_vector_frame(family, tol)
    if kind == "k-g-frame":
        return check_k_g_frame(family, k, tol)
    if kind == "star-frame":
        return check_star_frame_commutative(family, tol)
    if kind == "star-g-frame":
        return check_star_g_frame_commutative(family, tol)
    if kind == "star-k-frame":
        return check_star_k_frame_commutative(family, k, tol)
    if kind == "star-k-g-frame":
        return check_star_k_g_frame_commutative(family, k, tol)
    if kind == "star-sampled":
        spec = resolved["spec"]
        lower = element_from_json(req["lower"], spec)
        upper = element_from_json(req["upper"], spec)
        return check_star_sampled(family, lower, upper, samples, tol, seed)
    if kind == "end-frame":
        return check_end_frame(family, tol, samples, seed)
    if kind == "k-end-frame":
        return check_k_end_frame(family, k, tol, samples, seed)
    if kind == "generalized-end-frame":
        return check_generalized_end_frame(family, tol, samples, seed)
    if kind == "generalized-k-end-frame":
        return check_generalized_k_end_frame(family, k, tol, samples, seed)
    raise ValidationError(f"unknown check {kind!r}")


def cmd_gen(args) -> int:
    instance = build_instance(args.profile, args.seed)
    _emit(canonical_dumps(instance) + "\n", args.out)
    return 0


def cmd_check(args) -> int:
    start = time.monotonic()
    raw, resolved = load_instance(args.instance)
    tolerances = resolved["tolerances"]
    tol = args.tol if args.tol is not None else float(tolerances.get("tol", 1e-9))
    samples = args.samples if args.samples is not None else int(tolerances.get("samples", 200))
    seed = args.seed if args.seed is not None else resolved["seed"]

    requests = resolved["requests"]

    def run_one(item):
        index, req = item
        return _run_request(req, resolved, tol, samples, _request_seed(seed, index))

    if args.parallel > 1:
        with ThreadPoolExecutor(max_workers=args.parallel) as pool:
            reports = list(pool.map(run_one, enumerate(requests)))
    else:
        reports = [run_one(item) for item in enumerate(requests)]

    all_passed = all(r.passed for r in reports)
    payload = {
        "tool": "cstarframes",
        "version": __version__,
        "command": "check",
        "seed": seed,
        "tol": tol,
        "samples": samples,
        "results": [{"request": req, "report": report_to_json(rep)}
                    for req, rep in zip(requests, reports)],
        "all_passed": all_passed,
    }
    _emit(canonical_dumps(payload) + "\n", args.out)
    print(f"elapsed_ms={int((time.monotonic() - start) * 1000)}", file=sys.stderr)
    return 0 if all_passed else 1


def cmd_construct(args) -> int:
    start = time.monotonic()
    raw, resolved = load_instance(args.instance)
    tol = args.tol if args.tol is not None else float(resolved["tolerances"].get("tol", 1e-9))
    samples = args.samples if args.samples is not None else 25
    seed = args.seed if args.seed is not None else resolved["seed"]

    family_name = args.family or next(iter(resolved["families"]))
    if family_name not in resolved["families"]:
        raise ValidationError(f"unknown family {family_name!r}")
    family = resolved["families"][family_name]
    if isinstance(family, VectorFamily):
        raise ValidationError("constructions take operator families")

    def get_k(name):
        if name is None:
            raise ValidationError(f"construction {args.construction} needs --k/--k2")
        if name not in resolved["operators"]:
            raise ValidationError(f"unknown operator {name!r}")
        return resolved["operators"][name]

    name = args.construction
    produced_ops = None
    produced_k = None
    if name == "direct-sum-lift":
        k = resolved["operators"][args.k] if args.k else None
        new_family, cert = direct_sum_lift(family, k, tol)
        produced_ops = new_family.members
    elif name == "parseval-k":
        produced_k, cert = parseval_k_from_family(family, tol, samples, seed)
    elif name == "k-frame-from-frame":
        new_family, cert = k_frame_from_frame(family, get_k(args.k), tol, samples, seed)
        produced_ops = new_family.members
    elif name == "k2k1":
        new_family, cert = k2k1_frame(family, get_k(args.k), get_k(args.k2), tol, samples, seed)
        produced_ops = new_family.members
    elif name == "power-k":
        new_family, cert = power_k_frame(family, get_k(args.k), args.n, tol, samples, seed)
        produced_ops = new_family.members
    elif name == "surjective-demotion":
        cert = surjective_demotion(family, get_k(args.k), tol, samples, seed)
    elif name == "frame-from-injective":
        new_family, cert = frame_from_injective(family.members, tol, samples, seed)
        produced_ops = new_family.members
    else:
        raise ValidationError(f"unknown construction {name!r}")

    payload = {
        "tool": "cstarframes",
        "version": __version__,
        "command": "construct",
        "construction": name,
        "family": family_name,
        "seed": seed,
        "certificate": certificate_to_json(cert),
    }
    if produced_ops is not None:
        payload["constructed_family"] = [op_to_json(t) for t in produced_ops]
    if produced_k is not None:
        payload["constructed_operator"] = op_to_json(produced_k)
    _emit(canonical_dumps(payload) + "\n", args.out)
    print(f"elapsed_ms={int((time.monotonic() - start) * 1000)}", file=sys.stderr)
    return 0 if cert.passed else 1


def cmd_verify_theorems(args) -> int:
    start = time.monotonic()
    summary = run_equivalence_suites(args.seed, args.count, args.samples, args.tol)
    payload = {
        "tool": "cstarframes",
        "version": __version__,
        "command": "verify-theorems",
        **summary,
    }
    _emit(canonical_dumps(payload) + "\n", args.out)
    print(f"elapsed_ms={int((time.monotonic() - start) * 1000)}", file=sys.stderr)
    return 0 if summary["disagreements_total"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstarframes",
        description="Frame bounds and frame constructions in finite Hilbert C*-modules")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="emit a random instance file")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--profile", required=True, choices=PROFILES)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_check = sub.add_parser("check", help="run the checks requested by an instance file")
    p_check.add_argument("instance")
    p_check.add_argument("--tol", type=float, default=None)
    p_check.add_argument("--eps-strict", type=float, default=1e-8)
    p_check.add_argument("--samples", type=int, default=None)
    p_check.add_argument("--seed", type=int, default=None)
    p_check.add_argument("--out", default=None)
    p_check.add_argument("--parallel", type=int, default=1)
    p_check.set_defaults(func=cmd_check)

    p_con = sub.add_parser("construct", help="run a construction on an instance family")
    p_con.add_argument("instance")
    p_con.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    p_con.add_argument("--family", default=None)
    p_con.add_argument("--k", default=None)
    p_con.add_argument("--k2", default=None)
    p_con.add_argument("--n", type=int, default=1)
    p_con.add_argument("--tol", type=float, default=None)
    p_con.add_argument("--samples", type=int, default=None)
    p_con.add_argument("--seed", type=int, default=None)
    p_con.add_argument("--out", default=None)
    p_con.set_defaults(func=cmd_construct)

    p_ver = sub.add_parser("verify-theorems", help="dual-route equivalence suites")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--count", type=int, default=10)
    p_ver.add_argument("--samples", type=int, default=25)
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=cmd_verify_theorems)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, UnknownProfile) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FrameToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
