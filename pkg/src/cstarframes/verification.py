"""Batch dual-route verification of the operator-module equivalences.

Each suite generates random instances (a fixed fraction deliberately
rank-deficient), runs the vector-side checker and the operator-module
checker, and counts verdict disagreements.  The operator-module checkers
already embed the sampled cross-validation route, so a disagreement
either way surfaces in their reports.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraSpec
from .analysis import (
    FrameReport,
    OperatorFamily,
    check_end_frame,
    check_generalized_end_frame,
    check_generalized_k_end_frame,
    check_g_frame,
    check_k_end_frame,
    check_k_g_frame,
    check_star_g_frame_commutative,
    check_star_k_g_frame_commutative,
)
from .generators import (
    degenerate_operator_family,
    random_endomorphism_family,
    random_operator,
)
from .modules import ModuleSpace

SUITES = ("end-vs-g", "k-end-vs-k-g", "generalized-vs-star-g", "generalized-k-vs-star-k-g")

_GENERAL_SPECS = (AlgebraSpec((1,)), AlgebraSpec((2,)), AlgebraSpec((1, 2)))
_COMMUTATIVE_SPECS = (AlgebraSpec((1,)), AlgebraSpec((1, 1)), AlgebraSpec((1, 1, 1)))


def _route_trouble(report: FrameReport) -> bool:
    d = report.detail or ""
    return "disagreement" in d or "could not reproduce" in d


def _make_family(rng: np.random.Generator, commutative: bool,
                 degenerate: bool) -> OperatorFamily:
    specs = _COMMUTATIVE_SPECS if commutative else _GENERAL_SPECS
    spec = specs[int(rng.integers(0, len(specs)))]
    rank = int(rng.integers(2, 4))
    domain = ModuleSpace(spec, rank)
    n_members = int(rng.integers(2, 5))
    if degenerate:
        members = degenerate_operator_family(rng, domain, n_members)
    else:
        members = random_endomorphism_family(rng, domain, n_members)
    return OperatorFamily(tuple(members))


def _suite_seed(seed: int, suite_index: int, instance_index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(suite_index, instance_index))
               .generate_state(1)[0])


def run_suite(name: str, seed: int, count: int, samples: int = 25,
              tol: float = 1e-9) -> dict:
    """Run one equivalence suite; returns a JSON-shaped summary."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    suite_index = SUITES.index(name)
    commutative = name.startswith("generalized")
    with_k = "k-" in name
    disagreements = 0
    fails_generated = 0
    records = []
    for i in range(count):
        inst_seed = _suite_seed(seed, suite_index, i)
        rng = np.random.default_rng(inst_seed)
        degenerate = i % 4 == 3
        family = _make_family(rng, commutative, degenerate)
        k = random_operator(rng, family.domain, family.domain) if with_k else None
        check_seed = inst_seed ^ 0x5EED

        if name == "end-vs-g":
            vector_side = check_g_frame(family, tol)
            op_side = check_end_frame(family, tol, samples=samples, seed=check_seed)
        elif name == "k-end-vs-k-g":
            vector_side = check_k_g_frame(family, k, tol)
            op_side = check_k_end_frame(family, k, tol, samples=samples, seed=check_seed)
        elif name == "generalized-vs-star-g":
            vector_side = check_star_g_frame_commutative(family, tol)
            op_side = check_generalized_end_frame(family, tol, samples=samples, seed=check_seed)
        else:
            vector_side = check_star_k_g_frame_commutative(family, k, tol)
            op_side = check_generalized_k_end_frame(family, k, tol, samples=samples,
                                                    seed=check_seed)

        disagrees = vector_side.passed != op_side.passed or _route_trouble(op_side)
        if disagrees:
            disagreements += 1
        if not vector_side.passed:
            fails_generated += 1
        records.append({
            "index": i,
            "degenerate": degenerate,
            "vector_side": vector_side.verdict,
            "operator_side": op_side.verdict,
            "agrees": not disagrees,
        })
    return {
        "suite": name,
        "instances": count,
        "disagreements": disagreements,
        "failing_instances": fails_generated,
        "records": records,
    }


def run_equivalence_suites(seed: int, count: int, samples: int = 25,
                           tol: float = 1e-9) -> dict:
    """All four suites; the CLI's theorem-verification payload."""
    suites = [run_suite(name, seed, count, samples, tol) for name in SUITES]
    return {
        "seed": seed,
        "count": count,
        "suites": suites,
        "disagreements_total": sum(s["disagreements"] for s in suites),
    }
