"""Constructive frame transformations, each returning a checked certificate.

Every construction re-validates its input, builds the new family or
operator, and verifies the predicted bounds on the output by direct PSD
probes plus a full checker run.  Predicted bounds are recorded
separately from the recomputed optimal bounds: the transforms promise
valid bounds, not optimal ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL
from .analysis import (
    AlgebraBounds,
    FrameReport,
    OperatorFamily,
    ScalarBounds,
    _per_coordinate_bounds,
    _psd_leq_mats,
    check_end_frame,
    check_g_frame,
    check_k_end_frame,
    check_k_g_frame,
)
from .errors import (
    NotAFrame,
    NotInjectiveClosedRange,
    NotSurjective,
    ShapeMismatch,
)
from .modules import ModuleSpace, direct_sum
from .operators import (
    AdjointableOp,
    adjoint,
    compose,
    frame_operator,
    identity_op,
    injectivity_certificate,
    is_psd_order,
    op_norm,
    realize,
    scale,
    surjectivity_certificate,
)


@dataclass(frozen=True)
class ConstructionCertificate:
    construction: str
    predicted: ScalarBounds | AlgebraBounds | None
    input_report: FrameReport | None
    output_report: FrameReport | None
    passed: bool
    detail: str | None = None
    flavor_checks: tuple[dict, ...] = field(default_factory=tuple)


def _lambda_extremes(family: OperatorFamily) -> tuple[float, float]:
    r = realize(frame_operator(family.members))
    w = np.linalg.eigvalsh((r + r.conj().T) / 2)
    return float(w[0]), float(w[-1])


def _embed_op(summands: list[ModuleSpace], k: int) -> AdjointableOp:
    total = direct_sum(summands)
    spec = total.spec
    offset = sum(s.rank for s in summands[:k])
    zero, one = spec.zero(), spec.identity()
    rows = tuple(tuple(one if j == offset + i else zero for j in range(total.rank))
                 for i in range(summands[k].rank))
    return AdjointableOp(summands[k], total, rows)


def direct_sum_lift(family: OperatorFamily, k: AdjointableOp | None = None,
                    tol: float = DEFAULT_TOL) -> tuple[OperatorFamily, ConstructionCertificate]:
    """Re-house each member's output in its own slot of a direct sum.

    The lifted family has the same frame operator, so every frame flavor
    keeps its bounds; the certificate re-checks each applicable flavor
    (scalar, algebra-valued, and the K variants when K is given).
    """
    summands = [m.codomain for m in family.members]
    lifted = OperatorFamily(tuple(
        compose(_embed_op(summands, i), m) for i, m in enumerate(family.members)))

    s_before = realize(frame_operator(family.members))
    s_after = realize(frame_operator(lifted.members))
    frame_op_dev = float(np.max(np.abs(s_after - s_before)))
    exact = frame_op_dev <= 1e-12 * max(1.0, float(np.max(np.abs(s_before))))

    flavor_checks: list[dict] = []

    def record(flavor: str, before, after, lowers, uppers) -> None:
        scale_ref = max(1.0, max(abs(u) for u in uppers[0] + uppers[1]))
        dev = max(max(abs(a - b) for a, b in zip(*lowers)),
                  max(abs(a - b) for a, b in zip(*uppers)))
        flavor_checks.append({
            "flavor": flavor,
            "verdict_match": before == after,
            "max_bound_dev": dev,
            "match": before == after and dev <= 1e-10 * scale_ref,
        })

    g_before = check_g_frame(family, tol)
    g_after = check_g_frame(lifted, tol)
    cb, db = _lambda_extremes(family)
    ca, da = _lambda_extremes(lifted)
    record("g", g_before.passed, g_after.passed, ([cb], [ca]), ([db], [da]))

    if family.domain.spec.is_commutative:
        db_ = _per_coordinate_bounds(family, None, tol)
        da_ = _per_coordinate_bounds(lifted, None, tol)
        record("star-g", not db_.witnesses, not da_.witnesses,
               (list(db_.lowers), list(da_.lowers)), (list(db_.uppers), list(da_.uppers)))

    if k is not None:
        kb = check_k_g_frame(family, k, tol)
        ka = check_k_g_frame(lifted, k, tol)
        lb = kb.bounds.lower if kb.passed else 0.0
        la = ka.bounds.lower if ka.passed else 0.0
        ub = kb.bounds.upper if kb.passed else 0.0
        ua = ka.bounds.upper if ka.passed else 0.0
        # the bisection lower constant is only pinned to its own width
        dev_ok = abs(ub - ua) <= 1e-10 * max(1.0, ub) and \
            abs(lb - la) <= max(1e-9, 2e-6 * max(lb, la, 1.0))
        flavor_checks.append({
            "flavor": "k-g",
            "verdict_match": kb.passed == ka.passed,
            "max_bound_dev": max(abs(lb - la), abs(ub - ua)),
            "match": kb.passed == ka.passed and dev_ok,
        })
        if family.domain.spec.is_commutative:
            skb = _per_coordinate_bounds(family, k, tol)
            ska = _per_coordinate_bounds(lifted, k, tol)
            up_dev = max(abs(a - b) for a, b in zip(skb.uppers, ska.uppers))
            low_dev = max(abs(a - b) for a, b in zip(skb.lowers, ska.lowers))
            ok = (bool(skb.witnesses) == bool(ska.witnesses)
                  and up_dev <= 1e-10 * max(1.0, float(np.max(skb.uppers)))
                  and low_dev <= max(1e-9, 2e-6 * float(np.max(skb.lowers))))
            flavor_checks.append({
                "flavor": "star-k-g",
                "verdict_match": bool(skb.witnesses) == bool(ska.witnesses),
                "max_bound_dev": max(low_dev, up_dev),
                "match": ok,
            })

    passed = exact and all(f["match"] for f in flavor_checks)
    cert = ConstructionCertificate(
        construction="direct-sum-lift",
        predicted=g_before.bounds,
        input_report=g_before,
        output_report=g_after,
        passed=passed,
        detail=f"frame_operator_dev={frame_op_dev:.3e}",
        flavor_checks=tuple(flavor_checks),
    )
    return lifted, cert


def parseval_k_from_family(family: OperatorFamily, tol: float = DEFAULT_TOL,
                           samples: int = 50, seed: int = 0,
                           ) -> tuple[AdjointableOp, ConstructionCertificate]:
    """K as the positive square root of the frame operator.

    The resulting K-frame is Parseval: <TK, TK> equals the middle sum
    for every operator T, which the certificate verifies on samples.
    """
    from .analysis import _middle_operator
    from .generators import random_operator
    from .operators import operator_sqrt

    for m in family.members:
        if not m.is_endomorphism:
            raise ShapeMismatch("this construction needs an endomorphism family")
    s = frame_operator(family.members)
    k = operator_sqrt(s, tol)

    s_mat = realize(s)
    kk_mat = realize(compose(k, adjoint(k)))
    identity_rel_err = float(np.linalg.norm(kk_mat - s_mat, 2)
                             / max(np.linalg.norm(s_mat, 2), np.finfo(float).tiny))

    rng = np.random.default_rng(seed)
    sampled_dev = 0.0
    for _ in range(samples):
        t = random_operator(rng, family.domain, family.domain)
        tk = compose(t, k)
        lhs = realize(compose(tk, adjoint(tk)))
        rhs = realize(_middle_operator(family, t))
        sampled_dev = max(sampled_dev,
                          float(np.linalg.norm(lhs - rhs, 2) / max(1.0, np.linalg.norm(rhs, 2))))

    output = check_k_end_frame(family, k, tol, samples=max(1, samples // 5), seed=seed + 1)
    parseval_ok = output.passed and output.tight and output.bounds is not None \
        and abs(output.bounds.lower - 1.0) <= 1e-8
    passed = identity_rel_err <= 1e-9 and sampled_dev <= 1e-9 and parseval_ok
    cert = ConstructionCertificate(
        construction="parseval-k",
        predicted=ScalarBounds(1.0, 1.0),
        input_report=None,
        output_report=output,
        passed=passed,
        detail=f"kk_vs_frame_op_rel_err={identity_rel_err:.3e} sampled_dev={sampled_dev:.3e}",
    )
    return k, cert


def _require_endomorphism(k: AdjointableOp, space: ModuleSpace):
    if not (k.is_endomorphism and k.domain == space):
        raise ShapeMismatch("K must be an endomorphism of the family's domain")


def _upper_ok(family: OperatorFamily, bound: float, tol: float) -> bool:
    _, lam_max = _lambda_extremes(family)
    return lam_max <= bound + tol * max(1.0, bound)


def k_frame_from_frame(family: OperatorFamily, k: AdjointableOp,
                       tol: float = DEFAULT_TOL, samples: int = 25,
                       seed: int = 0) -> tuple[OperatorFamily, ConstructionCertificate]:
    """From a plain end-frame (A, B) build {T_i o K*}, a K-frame with (A, B||K||^2)."""
    _require_endomorphism(k, family.domain)
    input_report = check_end_frame(family, tol, samples=samples, seed=seed)
    if not input_report.passed:
        raise NotAFrame("input family fails the end-frame check")
    a, b = input_report.bounds.lower, input_report.bounds.upper

    new_family = OperatorFamily(tuple(compose(t, adjoint(k)) for t in family.members))
    predicted = ScalarBounds(a, b * op_norm(k) ** 2)

    s_new = frame_operator(new_family.members)
    kk = compose(k, adjoint(k))
    lower_ok = _psd_leq_mats(a * realize(kk), realize(s_new), tol)
    upper_ok = _upper_ok(new_family, predicted.upper, tol)
    output = check_k_end_frame(new_family, k, tol, samples=samples, seed=seed + 1)
    cert = ConstructionCertificate(
        construction="k-frame-from-frame",
        predicted=predicted,
        input_report=input_report,
        output_report=output,
        passed=lower_ok and upper_ok and output.passed,
    )
    return new_family, cert


def k2k1_frame(family: OperatorFamily, k1: AdjointableOp, k2: AdjointableOp,
               tol: float = DEFAULT_TOL, samples: int = 25,
               seed: int = 0) -> tuple[OperatorFamily, ConstructionCertificate]:
    """From a K1-frame build {T_i o K2*}, a (K2 o K1)-frame with (A, B||K2||^2)."""
    _require_endomorphism(k1, family.domain)
    _require_endomorphism(k2, family.domain)
    input_report = check_k_end_frame(family, k1, tol, samples=samples, seed=seed)
    if not input_report.passed:
        raise NotAFrame("input family fails the K-frame check")
    a, b = input_report.bounds.lower, input_report.bounds.upper

    new_family = OperatorFamily(tuple(compose(t, adjoint(k2)) for t in family.members))
    k_new = compose(k2, k1)
    predicted = ScalarBounds(a, b * op_norm(k2) ** 2)

    s_new = frame_operator(new_family.members)
    kk_new = compose(k_new, adjoint(k_new))
    lower_ok = _psd_leq_mats(a * realize(kk_new), realize(s_new), tol)
    upper_ok = _upper_ok(new_family, predicted.upper, tol)
    output = check_k_end_frame(new_family, k_new, tol, samples=samples, seed=seed + 1)
    cert = ConstructionCertificate(
        construction="k2k1",
        predicted=predicted,
        input_report=input_report,
        output_report=output,
        passed=lower_ok and upper_ok and output.passed,
    )
    return new_family, cert


def power_k_frame(family: OperatorFamily, k: AdjointableOp, n: int,
                  tol: float = DEFAULT_TOL, samples: int = 25,
                  seed: int = 0) -> tuple[OperatorFamily, ConstructionCertificate]:
    """N-fold chaining: {T_i o (K*)^N} is a K^(N+1)-frame with (A, B||K||^(2N))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _require_endomorphism(k, family.domain)
    current = family
    k_acc = k
    input_report = check_k_end_frame(family, k, tol, samples=samples, seed=seed)
    if not input_report.passed:
        raise NotAFrame("input family fails the K-frame check")
    a, b = input_report.bounds.lower, input_report.bounds.upper
    last_cert: ConstructionCertificate | None = None
    for step in range(n):
        current, last_cert = k2k1_frame(current, k_acc, k, tol, samples, seed + step)
        k_acc = compose(k, k_acc)
    predicted = ScalarBounds(a, b * op_norm(k) ** (2 * n))
    if n == 0:
        output = input_report
        passed = input_report.passed
    else:
        output = last_cert.output_report
        passed = last_cert.passed
    cert = ConstructionCertificate(
        construction="power-k",
        predicted=predicted,
        input_report=input_report,
        output_report=output,
        passed=passed,
        detail=f"n={n}",
    )
    return current, cert


def surjective_demotion(family: OperatorFamily, k: AdjointableOp,
                        tol: float = DEFAULT_TOL, samples: int = 25,
                        seed: int = 0) -> ConstructionCertificate:
    """A K-frame for surjective K is a plain end-frame with lower A*sigma_min(K)^2."""
    _require_endomorphism(k, family.domain)
    surj = surjectivity_certificate(k)
    if not surj.injective_closed_range:
        raise NotSurjective("K fails the surjectivity rank test")
    input_report = check_k_end_frame(family, k, tol, samples=samples, seed=seed)
    if not input_report.passed:
        raise NotAFrame("input family fails the K-frame check")
    a, b = input_report.bounds.lower, input_report.bounds.upper
    predicted = ScalarBounds(a * surj.sigma_min ** 2, b)

    s = frame_operator(family.members)
    lower_ok = _psd_leq_mats(predicted.lower * realize(identity_op(family.domain)),
                             realize(s), tol)
    upper_ok = _upper_ok(family, predicted.upper, tol)
    output = check_end_frame(family, tol, samples=samples, seed=seed + 1)
    return ConstructionCertificate(
        construction="surjective-demotion",
        predicted=predicted,
        input_report=input_report,
        output_report=output,
        passed=lower_ok and upper_ok and output.passed,
    )


def frame_from_injective(ops, tol: float = DEFAULT_TOL, samples: int = 25,
                         seed: int = 0) -> tuple[OperatorFamily, ConstructionCertificate]:
    """Family of injective closed-range operators as an end-frame.

    The certificate records lower = sum sigma_min(T_i)^2 and
    upper = sum ||T_i||^2 and confirms they sandwich the frame operator.
    """
    ops = list(ops)
    certs = []
    for idx, t in enumerate(ops):
        c = injectivity_certificate(t)
        if not c.injective_closed_range:
            raise NotInjectiveClosedRange(idx)
        certs.append(c)
    family = OperatorFamily(tuple(ops))
    lower = float(sum(c.lower for c in certs))
    upper = float(sum(c.upper for c in certs))
    predicted = ScalarBounds(lower, upper)

    s = frame_operator(family.members)
    lam_min, lam_max = _lambda_extremes(family)
    ident = identity_op(family.domain)
    lower_ok = is_psd_order(scale(ident, lower), s, tol) and lower <= lam_min + tol
    upper_ok = is_psd_order(s, scale(ident, upper), tol) and lam_max <= upper + tol
    output = check_end_frame(family, tol, samples=samples, seed=seed)
    cert = ConstructionCertificate(
        construction="frame-from-injective",
        predicted=predicted,
        input_report=None,
        output_report=output,
        passed=lower_ok and upper_ok and output.passed,
        detail=f"lambda_min={lam_min:.6e} lambda_max={lam_max:.6e}",
    )
    return family, cert
