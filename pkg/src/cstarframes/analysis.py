"""Frame condition checkers and optimal / certified bound computation.

Scalar frame bounds are the spectral extremes of the realized frame
operator.  K-flavored lower bounds come from a PSD bisection against the
realized K K* probe.  Over commutative algebras the problem splits into
one independent scalar frame problem per diagonal coordinate, which is
what the algebra-valued (starred) checkers exploit.  Operator-module
(end) checkers certify through the vector-side route and cross-validate
the operator-side inequality on sampled operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraElement,
    involution,
    norm as alg_norm,
    positive_sqrt,
    is_positive,
)
from .errors import (
    EmptyFamily,
    NotCommutative,
    ShapeMismatch,
    SpaceMismatch,
)
from .generators import random_operator
from .modules import (
    ModuleSpace,
    ModuleVector,
    inner_product,
    unflatten,
)
from .operators import (
    AdjointableOp,
    add,
    adjoint,
    apply,
    compose,
    frame_operator,
    is_psd_order,
    module_action_op,
    op_inner_product,
    outer,
    rank_one,
    realize,
    scale,
)

TIGHT_RTOL = 1e-8
BISECT_REL_WIDTH = 1e-6
BISECT_MAX_ITER = 60


# ---------------------------------------------------------------------------
# Families, bounds, reports


@dataclass(frozen=True)
class OperatorFamily:
    """Finite indexed family of operators sharing one domain."""

    members: tuple[AdjointableOp, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise EmptyFamily("an operator family needs at least one member")
        domain = members[0].domain
        for m in members[1:]:
            if m.domain != domain:
                raise SpaceMismatch("family members must share one domain")
        object.__setattr__(self, "members", members)

    @property
    def domain(self) -> ModuleSpace:
        return self.members[0].domain

    def common_codomain(self) -> ModuleSpace:
        cod = self.members[0].codomain
        for m in self.members[1:]:
            if m.codomain != cod:
                raise SpaceMismatch("this check needs members with one common codomain")
        return cod


@dataclass(frozen=True)
class VectorFamily:
    """Finite family of module vectors in one space."""

    members: tuple[ModuleVector, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise EmptyFamily("a vector family needs at least one member")
        space = members[0].space
        for m in members[1:]:
            if m.space != space:
                raise SpaceMismatch("family members must share one space")
        object.__setattr__(self, "members", members)

    @property
    def space(self) -> ModuleSpace:
        return self.members[0].space

    def as_operator_family(self) -> OperatorFamily:
        """Rank-one conversion: x_i becomes the map z -> <z, x_i> into A^1."""
        return OperatorFamily(tuple(rank_one(x) for x in self.members))


@dataclass(frozen=True)
class ScalarBounds:
    lower: float
    upper: float


@dataclass(frozen=True)
class AlgebraBounds:
    lower: AlgebraElement
    upper: AlgebraElement


@dataclass(frozen=True)
class Witness:
    side: str  # "lower" or "upper"
    vector: ModuleVector | None = None
    operator: AdjointableOp | None = None
    rayleigh: float | None = None
    scaling: float | None = None  # probe scaling at which the violation was seen


@dataclass(frozen=True)
class FrameReport:
    kind: str
    passed: bool
    bounds: ScalarBounds | AlgebraBounds | None = None
    tight: bool = False
    parseval: bool = False
    certified: bool = True
    witness: Witness | None = None
    detail: str | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def _scalar_flags(c: float, d: float) -> tuple[bool, bool]:
    tight = abs(d - c) <= TIGHT_RTOL * max(1.0, d)
    parseval = tight and abs(c - 1.0) <= TIGHT_RTOL and abs(d - 1.0) <= TIGHT_RTOL
    return tight, parseval


def _element_flags(lower: AlgebraElement, upper: AlgebraElement) -> tuple[bool, bool]:
    du = alg_norm(upper)
    tight = alg_norm(upper - lower) <= TIGHT_RTOL * max(1.0, du)
    one = lower.spec.identity()
    parseval = (tight and alg_norm(lower - one) <= TIGHT_RTOL
                and alg_norm(upper - one) <= TIGHT_RTOL)
    return tight, parseval


# ---------------------------------------------------------------------------
# Scalar (g-frame) route


def _hermitian(r: np.ndarray) -> np.ndarray:
    return (r + r.conj().T) / 2


def check_g_frame(family: OperatorFamily, tol: float = DEFAULT_TOL) -> FrameReport:
    """Optimal scalar bounds from the spectrum of the realized frame operator."""
    s = frame_operator(family.members)
    w, v = np.linalg.eigh(_hermitian(realize(s)))
    c, d = float(w[0]), float(w[-1])
    if c > tol:
        tight, parseval = _scalar_flags(c, d)
        return FrameReport("g-frame", True, ScalarBounds(c, d), tight, parseval)
    witness = Witness("lower", vector=unflatten(family.domain, v[:, 0]), rayleigh=c)
    return FrameReport("g-frame", False, None, witness=witness,
                       detail=f"lambda_min={c:.6e} lambda_max={d:.6e}")


def check_vector_frame(family: VectorFamily, tol: float = DEFAULT_TOL) -> FrameReport:
    """Scalar frame bounds for a vector family via its rank-one operators."""
    report = check_g_frame(family.as_operator_family(), tol)
    return FrameReport("vector-frame", report.passed, report.bounds, report.tight,
                       report.parseval, report.certified, report.witness, report.detail)


# ---------------------------------------------------------------------------
# K-lower-bound bisection


@dataclass
class _BisectionResult:
    value: float
    tight: bool
    witness_vec: np.ndarray | None
    witness_at: float | None
    degenerate: bool = False


def _sup_scaling_psd(s_mat: np.ndarray, kk_mat: np.ndarray, tol: float) -> _BisectionResult:
    """sup{c >= 0 : s - c*kk stays PSD within tol}, by bisection.

    kk must be Hermitian PSD.  The witness vector is the most negative
    eigendirection of the last indefinite probe.  A norm-ratio candidate
    is tried afterwards so exact-proportionality (tight) cases are
    reported at full precision instead of bisection precision.
    """
    s_mat = _hermitian(s_mat)
    kk_mat = _hermitian(kk_mat)
    ev_k = np.linalg.eigvalsh(kk_mat)
    k_max = float(ev_k[-1]) if ev_k.size else 0.0
    if k_max <= np.finfo(float).tiny:
        return _BisectionResult(0.0, False, None, None, degenerate=True)
    positive = ev_k[ev_k > 1e-8 * k_max]
    k_min_pos = float(positive[0])
    w_s, v_s = np.linalg.eigh(s_mat)
    s_top = max(float(w_s[-1]), 0.0)

    # structural zero: a near-kernel direction of s that carries kk energy
    # caps the sup at zero no matter the probe slack
    kernel_cols = v_s[:, w_s <= 1e-8 * max(s_top, np.finfo(float).tiny)]
    if kernel_cols.size:
        energy = np.real(np.sum(kernel_cols.conj() * (kk_mat @ kernel_cols), axis=0))
        if float(np.max(energy)) > 1e-8 * k_max:
            where, wvec = _harvest_violation(s_mat, kk_mat, 2 * tol, tol)
            return _BisectionResult(0.0, False, wvec, where)

    hi0 = s_top / max(k_min_pos, np.finfo(float).tiny)

    def probe(c: float) -> tuple[bool, np.ndarray]:
        # slack scales with the operand norms: spectral noise does too
        w, vec = np.linalg.eigh(s_mat - c * kk_mat)
        return bool(w[0] >= -tol * max(1.0, s_top, c * k_max)), vec[:, 0]

    witness_vec = None
    witness_at = None
    if hi0 <= 0.0:
        value = 0.0
    else:
        ok_hi, vec_hi = probe(hi0)
        if ok_hi:
            value = hi0
        else:
            lo, hi = 0.0, hi0
            witness_vec, witness_at = vec_hi, hi0
            for _ in range(BISECT_MAX_ITER):
                # width relative to the current bracket: hi0 can exceed the
                # sup by many orders when the probe pencil is ill-conditioned
                if hi - lo <= BISECT_REL_WIDTH * max(hi, np.finfo(float).tiny):
                    break
                mid = (lo + hi) / 2
                ok, vec = probe(mid)
                if ok:
                    lo = mid
                else:
                    hi, witness_vec, witness_at = mid, vec, mid
            value = lo

    # norm-ratio polish for the proportional (tight) case
    s_norm = float(np.linalg.norm(s_mat, 2))
    ratio = s_norm / float(np.linalg.norm(kk_mat, 2))
    tight = False
    if np.linalg.norm(s_mat - ratio * kk_mat, 2) <= tol:
        value = max(value, ratio)
        tight = True
    elif np.linalg.norm(s_mat - value * kk_mat, 2) <= tol:
        tight = True
    return _BisectionResult(value, tight, witness_vec, witness_at)


def _harvest_violation(s_mat: np.ndarray, kk_mat: np.ndarray, start: float,
                       tol: float) -> tuple[float, np.ndarray]:
    """Find a scaling at which s - c*kk is decisively indefinite; (c, eigvec)."""
    s_top = float(np.linalg.norm(s_mat, 2))
    k_top = float(np.linalg.norm(kk_mat, 2))
    c = max(start, 2 * tol)
    for _ in range(BISECT_MAX_ITER):
        w, vec = np.linalg.eigh(_hermitian(s_mat) - c * _hermitian(kk_mat))
        if w[0] < -tol * max(1.0, s_top, c * k_top):
            return c, vec[:, 0]
        c *= 4.0
    return c, vec[:, 0]


def check_k_g_frame(family: OperatorFamily, k: AdjointableOp,
                    tol: float = DEFAULT_TOL) -> FrameReport:
    """Lower bound against <K*x, K*x> by bisection, upper by eigenvalue."""
    if not (k.is_endomorphism and k.domain == family.domain):
        raise ShapeMismatch("K must be an endomorphism of the family's domain")
    s_mat = _hermitian(realize(frame_operator(family.members)))
    k_mat = realize(k)
    kk_mat = k_mat @ k_mat.conj().T
    d = float(np.linalg.eigvalsh(s_mat)[-1])
    result = _sup_scaling_psd(s_mat, kk_mat, tol)
    if result.degenerate:
        return FrameReport("k-g-frame", False, None, certified=True,
                           detail="degenerate: K is zero, excluded from the K-frame notion")
    if result.value > tol:
        return FrameReport("k-g-frame", True, ScalarBounds(result.value, d),
                           tight=result.tight)
    if result.witness_vec is None:
        where, vec = _harvest_violation(s_mat, kk_mat, 2 * result.value, tol)
    else:
        where, vec = result.witness_at, result.witness_vec
    witness = Witness("lower", vector=unflatten(family.domain, vec),
                      rayleigh=result.value, scaling=where)
    return FrameReport("k-g-frame", False, None, witness=witness,
                       detail=f"lower_sup={result.value:.6e} probe_failed_at={where:.6e}")


# ---------------------------------------------------------------------------
# Commutative per-coordinate decomposition


def _require_commutative(space: ModuleSpace):
    if not space.spec.is_commutative:
        raise NotCommutative("algebra-valued bounds are certified only over commutative algebras")


def _coordinate_indices(space: ModuleSpace) -> list[np.ndarray]:
    m = len(space.spec.block_sizes)
    return [np.arange(space.rank) * m + c for c in range(m)]


def _slice_vector(space: ModuleSpace, c: int, values: np.ndarray) -> ModuleVector:
    m = len(space.spec.block_sizes)
    coords = []
    for k in range(space.rank):
        entries = [0.0] * m
        entries[c] = complex(values[k])
        coords.append(space.spec.diagonal(entries))
    return ModuleVector(space, tuple(coords))


@dataclass
class _CoordinateData:
    lowers: np.ndarray
    uppers: np.ndarray
    tights: list[bool]
    # (coordinate, eigvec, lower constant, probe scaling of the violation)
    witnesses: list[tuple[int, np.ndarray, float, float]] = field(default_factory=list)
    degenerate: bool = False


def _per_coordinate_bounds(family: OperatorFamily, k: AdjointableOp | None,
                           tol: float) -> _CoordinateData:
    space = family.domain
    _require_commutative(space)
    s_mat = _hermitian(realize(frame_operator(family.members)))
    k_slices = None
    if k is not None:
        if not (k.is_endomorphism and k.domain == space):
            raise ShapeMismatch("K must be an endomorphism of the family's domain")
        k_mat = realize(k)
        if float(np.linalg.norm(k_mat, 2)) ** 2 <= np.finfo(float).tiny:
            return _CoordinateData(np.array([]), np.array([]), [], degenerate=True)
        k_slices = k_mat
    indices = _coordinate_indices(space)
    lowers, uppers, tights, witnesses = [], [], [], []
    for c, idx in enumerate(indices):
        block = s_mat[np.ix_(idx, idx)]
        w, v = np.linalg.eigh(_hermitian(block))
        upper = float(w[-1])
        if k is None:
            lower = float(w[0])
            tights.append(abs(upper - lower) <= TIGHT_RTOL * max(1.0, upper))
            if lower <= tol:
                witnesses.append((c, v[:, 0], lower, 2 * tol))
        else:
            kb = k_slices[np.ix_(idx, idx)]
            kk = kb @ kb.conj().T
            if float(np.linalg.norm(kk, 2)) <= np.finfo(float).tiny:
                # K vanishes on this coordinate: the lower condition is vacuous
                lower, tights_c = 1.0, False
            else:
                res = _sup_scaling_psd(block, kk, tol)
                lower, tights_c = res.value, res.tight
                if lower <= tol:
                    if res.witness_vec is None:
                        where, vec = _harvest_violation(block, kk, 2 * lower, tol)
                    else:
                        where, vec = res.witness_at, res.witness_vec
                    witnesses.append((c, vec, lower, where))
            tights.append(tights_c)
        lowers.append(lower)
        uppers.append(upper)
    return _CoordinateData(np.array(lowers), np.array(uppers), tights, witnesses)


def _star_report(kind: str, family: OperatorFamily, data: _CoordinateData,
                 tol: float) -> FrameReport:
    space = family.domain
    if data.degenerate:
        return FrameReport(kind, False, None,
                           detail="degenerate: K is zero, excluded from the K-frame notion")
    if data.witnesses:
        c, vec, rayleigh, where = min(data.witnesses, key=lambda t: t[2])
        witness = Witness("lower", vector=_slice_vector(space, c, vec),
                          rayleigh=rayleigh, scaling=where)
        detail = "coordinate lower constants: " + ", ".join(f"{l:.3e}" for l in data.lowers)
        return FrameReport(kind, False, None, witness=witness, detail=detail)
    lower_elem = space.spec.diagonal(list(data.lowers))
    upper_elem = space.spec.diagonal(list(data.uppers))
    a = positive_sqrt(lower_elem, tol)
    b = positive_sqrt(upper_elem, tol)
    tight, parseval = _element_flags(lower_elem, upper_elem)
    return FrameReport(kind, True, AlgebraBounds(a, b), tight, parseval)


def check_star_frame_commutative(family: VectorFamily, tol: float = DEFAULT_TOL) -> FrameReport:
    """Algebra-valued bounds A, B with A <x,x> A* <= sum <x,x_i><x_i,x> <= B <x,x> B*."""
    data = _per_coordinate_bounds(family.as_operator_family(), None, tol)
    return _star_report("star-frame", family.as_operator_family(), data, tol)


def check_star_g_frame_commutative(family: OperatorFamily, tol: float = DEFAULT_TOL) -> FrameReport:
    data = _per_coordinate_bounds(family, None, tol)
    return _star_report("star-g-frame", family, data, tol)


def check_star_k_frame_commutative(family: VectorFamily, k: AdjointableOp,
                                   tol: float = DEFAULT_TOL) -> FrameReport:
    data = _per_coordinate_bounds(family.as_operator_family(), k, tol)
    return _star_report("star-k-frame", family.as_operator_family(), data, tol)


def check_star_k_g_frame_commutative(family: OperatorFamily, k: AdjointableOp,
                                     tol: float = DEFAULT_TOL) -> FrameReport:
    data = _per_coordinate_bounds(family, k, tol)
    return _star_report("star-k-g-frame", family, data, tol)


# ---------------------------------------------------------------------------
# Sampling-only falsification (any algebra, never a certificate)


def _middle_element(family: OperatorFamily | VectorFamily, x: ModuleVector) -> AlgebraElement:
    if isinstance(family, VectorFamily):
        acc = None
        for xi in family.members:
            g = inner_product(x, xi)
            term = g * involution(g)
            acc = term if acc is None else acc + term
        return acc
    acc = None
    for t in family.members:
        y = apply(t, x)
        term = inner_product(y, y)
        acc = term if acc is None else acc + term
    return acc


def check_star_sampled(family: OperatorFamily | VectorFamily,
                       lower: AlgebraElement, upper: AlgebraElement,
                       samples: int = 200, tol: float = DEFAULT_TOL,
                       seed: int = 0) -> FrameReport:
    """Random-vector falsification of the two-sided algebra-valued inequality.

    A pass means only that no counterexample was found among the sampled
    vectors; the report is marked non-certifying.
    """
    from .generators import random_vector

    space = family.space if isinstance(family, VectorFamily) else family.domain
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = random_vector(rng, space)
        gram = inner_product(x, x)
        mid = _middle_element(family, x)
        low_diff = mid - lower * gram * involution(lower)
        if not is_positive(low_diff, tol):
            witness = Witness("lower", vector=x)
            return FrameReport("star-sampled", False, AlgebraBounds(lower, upper),
                               certified=False, witness=witness,
                               detail="sampled counterexample to the lower inequality")
        up_diff = upper * gram * involution(upper) - mid
        if not is_positive(up_diff, tol):
            witness = Witness("upper", vector=x)
            return FrameReport("star-sampled", False, AlgebraBounds(lower, upper),
                               certified=False, witness=witness,
                               detail="sampled counterexample to the upper inequality")
    return FrameReport("star-sampled", True, AlgebraBounds(lower, upper),
                       certified=False,
                       detail=f"no counterexample in {samples} samples; not a certificate")


# ---------------------------------------------------------------------------
# Operator-module (end) checkers


def _middle_operator(family: OperatorFamily, t: AdjointableOp) -> AdjointableOp:
    """sum_i <T, T_i> o <T_i, T> with <T, S> = T o adjoint(S)."""
    acc = None
    for ti in family.members:
        term = compose(op_inner_product(t, ti), op_inner_product(ti, t))
        acc = term if acc is None else add(acc, term)
    return acc


def _psd_leq_mats(a_mat: np.ndarray, b_mat: np.ndarray, tol: float) -> bool:
    """a <= b in the PSD order, with slack scaled to the operand norms."""
    ref = max(1.0, float(np.linalg.norm(a_mat, 2)), float(np.linalg.norm(b_mat, 2)))
    diff = _hermitian(b_mat - a_mat)
    return bool(np.linalg.eigvalsh(diff)[0] >= -tol * ref)


def _psd_violation(lower_ref: AdjointableOp, mid: AdjointableOp, tol: float) -> bool:
    """True when the order lower_ref <= mid decisively fails."""
    a_mat, b_mat = realize(lower_ref), realize(mid)
    ref = max(1.0, float(np.linalg.norm(a_mat, 2)), float(np.linalg.norm(b_mat, 2)))
    diff = _hermitian(b_mat - a_mat)
    return bool(np.linalg.eigvalsh(diff)[0] < -0.5 * tol * ref)


def _sample_operators(rng: np.random.Generator, domain: ModuleSpace,
                      codomain: ModuleSpace, samples: int) -> list[AdjointableOp]:
    return [random_operator(rng, domain, codomain) for _ in range(samples)]


def _cross_validate_end(family: OperatorFamily, lower_ref, upper_ref,
                        sampled: Sequence[AdjointableOp], tol: float) -> tuple[bool, Witness | None]:
    """Check lower_ref(T) <= middle(T) <= upper_ref(T) on every sampled T."""
    for t in sampled:
        mid_mat = realize(_middle_operator(family, t))
        low = lower_ref(t)
        if low is not None and not _psd_leq_mats(realize(low), mid_mat, tol):
            return False, Witness("lower", operator=t)
        up = upper_ref(t)
        if up is not None and not _psd_leq_mats(mid_mat, realize(up), tol):
            return False, Witness("upper", operator=t)
    return True, None


def _fail_route_confirms(family: OperatorFamily, base_witness: ModuleVector,
                         lower_ref_for, tol: float) -> bool:
    """Inject the operator built from the failing vector and confirm violation."""
    cod = family.common_codomain()
    theta = outer(cod.unit(0), base_witness)
    mid = _middle_operator(family, theta)
    ref = lower_ref_for(theta)
    return _psd_violation(ref, mid, tol)


def check_end_frame(family: OperatorFamily, tol: float = DEFAULT_TOL,
                    samples: int = 50, seed: int = 0) -> FrameReport:
    """Frame condition on the operator module, certified via the scalar route.

    The certifying route is the spectrum of the frame operator; the
    sampled route re-tests A<T,T> <= sum <T,T_i><T_i,T> <= B<T,T> on
    random operators.  Both routes must agree.
    """
    cod = family.common_codomain()
    base = check_g_frame(family, tol)
    rng = np.random.default_rng(seed)
    if base.passed:
        c, d = base.bounds.lower, base.bounds.upper
        sampled = _sample_operators(rng, family.domain, cod, samples)
        agree, witness = _cross_validate_end(
            family,
            lambda t: scale(compose(t, adjoint(t)), c),
            lambda t: scale(compose(t, adjoint(t)), d),
            sampled, tol)
        if agree:
            return FrameReport("end-frame", True, base.bounds, base.tight, base.parseval)
        return FrameReport("end-frame", False, base.bounds, certified=False, witness=witness,
                           detail="dual-route disagreement: certified bounds failed on a sampled operator")
    confirmed = _fail_route_confirms(
        family, base.witness.vector,
        lambda th: scale(compose(th, adjoint(th)), max(2 * tol, 1e-12)),
        tol)
    detail = base.detail or ""
    if not confirmed:
        detail += "; warning: sampled route could not reproduce the violation"
    return FrameReport("end-frame", False, None, witness=base.witness, detail=detail)


def check_k_end_frame(family: OperatorFamily, k: AdjointableOp,
                      tol: float = DEFAULT_TOL, samples: int = 50,
                      seed: int = 0) -> FrameReport:
    """K-frame condition on the operator module, certified via the K-g route."""
    cod = family.common_codomain()
    base = check_k_g_frame(family, k, tol)
    if base.detail and base.detail.startswith("degenerate"):
        return FrameReport("k-end-frame", False, None, detail=base.detail)
    rng = np.random.default_rng(seed)
    if base.passed:
        c, d = base.bounds.lower, base.bounds.upper
        sampled = _sample_operators(rng, family.domain, cod, samples)

        def lower_ref(t):
            tk = compose(t, k)
            return scale(compose(tk, adjoint(tk)), c)

        agree, witness = _cross_validate_end(
            family, lower_ref,
            lambda t: scale(compose(t, adjoint(t)), d),
            sampled, tol)
        if agree:
            return FrameReport("k-end-frame", True, base.bounds, base.tight)
        return FrameReport("k-end-frame", False, base.bounds, certified=False, witness=witness,
                           detail="dual-route disagreement: certified bounds failed on a sampled operator")

    def lower_ref_for(theta):
        thk = compose(theta, k)
        at = base.witness.scaling if base.witness.scaling else 2 * tol
        return scale(compose(thk, adjoint(thk)), max(2 * tol, at))

    confirmed = _fail_route_confirms(family, base.witness.vector, lower_ref_for, tol)
    detail = base.detail or ""
    if not confirmed:
        detail += "; warning: sampled route could not reproduce the violation"
    return FrameReport("k-end-frame", False, None, witness=base.witness, detail=detail)


def _action_ref(element: AlgebraElement, space: ModuleSpace):
    act = module_action_op(element, space)

    def ref(t_t_star: AdjointableOp) -> AdjointableOp:
        return compose(act, t_t_star)

    return ref


def check_generalized_end_frame(family: OperatorFamily, tol: float = DEFAULT_TOL,
                                samples: int = 50, seed: int = 0) -> FrameReport:
    """Algebra-valued end-frame bounds over a commutative algebra.

    Certifies through the per-coordinate route and reports the strictly
    positive single-multiplication bounds; cross-validates the operator
    inequality with the bounds acting through the module action.
    """
    cod = family.common_codomain()
    data = _per_coordinate_bounds(family, None, tol)
    star = _star_report("generalized-end-frame", family, data, tol)
    rng = np.random.default_rng(seed)
    if star.passed:
        lower_elem = family.domain.spec.diagonal(list(data.lowers))
        upper_elem = family.domain.spec.diagonal(list(data.uppers))
        low_act = _action_ref(lower_elem, cod)
        up_act = _action_ref(upper_elem, cod)
        sampled = _sample_operators(rng, family.domain, cod, samples)
        agree, witness = _cross_validate_end(
            family,
            lambda t: low_act(compose(t, adjoint(t))),
            lambda t: up_act(compose(t, adjoint(t))),
            sampled, tol)
        if agree:
            tight, parseval = _element_flags(lower_elem, upper_elem)
            return FrameReport("generalized-end-frame", True,
                               AlgebraBounds(lower_elem, upper_elem), tight, parseval)
        return FrameReport("generalized-end-frame", False, None, certified=False,
                           witness=witness, detail="dual-route disagreement")
    if star.witness is None:
        return FrameReport("generalized-end-frame", False, None, detail=star.detail)
    confirmed = _fail_route_confirms(
        family, star.witness.vector,
        lambda th: scale(compose(th, adjoint(th)), 2 * tol),
        tol)
    detail = star.detail or ""
    if not confirmed:
        detail += "; warning: sampled route could not reproduce the violation"
    return FrameReport("generalized-end-frame", False, None, witness=star.witness, detail=detail)


def check_generalized_k_end_frame(family: OperatorFamily, k: AdjointableOp,
                                  tol: float = DEFAULT_TOL, samples: int = 50,
                                  seed: int = 0) -> FrameReport:
    """Algebra-valued K-frame bounds on the operator module (commutative case)."""
    cod = family.common_codomain()
    data = _per_coordinate_bounds(family, k, tol)
    star = _star_report("generalized-k-end-frame", family, data, tol)
    if data.degenerate:
        return FrameReport("generalized-k-end-frame", False, None, detail=star.detail)
    rng = np.random.default_rng(seed)
    if star.passed:
        lower_elem = family.domain.spec.diagonal(list(data.lowers))
        upper_elem = family.domain.spec.diagonal(list(data.uppers))
        low_act = _action_ref(lower_elem, cod)
        up_act = _action_ref(upper_elem, cod)
        sampled = _sample_operators(rng, family.domain, cod, samples)

        def lower_ref(t):
            tk = compose(t, k)
            return low_act(compose(tk, adjoint(tk)))

        agree, witness = _cross_validate_end(
            family, lower_ref,
            lambda t: up_act(compose(t, adjoint(t))),
            sampled, tol)
        if agree:
            tight, parseval = _element_flags(lower_elem, upper_elem)
            return FrameReport("generalized-k-end-frame", True,
                               AlgebraBounds(lower_elem, upper_elem), tight, parseval)
        return FrameReport("generalized-k-end-frame", False, None, certified=False,
                           witness=witness, detail="dual-route disagreement")
    if star.witness is None:
        return FrameReport("generalized-k-end-frame", False, None, detail=star.detail)

    def lower_ref_for(theta):
        thk = compose(theta, k)
        at = star.witness.scaling if star.witness.scaling else 2 * tol
        return scale(compose(thk, adjoint(thk)), max(2 * tol, at))

    confirmed = _fail_route_confirms(family, star.witness.vector, lower_ref_for, tol)
    detail = star.detail or ""
    if not confirmed:
        detail += "; warning: sampled route could not reproduce the violation"
    return FrameReport("generalized-k-end-frame", False, None, witness=star.witness, detail=detail)
