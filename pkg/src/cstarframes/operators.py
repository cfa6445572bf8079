"""Adjointable operators between free Hilbert modules.

An operator from A^{d_in} to A^{d_out} is a d_in x d_out matrix of
algebra elements acting by (Tx)_j = sum_i x_i * M[i][j]; multiplying the
entries on the right makes the action commute with the module action.

Every spectral question is answered through the complex realization:
the operator's action on the flattened coordinate space, built per entry
and block as kron(I_n, m.T).  With this convention the realization of
the adjoint is exactly the conjugate transpose of the realization, so
frame inequalities reduce to ordinary Hermitian linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraElement, involution
from .errors import (
    EmptyFamily,
    NotPositive,
    NotSelfAdjoint,
    ShapeMismatch,
    SpaceMismatch,
)
from .modules import ModuleSpace, ModuleVector, flatten, unflatten

RANK_RTOL = 1e-8  # singular values above RANK_RTOL * sigma_max count as nonzero


@dataclass(frozen=True)
class AdjointableOp:
    """Module map A^{d_in} -> A^{d_out} with entries acting on the right."""

    domain: ModuleSpace
    codomain: ModuleSpace
    entries: tuple[tuple[AlgebraElement, ...], ...]

    def __post_init__(self):
        if self.domain.spec != self.codomain.spec:
            raise SpaceMismatch("domain and codomain must share one algebra")
        rows = tuple(tuple(row) for row in self.entries)
        if len(rows) != self.domain.rank:
            raise ValueError("entry matrix must have one row per domain coordinate")
        for row in rows:
            if len(row) != self.codomain.rank:
                raise ValueError("entry matrix must have one column per codomain coordinate")
            for e in row:
                if e.spec != self.domain.spec:
                    raise ValueError("entry algebra does not match the spaces")
        object.__setattr__(self, "entries", rows)

    @property
    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain


def identity_op(space: ModuleSpace) -> AdjointableOp:
    one, zero = space.spec.identity(), space.spec.zero()
    rows = tuple(tuple(one if i == j else zero for j in range(space.rank))
                 for i in range(space.rank))
    return AdjointableOp(space, space, rows)


def zero_op(domain: ModuleSpace, codomain: ModuleSpace) -> AdjointableOp:
    zero = domain.spec.zero()
    rows = tuple(tuple(zero for _ in range(codomain.rank)) for _ in range(domain.rank))
    return AdjointableOp(domain, codomain, rows)


def apply(t: AdjointableOp, x: ModuleVector) -> ModuleVector:
    if x.space != t.domain:
        raise SpaceMismatch("vector is not in the operator's domain")
    coords = []
    for j in range(t.codomain.rank):
        acc = x.coords[0] * t.entries[0][j]
        for i in range(1, t.domain.rank):
            acc = acc + x.coords[i] * t.entries[i][j]
        coords.append(acc)
    return ModuleVector(t.codomain, tuple(coords))


def adjoint(t: AdjointableOp) -> AdjointableOp:
    """Entrywise involution plus transpose; satisfies <Tx,y> = <x,T*y>."""
    rows = tuple(tuple(involution(t.entries[i][j]) for i in range(t.domain.rank))
                 for j in range(t.codomain.rank))
    return AdjointableOp(t.codomain, t.domain, rows)


def compose(s: AdjointableOp, t: AdjointableOp) -> AdjointableOp:
    """s after t: compose(s, t)(x) = s(t(x))."""
    if t.codomain != s.domain:
        raise ShapeMismatch("inner spaces do not match")
    rows = []
    for i in range(t.domain.rank):
        row = []
        for k in range(s.codomain.rank):
            acc = t.entries[i][0] * s.entries[0][k]
            for j in range(1, s.domain.rank):
                acc = acc + t.entries[i][j] * s.entries[j][k]
            row.append(acc)
        rows.append(tuple(row))
    return AdjointableOp(t.domain, s.codomain, tuple(rows))


def _check_same_shape(s: AdjointableOp, t: AdjointableOp):
    if s.domain != t.domain or s.codomain != t.codomain:
        raise ShapeMismatch("operators have different domain or codomain")


def add(s: AdjointableOp, t: AdjointableOp) -> AdjointableOp:
    _check_same_shape(s, t)
    rows = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(s.entries, t.entries))
    return AdjointableOp(s.domain, s.codomain, rows)


def subtract(s: AdjointableOp, t: AdjointableOp) -> AdjointableOp:
    _check_same_shape(s, t)
    rows = tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(s.entries, t.entries))
    return AdjointableOp(s.domain, s.codomain, rows)


def scale(t: AdjointableOp, factor: complex) -> AdjointableOp:
    rows = tuple(tuple(e.scaled(factor) for e in row) for row in t.entries)
    return AdjointableOp(t.domain, t.codomain, rows)


def rank_one(x: ModuleVector) -> AdjointableOp:
    """The map z -> <z, x> from x's space into A^1."""
    target = ModuleSpace(x.space.spec, 1)
    rows = tuple((involution(c),) for c in x.coords)
    return AdjointableOp(x.space, target, rows)


def outer(y: ModuleVector, x: ModuleVector) -> AdjointableOp:
    """The map z -> <z, x> . y; adjoint is outer(x, y)."""
    if y.space.spec != x.space.spec:
        raise SpaceMismatch("vectors live over different algebras")
    rows = tuple(tuple(involution(xk) * yj for yj in y.coords) for xk in x.coords)
    return AdjointableOp(x.space, y.space, rows)


# ---------------------------------------------------------------------------
# Complex realization


def _element_realization(a: AlgebraElement) -> np.ndarray:
    mats = [np.kron(np.eye(n, dtype=complex), b.T)
            for n, b in zip(a.spec.block_sizes, a.blocks)]
    size = a.spec.flat_dim
    out = np.zeros((size, size), dtype=complex)
    pos = 0
    for m in mats:
        k = m.shape[0]
        out[pos:pos + k, pos:pos + k] = m
        pos += k
    return out


def realize(t: AdjointableOp) -> np.ndarray:
    """Matrix of t acting on flattened coordinates.

    realize(compose(s, t)) = realize(s) @ realize(t), and
    realize(adjoint(t)) equals realize(t).conj().T exactly.
    """
    n = t.domain.spec.flat_dim
    out = np.zeros((t.codomain.rank * n, t.domain.rank * n), dtype=complex)
    for i in range(t.domain.rank):
        for j in range(t.codomain.rank):
            out[j * n:(j + 1) * n, i * n:(i + 1) * n] = _element_realization(t.entries[i][j])
    return out


def op_from_realization(matrix: np.ndarray, domain: ModuleSpace,
                        codomain: ModuleSpace) -> AdjointableOp:
    """Recover the operator whose realization is the given matrix.

    Only valid for matrices in the image of realize (e.g. produced by
    functional calculus of realized operators); entries are read off by
    applying the matrix to the unit vectors of the domain.
    """
    matrix = np.asarray(matrix, dtype=complex)
    expected = (codomain.flat_dim, domain.flat_dim)
    if matrix.shape != expected:
        raise ShapeMismatch(f"expected realization of shape {expected}, got {matrix.shape}")
    rows = []
    for i in range(domain.rank):
        image = unflatten(codomain, matrix @ flatten(domain.unit(i)))
        rows.append(tuple(image.coords))
    return AdjointableOp(domain, codomain, tuple(rows))


# ---------------------------------------------------------------------------
# Spectral operations

def op_norm(t: AdjointableOp) -> float:
    """Largest singular value of the realization."""
    return float(np.linalg.norm(realize(t), 2))


def frame_operator(members: Sequence[AdjointableOp]) -> AdjointableOp:
    """S = sum_i adjoint(T_i) o T_i, summed in index order."""
    members = list(members)
    if not members:
        raise EmptyFamily("frame operator of an empty family")
    domain = members[0].domain
    for m in members[1:]:
        if m.domain != domain:
            raise SpaceMismatch("family members must share one domain")
    acc = compose(adjoint(members[0]), members[0])
    for m in members[1:]:
        acc = add(acc, compose(adjoint(m), m))
    return acc


def _hermitian_part(r: np.ndarray, tol: float) -> np.ndarray:
    dev = float(np.max(np.abs(r - r.conj().T))) if r.size else 0.0
    if dev > max(tol, tol * np.linalg.norm(r, ord=np.inf)):
        raise NotSelfAdjoint(f"realization deviates from self-adjoint by {dev:.3e}")
    return (r + r.conj().T) / 2


def is_psd_order(p: AdjointableOp, q: AdjointableOp, tol: float = DEFAULT_TOL) -> bool:
    """Loewner order test p <= q for self-adjoint endomorphisms of one space."""
    ok, _, _ = psd_order_witness(p, q, tol)
    return ok


def psd_order_witness(p: AdjointableOp, q: AdjointableOp,
                      tol: float = DEFAULT_TOL) -> tuple[bool, float, np.ndarray]:
    """As is_psd_order, also returning the smallest eigenvalue and its vector."""
    if not (p.is_endomorphism and q.is_endomorphism and p.domain == q.domain):
        raise ShapeMismatch("PSD order needs endomorphisms of one space")
    diff = _hermitian_part(realize(q) - realize(p), tol)
    w, v = np.linalg.eigh(diff)
    return bool(w[0] >= -tol), float(w[0]), v[:, 0]


def operator_sqrt(s: AdjointableOp, tol: float = DEFAULT_TOL) -> AdjointableOp:
    """Positive square root of a positive self-adjoint endomorphism."""
    if not s.is_endomorphism:
        raise ShapeMismatch("square root needs an endomorphism")
    r = _hermitian_part(realize(s), tol)
    w, q = np.linalg.eigh(r)
    if w[0] < -max(tol, tol * max(1.0, float(w[-1]))):
        raise NotPositive(f"operator has eigenvalue {w[0]:.3e} below zero")
    root = (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T
    return op_from_realization((root + root.conj().T) / 2, s.domain, s.codomain)


@dataclass(frozen=True)
class InjectivityCertificate:
    """Rank test plus the two-sided Gram sandwich constants.

    For an injective closed-range T the constants satisfy
    lower * I <= adjoint(T) o T <= upper * I with lower = sigma_min^2
    and upper = sigma_max^2 = ||T||^2.
    """

    injective_closed_range: bool
    lower: float
    upper: float
    sigma_min: float
    sigma_max: float


def injectivity_certificate(t: AdjointableOp, rank_rtol: float = RANK_RTOL) -> InjectivityCertificate:
    svals = np.linalg.svd(realize(t), compute_uv=False)
    sigma_max = float(svals[0]) if svals.size else 0.0
    sigma_min = float(svals[-1]) if svals.size else 0.0
    full_rank = realize(t).shape[1] <= realize(t).shape[0]
    injective = full_rank and sigma_max > 0 and sigma_min > rank_rtol * sigma_max
    return InjectivityCertificate(
        injective_closed_range=injective,
        lower=sigma_min ** 2,
        upper=sigma_max ** 2,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
    )


def surjectivity_certificate(t: AdjointableOp, rank_rtol: float = RANK_RTOL) -> InjectivityCertificate:
    """Rank test for surjectivity: the same routine applied to the adjoint."""
    return injectivity_certificate(adjoint(t), rank_rtol)


def module_action_op(a: AlgebraElement, space: ModuleSpace) -> AdjointableOp:
    """x -> a . x as an operator.  Adjointable only over commutative algebras."""
    from .errors import NotCommutative

    if a.spec != space.spec:
        raise SpaceMismatch("element and space live over different algebras")
    if not space.spec.is_commutative:
        raise NotCommutative("left multiplication is adjointable only when the algebra is commutative")
    zero = space.spec.zero()
    rows = tuple(tuple(a if i == j else zero for j in range(space.rank))
                 for i in range(space.rank))
    return AdjointableOp(space, space, rows)


def op_inner_product(t: AdjointableOp, s: AdjointableOp) -> AdjointableOp:
    """Inner product on the operator module: <T, S> = T o adjoint(S)."""
    if t.domain != s.domain or t.codomain != s.codomain:
        raise ShapeMismatch("operator inner product needs matching shapes")
    return compose(t, adjoint(s))
