"""Seeded random builders for algebra elements, vectors, operators and families.

All functions take an explicit numpy Generator so identical seeds give
identical objects; nothing here reads global random state.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraSpec
from .modules import ModuleSpace, ModuleVector
from .operators import (
    AdjointableOp,
    adjoint,
    compose,
    op_from_realization,
    op_norm,
    realize,
    scale,
)


def random_complex(rng: np.random.Generator, shape, scale_: float = 1.0) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (scale_ / np.sqrt(2))


def random_element(rng: np.random.Generator, spec: AlgebraSpec,
                   scale_: float = 1.0, hermitian: bool = False) -> AlgebraElement:
    blocks = []
    for n in spec.block_sizes:
        b = random_complex(rng, (n, n), scale_)
        if hermitian:
            b = (b + b.conj().T) / 2
        blocks.append(b)
    return AlgebraElement(spec, tuple(blocks))


def random_psd_element(rng: np.random.Generator, spec: AlgebraSpec,
                       scale_: float = 1.0) -> AlgebraElement:
    g = random_element(rng, spec, scale_)
    return AlgebraElement(spec, tuple(b @ b.conj().T for b in g.blocks))


def random_vector(rng: np.random.Generator, space: ModuleSpace,
                  scale_: float = 1.0) -> ModuleVector:
    return ModuleVector(space, tuple(random_element(rng, space.spec, scale_)
                                     for _ in range(space.rank)))


def random_operator(rng: np.random.Generator, domain: ModuleSpace,
                    codomain: ModuleSpace | None = None,
                    scale_: float = 1.0) -> AdjointableOp:
    codomain = codomain or domain
    rows = tuple(tuple(random_element(rng, domain.spec, scale_)
                       for _ in range(codomain.rank))
                 for _ in range(domain.rank))
    return AdjointableOp(domain, codomain, rows)


def clamp_min_singular(t: AdjointableOp, floor: float) -> AdjointableOp:
    """Raise every singular value of t to at least floor.

    Works through functional calculus of adjoint(t) o t, so the result is
    again a module operator.  Requires a trivial kernel to begin with.
    """
    m = realize(t)
    w, q = np.linalg.eigh(_hermitianized(m.conj().T @ m))
    w = np.clip(w, np.finfo(float).tiny, None)
    g = np.maximum(np.sqrt(w), floor) / np.sqrt(w)
    gram_fn = (q * g) @ q.conj().T
    right = op_from_realization(gram_fn, t.domain, t.domain)
    return compose(t, right)


def _hermitianized(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def random_injective_operator(rng: np.random.Generator, domain: ModuleSpace,
                              codomain: ModuleSpace | None = None,
                              floor_ratio: float = 0.1,
                              scale_: float = 1.0) -> AdjointableOp:
    """Random operator with sigma_min bounded away from zero by construction."""
    codomain = codomain or domain
    if codomain.flat_dim < domain.flat_dim:
        raise ValueError("injective operators need codomain at least as large as domain")
    t = random_operator(rng, domain, codomain, scale_)
    return clamp_min_singular(t, floor_ratio * max(op_norm(t), 1e-6))


def random_operator_family(rng: np.random.Generator, domain: ModuleSpace,
                           n_members: int, codomain_ranks=None,
                           scale_: float = 1.0) -> list[AdjointableOp]:
    """Members share the domain; codomain ranks may vary per index."""
    if codomain_ranks is None:
        codomain_ranks = [domain.rank] * n_members
    return [random_operator(rng, domain, ModuleSpace(domain.spec, r), scale_)
            for r in codomain_ranks]


def random_endomorphism_family(rng: np.random.Generator, domain: ModuleSpace,
                               n_members: int, scale_: float = 1.0) -> list[AdjointableOp]:
    return [random_operator(rng, domain, domain, scale_) for _ in range(n_members)]


def degenerate_operator_family(rng: np.random.Generator, domain: ModuleSpace,
                               n_members: int, scale_: float = 1.0) -> list[AdjointableOp]:
    """Family whose members all annihilate the first coordinate axis.

    Zeroing the first entry row of every member puts the span of the
    first unit vector in the kernel of the frame operator, so the family
    cannot satisfy any positive lower frame bound.
    """
    zero = domain.spec.zero()
    members = []
    for _ in range(n_members):
        t = random_operator(rng, domain, domain, scale_)
        rows = ((zero,) * domain.rank,) + t.entries[1:]
        members.append(AdjointableOp(domain, domain, rows))
    return members


def decaying_injective_family(rng: np.random.Generator, domain: ModuleSpace,
                              count: int, floor_ratio: float = 0.1) -> list[AdjointableOp]:
    """Injective endomorphisms with op_norm(T_i) <= 1/i for i = 1..count."""
    members = []
    for i in range(1, count + 1):
        t = random_injective_operator(rng, domain, domain, floor_ratio)
        target = (0.5 + 0.5 * rng.random()) / i
        members.append(scale(t, target / op_norm(t)))
    return members


def random_surjective_endomorphism(rng: np.random.Generator, space: ModuleSpace,
                                   floor_ratio: float = 0.1) -> AdjointableOp:
    # square + injective with margin = invertible = surjective
    return random_injective_operator(rng, space, space, floor_ratio)


def tight_vector_family(space: ModuleSpace) -> list[ModuleVector]:
    """The standard unit vectors: a Parseval family for the free module."""
    return [space.unit(i) for i in range(space.rank)]
