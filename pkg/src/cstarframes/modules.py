"""The free Hilbert module A^d with its algebra-valued inner product.

Vectors are d-tuples of algebra elements.  The inner product is
<x, y> = sum_i x_i * involution(y_i), which is linear in the left slot
over the algebra.  Finite direct sums concatenate coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    AlgebraElement,
    AlgebraSpec,
    involution,
    norm,
    positive_sqrt,
)
from .errors import SpaceMismatch, SpecMismatch


@dataclass(frozen=True)
class ModuleSpace:
    """A^d: the free module of a fixed rank over a fixed algebra."""

    spec: AlgebraSpec
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @property
    def flat_dim(self) -> int:
        """Complex dimension of the space when viewed over the scalars."""
        return self.rank * self.spec.flat_dim

    def zero(self) -> "ModuleVector":
        return ModuleVector(self, tuple(self.spec.zero() for _ in range(self.rank)))

    def unit(self, index: int) -> "ModuleVector":
        """Vector with the algebra identity at one coordinate, zero elsewhere."""
        coords = [self.spec.zero() for _ in range(self.rank)]
        coords[index] = self.spec.identity()
        return ModuleVector(self, tuple(coords))


@dataclass(frozen=True)
class ModuleVector:
    space: ModuleSpace
    coords: tuple[AlgebraElement, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.space.rank:
            raise ValueError("wrong number of coordinates")
        for c in coords:
            if c.spec != self.space.spec:
                raise SpecMismatch("coordinate algebra does not match the space")
        object.__setattr__(self, "coords", coords)

    def _check_space(self, other: "ModuleVector"):
        if self.space != other.space:
            raise SpaceMismatch("vectors belong to different spaces")

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check_space(other)
        return ModuleVector(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        self._check_space(other)
        return ModuleVector(self.space, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scaled(self, factor: complex) -> "ModuleVector":
        return ModuleVector(self.space, tuple(c.scaled(factor) for c in self.coords))


def inner_product(x: ModuleVector, y: ModuleVector) -> AlgebraElement:
    """<x, y> = sum_i x_i * involution(y_i)."""
    x._check_space(y)
    acc = x.coords[0] * involution(y.coords[0])
    for xi, yi in zip(x.coords[1:], y.coords[1:]):
        acc = acc + xi * involution(yi)
    return acc


def module_action(a: AlgebraElement, x: ModuleVector) -> ModuleVector:
    """Coordinatewise left multiplication by an algebra element."""
    if a.spec != x.space.spec:
        raise SpecMismatch("element and vector live over different algebras")
    return ModuleVector(x.space, tuple(a * c for c in x.coords))


def vector_norm(x: ModuleVector) -> float:
    """||x|| = ||<x, x>||^(1/2)."""
    return float(np.sqrt(norm(inner_product(x, x))))


def a_valued_norm(x: ModuleVector, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Algebra-valued modulus: the positive square root of the Gram element."""
    return positive_sqrt(inner_product(x, x), tol)


def direct_sum(spaces: Sequence[ModuleSpace]) -> ModuleSpace:
    """Direct sum of free modules over one shared algebra."""
    if not spaces:
        raise ValueError("direct_sum needs at least one space")
    spec = spaces[0].spec
    for s in spaces[1:]:
        if s.spec != spec:
            raise SpecMismatch("direct summands must share one algebra")
    return ModuleSpace(spec, sum(s.rank for s in spaces))


def _offsets(spaces: Sequence[ModuleSpace]) -> list[int]:
    offs = [0]
    for s in spaces:
        offs.append(offs[-1] + s.rank)
    return offs


def embed(spaces: Sequence[ModuleSpace], k: int, x: ModuleVector) -> ModuleVector:
    """Place x into summand k of the direct sum, zero elsewhere."""
    if x.space != spaces[k]:
        raise SpaceMismatch("vector does not live in summand k")
    total = direct_sum(spaces)
    offs = _offsets(spaces)
    coords = [total.spec.zero() for _ in range(total.rank)]
    for i, c in enumerate(x.coords):
        coords[offs[k] + i] = c
    return ModuleVector(total, tuple(coords))


def project(spaces: Sequence[ModuleSpace], k: int, x: ModuleVector) -> ModuleVector:
    """Extract summand k from a direct-sum vector."""
    total = direct_sum(spaces)
    if x.space != total:
        raise SpaceMismatch("vector does not live in the direct sum")
    offs = _offsets(spaces)
    return ModuleVector(spaces[k], tuple(x.coords[offs[k]:offs[k + 1]]))


def flatten(x: ModuleVector) -> np.ndarray:
    """Complex coordinate vector: coordinates major, blocks minor, row-major entries."""
    parts = [b.ravel() for c in x.coords for b in c.blocks]
    return np.concatenate(parts)


def unflatten(space: ModuleSpace, flat: np.ndarray) -> ModuleVector:
    flat = np.asarray(flat, dtype=complex)
    if flat.shape != (space.flat_dim,):
        raise ValueError(f"expected a flat vector of length {space.flat_dim}")
    sizes = space.spec.block_sizes
    coords = []
    pos = 0
    for _ in range(space.rank):
        blocks = []
        for n in sizes:
            blocks.append(flat[pos:pos + n * n].reshape(n, n))
            pos += n * n
        coords.append(AlgebraElement(space.spec, tuple(blocks)))
    return ModuleVector(space, tuple(coords))
