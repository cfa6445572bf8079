"""Finite-dimensional C*-algebras as block-diagonal complex matrices.

An algebra is a direct sum of full matrix blocks M_{n_1} + ... + M_{n_m};
an element carries one complex matrix per block.  The involution is the
blockwise conjugate transpose and the norm is the largest singular value
over the blocks, so the C*-identity holds by construction.  Every frame
inequality in this package eventually reduces to the positivity checks
defined here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NotPositive, SpecMismatch

DEFAULT_TOL = 1e-9
DEFAULT_STRICT_EPS = 1e-8


@dataclass(frozen=True)
class AlgebraSpec:
    """Shape of the algebra: the ordered sizes of its matrix blocks."""

    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.block_sizes)
        if not sizes:
            raise ValueError("an algebra needs at least one block")
        if any(n < 1 for n in sizes):
            raise ValueError(f"block sizes must all be >= 1, got {sizes}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def is_commutative(self) -> bool:
        return all(n == 1 for n in self.block_sizes)

    @property
    def flat_dim(self) -> int:
        """Complex dimension of the algebra (sum of squared block sizes)."""
        return sum(n * n for n in self.block_sizes)

    def element(self, blocks: Iterable[np.ndarray]) -> "AlgebraElement":
        return AlgebraElement(self, tuple(blocks))

    def identity(self) -> "AlgebraElement":
        return self.element(np.eye(n, dtype=complex) for n in self.block_sizes)

    def zero(self) -> "AlgebraElement":
        return self.element(np.zeros((n, n), dtype=complex) for n in self.block_sizes)

    def scalar(self, value: complex) -> "AlgebraElement":
        """value times the identity element."""
        return self.element(value * np.eye(n, dtype=complex) for n in self.block_sizes)

    def diagonal(self, values: Sequence[complex]) -> "AlgebraElement":
        """Element of a commutative algebra from one scalar per block."""
        if not self.is_commutative:
            raise ValueError("diagonal() requires a commutative algebra")
        if len(values) != len(self.block_sizes):
            raise ValueError("one value per block required")
        return self.element(np.array([[v]], dtype=complex) for v in values)


def _freeze(block: np.ndarray) -> np.ndarray:
    out = np.array(block, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class AlgebraElement:
    """One complex matrix per block of the algebra."""

    spec: AlgebraSpec
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(_freeze(b) for b in self.blocks)
        if len(blocks) != len(self.spec.block_sizes):
            raise ValueError("wrong number of blocks")
        for b, n in zip(blocks, self.spec.block_sizes):
            if b.shape != (n, n):
                raise ValueError(f"block shape {b.shape} does not match size {n}")
        object.__setattr__(self, "blocks", blocks)

    def _check_spec(self, other: "AlgebraElement"):
        if self.spec != other.spec:
            raise SpecMismatch("elements belong to different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(-b for b in self.blocks))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        """Algebra product (blockwise matrix product)."""
        self._check_spec(other)
        return AlgebraElement(self.spec, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def scaled(self, factor: complex) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(factor * b for b in self.blocks))

    def allclose(self, other: "AlgebraElement", tol: float = DEFAULT_TOL) -> bool:
        self._check_spec(other)
        return all(np.max(np.abs(a - b)) <= tol if a.size else True
                   for a, b in zip(self.blocks, other.blocks))


def involution(a: AlgebraElement) -> AlgebraElement:
    """Blockwise conjugate transpose; an isometric anti-automorphism."""
    return AlgebraElement(a.spec, tuple(b.conj().T for b in a.blocks))


def norm(a: AlgebraElement) -> float:
    """Operator norm: the largest singular value over the blocks."""
    return max(float(np.linalg.norm(b, 2)) for b in a.blocks)


def hermitian_deviation(a: AlgebraElement) -> float:
    """Max-abs entry distance from a to its involution."""
    return max(float(np.max(np.abs(b - b.conj().T))) for b in a.blocks)


def eigenvalues(a: AlgebraElement) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian element, all blocks pooled."""
    return np.sort(np.concatenate([np.linalg.eigvalsh((b + b.conj().T) / 2) for b in a.blocks]))


def is_positive(a: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """True iff a is Hermitian within tol and its spectrum is >= -tol.

    Non-Hermitian inputs fail the check; they are never symmetrized.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if hermitian_deviation(a) > tol:
        return False
    return bool(eigenvalues(a)[0] >= -tol)


def is_strictly_positive(a: AlgebraElement, eps: float = DEFAULT_STRICT_EPS) -> bool:
    """True iff a is Hermitian within eps with all eigenvalues >= eps.

    Strict positivity here means positive and invertible with margin,
    which is the reading used for frame-bound elements.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if hermitian_deviation(a) > eps:
        return False
    return bool(eigenvalues(a)[0] >= eps)


def is_nonzero(a: AlgebraElement, eps: float = DEFAULT_STRICT_EPS) -> bool:
    """Raw nonzero test: norm above eps.  Weaker than strict positivity."""
    return norm(a) > eps


def positive_sqrt(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Positive square root of a positive element via blockwise eigendecomposition."""
    if not is_positive(a, tol):
        raise NotPositive("positive_sqrt requires a positive element")
    roots = []
    for b in a.blocks:
        w, q = np.linalg.eigh((b + b.conj().T) / 2)
        s = (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T
        roots.append((s + s.conj().T) / 2)
    return AlgebraElement(a.spec, tuple(roots))


def absolute_value(a: AlgebraElement) -> AlgebraElement:
    """Modulus: the positive square root of involution(a) * a."""
    return positive_sqrt(involution(a) * a)
