"""Finite-dimensional *-subalgebras of ``B_X`` given by spanning sets.

In finite dimension the C*-algebra generated by a set equals the *-algebra it
generates, so everything here is linear algebra on vectorized block operators:
``vec(A)`` concatenates the row-major entries of the column blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blockop import BlockOperator, ColumnShape

MEMBERSHIP_TOL = 1e-8
_RANK_TOL = 1e-8


def _offsets(shape: ColumnShape):
    off, out = 0, {}
    for c, w in shape.widths.items():
        out[c] = (off, w)
        off += w * w
    return out


def vectorize(a: BlockOperator, shape: ColumnShape | None = None) -> np.ndarray:
    shape = a.shape if shape is None else shape
    v = np.zeros(shape.dim, dtype=complex)
    for c, (off, w) in _offsets(shape).items():
        if c in a.blocks:
            b = a.blocks[c]
            if b.shape[0] != w:
                b = a.extend(shape).blocks[c]
            v[off:off + w * w] = b.ravel()
    return v


def devectorize(v: np.ndarray, shape: ColumnShape, tol=None) -> BlockOperator:
    blocks = {}
    for c, (off, w) in _offsets(shape).items():
        seg = v[off:off + w * w]
        if np.any(seg):
            blocks[c] = seg.reshape(w, w).copy()
    kw = {} if tol is None else {"tol": tol}
    return BlockOperator(shape, blocks, **kw)


def _right_multiply(rows: np.ndarray, letter: BlockOperator, shape: ColumnShape) -> np.ndarray:
    """Row-wise ``vec(devec(row) @ letter)`` for a stack of vectors."""
    out = np.zeros_like(rows)
    for c, (off, w) in _offsets(shape).items():
        lb = letter.blocks.get(c)
        if lb is None:
            continue
        seg = rows[:, off:off + w * w].reshape(-1, w, w)
        out[:, off:off + w * w] = np.matmul(seg, lb).reshape(-1, w * w)
    return out


def _extend_basis(basis: np.ndarray, cands: np.ndarray, tol: float = _RANK_TOL) -> np.ndarray:
    """Orthonormal rows spanning ``cands`` modulo the row space of ``basis``."""
    if cands.size == 0:
        return cands[:0]
    norms = np.linalg.norm(cands, axis=1)
    cands = cands[norms > 1e-14]
    if cands.shape[0] == 0:
        return cands
    cands = cands / np.linalg.norm(cands, axis=1)[:, None]
    if basis.shape[0]:
        for _ in range(2):
            cands = cands - (cands @ basis.conj().T) @ basis
    _, s, vh = np.linalg.svd(cands, full_matrices=False)
    return vh[s > tol]


@dataclass
class SubalgebraBasis:
    """Orthonormal (Hilbert-Schmidt) basis of a finite-dimensional subalgebra."""

    shape: ColumnShape
    basis: np.ndarray  # rows are orthonormal vectorized operators
    rounds: int = 0
    generators: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def operators(self) -> list:
        return [devectorize(row, self.shape) for row in self.basis]

    def coefficients(self, a: BlockOperator) -> np.ndarray:
        return self.basis.conj() @ vectorize(a, self.shape)

    def residual(self, a: BlockOperator) -> float:
        x = vectorize(a, self.shape)
        nx = np.linalg.norm(x)
        if nx == 0:
            return 0.0
        if self.dim == 0:
            return 1.0
        c = self.basis.conj() @ x
        return float(np.linalg.norm(x - c @ self.basis) / nx)

    def contains(self, a: BlockOperator, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.residual(a) < tol

    def random_element(self, rng: np.random.Generator) -> BlockOperator:
        if self.dim == 0:
            return BlockOperator.zero(self.shape)
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return devectorize(c @ self.basis, self.shape)

    def random_elements(self, rng, count: int) -> list:
        return [self.random_element(rng) for _ in range(count)]


def ambient_shape(generators: Sequence[BlockOperator], shape: ColumnShape | None = None) -> ColumnShape:
    if shape is not None:
        return shape
    if not generators:
        return ColumnShape({})
    out = generators[0].shape
    for g in generators[1:]:
        out = out.union(g.shape)
    return out


def star_closure(generators: Sequence[BlockOperator], shape: ColumnShape | None = None,
                 tol: float = _RANK_TOL, max_rounds: int = 10_000) -> SubalgebraBasis:
    """Basis of the *-algebra generated by ``generators``.

    Span of the letters (generators and adjoints) is grown by right
    multiplication with letters until stable; only newly found directions are
    multiplied again.  Stops early once the span fills the block algebra over
    the columns the generators touch, which is an algebra already.
    """
    shape = ambient_shape(list(generators), shape)
    letters = []
    for g in generators:
        g = g.extend(shape) if g.shape != shape else g
        if g.norm() == 0:
            continue
        letters.append(g)
        gh = g.adjoint()
        if not gh.allclose(g, 1e-14):
            letters.append(gh)
    touched = set()
    for g in letters:
        touched.update(g.nonzero_columns())
    cap = sum(shape.width(c) ** 2 for c in touched)

    empty = np.zeros((0, shape.dim), dtype=complex)
    if not letters:
        return SubalgebraBasis(shape, empty, 0, 0)
    cands = np.array([vectorize(g, shape) for g in letters])
    basis = _extend_basis(empty, cands, tol)
    frontier = basis
    rounds = 0
    while frontier.shape[0] and basis.shape[0] < cap and rounds < max_rounds:
        rounds += 1
        new_rows = []
        for letter in letters:
            prod = _right_multiply(frontier, letter, shape)
            fresh = _extend_basis(np.vstack([basis] + new_rows) if new_rows else basis, prod, tol)
            if fresh.shape[0]:
                new_rows.append(fresh)
                if basis.shape[0] + sum(r.shape[0] for r in new_rows) >= cap:
                    break
        frontier = np.vstack(new_rows) if new_rows else empty
        if frontier.shape[0]:
            basis = np.vstack([basis, frontier])
    return SubalgebraBasis(shape, basis, rounds, len(generators), {"cap": cap})


@dataclass
class Membership:
    member: bool
    residual: float
    coefficients: np.ndarray
    marginal: bool = False


def membership(a: BlockOperator, basis: SubalgebraBasis, tol: float = MEMBERSHIP_TOL) -> Membership:
    """Linear membership of ``a`` in the span of ``basis``.

    Residuals within two orders of magnitude of ``tol`` are flagged marginal.
    """
    res = basis.residual(a)
    coeffs = basis.coefficients(a) if basis.dim else np.zeros(0, dtype=complex)
    marginal = tol / 100 < res < tol * 100
    return Membership(res < tol, res, coeffs, marginal)
