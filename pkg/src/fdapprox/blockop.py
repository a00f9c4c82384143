"""Column-block operators on finite rectangles of ``columns x coordinates``.

An operator in ``B_X`` leaves every column ``l2({xi} x N)`` invariant, so it is
stored as one dense square block per column.  A column that is absent from
``blocks`` carries the zero block.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import OutOfShape, ShapeMismatch

DEFAULT_TOL = 1e-9


class ColumnShape:
    """Finitely many columns ``xi`` with positive widths ``n_xi``."""

    __slots__ = ("_widths",)

    def __init__(self, widths: Mapping[int, int]):
        clean = {}
        for col, w in widths.items():
            w = int(w)
            if w < 1:
                raise ValueError(f"column {col} has width {w} < 1")
            clean[int(col)] = w
        self._widths = dict(sorted(clean.items()))

    @property
    def widths(self) -> dict:
        return dict(self._widths)

    @property
    def columns(self) -> tuple:
        return tuple(self._widths)

    def width(self, col: int) -> int:
        return self._widths[col]

    def get(self, col, default=0):
        return self._widths.get(col, default)

    @property
    def size(self) -> int:
        """Number of basis vectors ``|X|``."""
        return sum(self._widths.values())

    @property
    def dim(self) -> int:
        """Dimension of ``B_X`` as a vector space, sum of squared widths."""
        return sum(w * w for w in self._widths.values())

    def __contains__(self, col) -> bool:
        return col in self._widths

    def __iter__(self):
        return iter(self._widths)

    def __len__(self):
        return len(self._widths)

    def __eq__(self, other) -> bool:
        return isinstance(other, ColumnShape) and self._widths == other._widths

    def __hash__(self):
        return hash(tuple(self._widths.items()))

    def __repr__(self):
        return f"ColumnShape({self._widths})"

    def union(self, other: "ColumnShape") -> "ColumnShape":
        merged = dict(self._widths)
        for col, w in other._widths.items():
            if col in merged and merged[col] != w:
                raise ShapeMismatch(f"column {col}: width {merged[col]} vs {w}")
            merged[col] = w
        return ColumnShape(merged)

    def dominates(self, other: "ColumnShape") -> bool:
        return all(self.get(c) >= w for c, w in other._widths.items())

    def with_width(self, col: int, width: int) -> "ColumnShape":
        widths = dict(self._widths)
        widths[col] = width
        return ColumnShape(widths)

    def rect(self) -> "Rect":
        return Rect({c: range(w) for c, w in self._widths.items()})

    def coordinates(self):
        for c, w in self._widths.items():
            for k in range(w):
                yield (c, k)


class Rect:
    """A finite subset of ``columns x N``, stored column by column."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Mapping[int, Iterable[int]] | None = None):
        clean = {}
        for col, ks in (coords or {}).items():
            ks = tuple(sorted(set(int(k) for k in ks)))
            if ks:
                clean[int(col)] = ks
        self._coords = dict(sorted(clean.items()))

    @classmethod
    def from_points(cls, points: Iterable[tuple]) -> "Rect":
        coords: dict = {}
        for col, k in points:
            coords.setdefault(col, []).append(k)
        return cls(coords)

    @classmethod
    def full(cls, shape: ColumnShape) -> "Rect":
        return shape.rect()

    @classmethod
    def columns_of(cls, shape: ColumnShape, cols: Iterable[int]) -> "Rect":
        """Whole columns ``a x N`` intersected with the shape."""
        return cls({c: range(shape.width(c)) for c in cols if c in shape})

    @classmethod
    def box(cls, cols: Iterable[int], width: int) -> "Rect":
        return cls({c: range(width) for c in cols})

    @property
    def columns(self) -> tuple:
        return tuple(self._coords)

    def coords(self, col) -> tuple:
        return self._coords.get(col, ())

    def points(self) -> set:
        return {(c, k) for c, ks in self._coords.items() for k in ks}

    def __bool__(self):
        return bool(self._coords)

    def __len__(self):
        return sum(len(ks) for ks in self._coords.values())

    def __eq__(self, other):
        return isinstance(other, Rect) and self._coords == other._coords

    def __hash__(self):
        return hash(tuple(self._coords.items()))

    def __repr__(self):
        return f"Rect({self._coords})"

    def within(self, shape: ColumnShape) -> bool:
        return all(c in shape and ks[-1] < shape.width(c) for c, ks in self._coords.items())

    def issubset(self, other: "Rect") -> bool:
        return all(set(ks) <= set(other.coords(c)) for c, ks in self._coords.items())

    def union(self, other: "Rect") -> "Rect":
        return Rect.from_points(self.points() | other.points())

    def minus(self, other: "Rect") -> "Rect":
        return Rect.from_points(self.points() - other.points())

    def select(self, pred) -> "Rect":
        """Keep the columns ``c`` with ``pred(c)`` true."""
        return Rect({c: ks for c, ks in self._coords.items() if pred(c)})

    def to_json(self):
        return {str(c): list(ks) for c, ks in self._coords.items()}

    @classmethod
    def from_json(cls, data):
        return cls({int(c): ks for c, ks in data.items()})


def _as_block(a, width):
    arr = np.asarray(a, dtype=complex)
    if arr.shape != (width, width):
        raise ShapeMismatch(f"block of shape {arr.shape}, expected {(width, width)}")
    return arr


class BlockOperator:
    """An element of ``B_X``: one square complex block per column."""

    __slots__ = ("shape", "blocks", "tol")
    __array_priority__ = 1000

    def __init__(self, shape: ColumnShape | Mapping[int, int], blocks=None, tol: float = DEFAULT_TOL):
        if not isinstance(shape, ColumnShape):
            shape = ColumnShape(shape)
        self.shape = shape
        self.tol = tol
        self.blocks = {}
        for col, b in (blocks or {}).items():
            if col not in shape:
                raise OutOfShape(f"block at column {col} outside shape")
            self.blocks[col] = _as_block(b, shape.width(col))

    # constructors

    @classmethod
    def zero(cls, shape, tol=DEFAULT_TOL) -> "BlockOperator":
        return cls(shape, {}, tol)

    @classmethod
    def identity(cls, shape, tol=DEFAULT_TOL) -> "BlockOperator":
        if not isinstance(shape, ColumnShape):
            shape = ColumnShape(shape)
        return cls(shape, {c: np.eye(w) for c, w in shape.widths.items()}, tol)

    def block(self, col) -> np.ndarray:
        b = self.blocks.get(col)
        if b is None:
            w = self.shape.get(col)
            return np.zeros((w, w), dtype=complex)
        return b

    def _new(self, shape, blocks):
        return BlockOperator(shape, blocks, self.tol)

    # arithmetic

    def _binary_shape(self, other):
        if self.shape == other.shape:
            return self.shape
        return self.shape.union(other.shape)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        if not isinstance(other, BlockOperator):
            return NotImplemented
        shape = self._binary_shape(other)
        blocks = dict(self.blocks)
        for c, b in other.blocks.items():
            blocks[c] = blocks[c] + b if c in blocks else b
        return self._new(shape, blocks)

    def __neg__(self):
        return self._new(self.shape, {c: -b for c, b in self.blocks.items()})

    def __sub__(self, other):
        if not isinstance(other, BlockOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, BlockOperator):
            return NotImplemented
        return self._new(self.shape, {c: scalar * b for c, b in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        if not isinstance(other, BlockOperator):
            return NotImplemented
        shape = self._binary_shape(other)
        blocks = {c: b @ other.blocks[c] for c, b in self.blocks.items() if c in other.blocks}
        return self._new(shape, blocks)

    def adjoint(self) -> "BlockOperator":
        return self._new(self.shape, {c: b.conj().T for c, b in self.blocks.items()})

    @property
    def H(self):
        return self.adjoint()

    # shape manipulation

    def extend(self, shape: ColumnShape) -> "BlockOperator":
        """Zero-pad into a shape whose columns dominate this one's."""
        if not isinstance(shape, ColumnShape):
            shape = ColumnShape(shape)
        blocks = {}
        for c, b in self.blocks.items():
            w = shape.get(c)
            if w < b.shape[0]:
                raise OutOfShape(f"column {c} narrower in target shape")
            if w == b.shape[0]:
                blocks[c] = b
            else:
                big = np.zeros((w, w), dtype=complex)
                big[: b.shape[0], : b.shape[0]] = b
                blocks[c] = big
        return BlockOperator(shape, blocks, self.tol)

    def relabel(self, mapping: Mapping[int, int], shape: ColumnShape | None = None) -> "BlockOperator":
        """Move the block of column ``c`` to column ``mapping[c]``.

        Columns outside ``mapping`` are dropped.
        """
        if shape is None:
            shape = ColumnShape({mapping[c]: w for c, w in self.shape.widths.items() if c in mapping})
        blocks = {mapping[c]: b for c, b in self.blocks.items() if c in mapping}
        return BlockOperator(shape, blocks, self.tol)

    def restrict(self, rect: Rect) -> "BlockOperator":
        """``A|X = A P_X``: kill the input coordinates outside ``rect``."""
        if not rect.within(self.shape):
            raise OutOfShape(f"{rect} not inside {self.shape}")
        blocks = {}
        for c, b in self.blocks.items():
            ks = rect.coords(c)
            if not ks:
                continue
            if len(ks) == b.shape[0]:
                blocks[c] = b
            else:
                nb = np.zeros_like(b)
                nb[:, list(ks)] = b[:, list(ks)]
                blocks[c] = nb
        return self._new(self.shape, blocks)

    def restrict_columns(self, cols) -> "BlockOperator":
        """``A|a`` for a set of whole columns ``a``."""
        cols = set(cols)
        return self._new(self.shape, {c: b for c, b in self.blocks.items() if c in cols})

    def at(self, alpha) -> "BlockOperator":
        """``A|{alpha}``."""
        return self.restrict_columns([alpha])

    def tail(self, alpha) -> "BlockOperator":
        """``A|[alpha, inf)``."""
        return self._new(self.shape, {c: b for c, b in self.blocks.items() if c >= alpha})

    def head(self, alpha) -> "BlockOperator":
        """``A|alpha``, the columns strictly below ``alpha``."""
        return self._new(self.shape, {c: b for c, b in self.blocks.items() if c < alpha})

    # numerics

    def norm(self) -> float:
        return op_norm(self)

    def is_zero(self, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return self.norm() <= tol

    def allclose(self, other: "BlockOperator", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return (self - other).norm() <= tol

    def equals(self, other: "BlockOperator") -> bool:
        """Exact entrywise equality, zero blocks and absent blocks identified."""
        if self.shape != other.shape:
            return False
        for c in set(self.blocks) | set(other.blocks):
            if not np.array_equal(self.block(c), other.block(c)):
                return False
        return True

    def nonzero_columns(self) -> tuple:
        return tuple(sorted(c for c, b in self.blocks.items() if np.any(b)))

    def to_dense(self) -> np.ndarray:
        n = self.shape.size
        out = np.zeros((n, n), dtype=complex)
        off = 0
        for c, w in self.shape.widths.items():
            if c in self.blocks:
                out[off:off + w, off:off + w] = self.blocks[c]
            off += w
        return out

    def __repr__(self):
        return f"BlockOperator({self.shape.widths}, nonzero={self.nonzero_columns()})"

    # serialization

    def to_dump(self) -> dict:
        """Map column -> row-major matrix of ``[re, im]`` pairs (every column written)."""
        out = {}
        for c in self.shape.columns:
            b = self.block(c)
            out[str(c)] = [[[float(z.real), float(z.imag)] for z in row] for row in b]
        return out

    @classmethod
    def from_dump(cls, data: Mapping, tol: float = DEFAULT_TOL) -> "BlockOperator":
        widths, blocks = {}, {}
        for c, rows in data.items():
            arr = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
            arr = arr.reshape(len(rows), len(rows))
            widths[int(c)] = arr.shape[0]
            if np.any(arr):
                blocks[int(c)] = arr
        return cls(ColumnShape(widths), blocks, tol)


def matrix_unit(shape, xi: int, m: int, n: int, tol: float = DEFAULT_TOL) -> BlockOperator:
    """``1_{xi,m,n}``: sends ``e_{xi,n}`` to ``e_{xi,m}`` and kills every other basis vector."""
    if not isinstance(shape, ColumnShape):
        shape = ColumnShape(shape)
    if xi not in shape:
        raise OutOfShape(f"column {xi} not in shape")
    w = shape.width(xi)
    if not (0 <= m < w and 0 <= n < w):
        raise OutOfShape(f"({m}, {n}) outside column {xi} of width {w}")
    b = np.zeros((w, w), dtype=complex)
    b[m, n] = 1.0
    return BlockOperator(shape, {xi: b}, tol)


def unit_projection(shape, rect: Rect, tol: float = DEFAULT_TOL) -> BlockOperator:
    """``P_X``, the coordinate projection onto ``l2(X)``."""
    if not isinstance(shape, ColumnShape):
        shape = ColumnShape(shape)
    if not rect.within(shape):
        raise OutOfShape(f"{rect} not inside {shape}")
    blocks = {}
    for c in rect.columns:
        d = np.zeros(shape.width(c))
        d[list(rect.coords(c))] = 1.0
        blocks[c] = np.diag(d).astype(complex)
    return BlockOperator(shape, blocks, tol)


def commutator(a: BlockOperator, b: BlockOperator) -> BlockOperator:
    return a @ b - b @ a


def op_norm(a: BlockOperator) -> float:
    """Largest singular value over all column blocks (0 for the zero operator)."""
    best = 0.0
    for b in a.blocks.values():
        if b.size:
            best = max(best, float(np.linalg.norm(b, 2)))
    return best


def restrict(a: BlockOperator, rect: Rect) -> BlockOperator:
    return a.restrict(rect)


def near_projection_distance(a: BlockOperator) -> float:
    """``||A^2 - A||``."""
    return op_norm(a @ a - a)


def is_projection(a: BlockOperator, tol: float | None = None) -> bool:
    tol = a.tol if tol is None else tol
    return near_projection_distance(a) <= tol and (a - a.adjoint()).norm() <= tol


def random_positive_contraction(width: int, rng: np.random.Generator) -> np.ndarray:
    """``V* D V`` with ``V`` Haar-ish unitary and ``D`` diagonal in ``[0, 1]``."""
    z = rng.standard_normal((width, width)) + 1j * rng.standard_normal((width, width))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    d = rng.uniform(0.0, 1.0, width)
    return q.conj().T @ np.diag(d) @ q


def random_block(width: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal((width, width)) + 1j * rng.standard_normal((width, width)))


def random_operator(shape, rng: np.random.Generator, scale: float = 1.0) -> BlockOperator:
    if not isinstance(shape, ColumnShape):
        shape = ColumnShape(shape)
    return BlockOperator(shape, {c: random_block(w, rng, scale) for c, w in shape.widths.items()})
