import numpy as np
import pytest

from fdapprox.blockop import (BlockOperator, ColumnShape, Rect, commutator, is_projection, matrix_unit,
                              near_projection_distance, random_operator, random_positive_contraction,
                              unit_projection)
from fdapprox.errors import OutOfShape, ShapeMismatch


def test_shape_basics():
    s = ColumnShape({3: 2, 0: 1})
    assert s.columns == (0, 3)
    assert s.size == 3
    assert s.dim == 5
    assert 3 in s and 1 not in s
    assert s.union(ColumnShape({3: 2, 5: 1})).widths == {0: 1, 3: 2, 5: 1}
    with pytest.raises(ShapeMismatch):
        s.union(ColumnShape({3: 4}))
    assert s.with_width(0, 5).width(0) == 5
    assert ColumnShape({0: 2, 3: 2}).dominates(s)
    assert not s.dominates(ColumnShape({0: 2}))


def test_rect_algebra():
    s = ColumnShape({0: 2, 1: 3})
    full = Rect.full(s)
    assert len(full) == 5
    r = Rect.from_points([(0, 0), (1, 2)])
    assert r.issubset(full) and r.within(s)
    assert len(full.minus(r)) == 3
    assert Rect.from_json(r.to_json()) == r
    assert Rect.box([4, 7], 2).columns == (4, 7)


def test_arithmetic_blockwise(rng):
    s = ColumnShape({0: 2, 4: 3})
    a, b = random_operator(s, rng), random_operator(s, rng)
    d = (a @ b).to_dense()
    assert np.allclose(d, a.to_dense() @ b.to_dense())
    assert np.allclose((a + b * 2).to_dense(), a.to_dense() + 2 * b.to_dense())
    assert np.allclose(a.adjoint().to_dense(), a.to_dense().conj().T)
    assert abs(a.norm() - np.linalg.norm(a.to_dense(), 2)) < 1e-12


def test_shape_mismatch_and_out_of_shape():
    a = BlockOperator({0: 2})
    with pytest.raises(ShapeMismatch):
        a @ BlockOperator({0: 3})
    with pytest.raises(OutOfShape):
        matrix_unit({0: 2}, 0, 2, 0)


def test_matrix_units_relations():
    s = ColumnShape({0: 3})
    e = {(m, n): matrix_unit(s, 0, m, n) for m in range(3) for n in range(3)}
    for (a, b), x in e.items():
        for (c, d), y in e.items():
            prod = x @ y
            ref = e[(a, d)] if b == c else BlockOperator.zero(s)
            assert prod.equals(ref)


def test_restrict_tail_head(rng):
    s = ColumnShape({0: 1, 2: 2, 5: 3})
    a = random_operator(s, rng)
    assert a.tail(2).nonzero_columns() == (2, 5)
    assert a.head(2).nonzero_columns() == (0,)
    assert a.at(2).nonzero_columns() == (2,)
    assert abs(a.norm() - max(a.tail(2).norm(), a.head(2).norm())) < 1e-12
    rect = Rect({2: [1]})
    r = a.restrict(rect)
    assert r.block(2)[1, 1] == a.block(2)[1, 1] and r.block(2)[0, 0] == 0


def test_extend_relabel(rng):
    a = random_operator({1: 2}, rng)
    b = a.extend(ColumnShape({1: 4, 3: 1}))
    assert np.array_equal(b.block(1)[:2, :2], a.block(1))
    assert not np.any(b.block(1)[2:, :]) and not np.any(b.block(3))
    c = a.relabel({1: 7})
    assert c.shape.columns == (7,) and np.array_equal(c.block(7), a.block(1))


def test_projections(rng):
    p = unit_projection({0: 3}, Rect({0: [0, 2]}))
    assert is_projection(p)
    assert near_projection_distance(p) == 0
    m = random_positive_contraction(5, rng)
    w = np.linalg.eigvalsh(m)
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12


def test_commutator_zero_for_diagonal():
    a = BlockOperator({0: 2}, {0: np.diag([1, 2])})
    b = BlockOperator({0: 2}, {0: np.diag([3, 5])})
    assert commutator(a, b).is_zero()


def test_dump_round_trip(rng):
    a = random_operator({0: 2, 3: 1}, rng)
    assert BlockOperator.from_dump(a.to_dump()).equals(a)
