import numpy as np
from hypothesis import given, settings, strategies as st

from fdapprox.algebra import devectorize, membership, star_closure, vectorize
from fdapprox.blockop import BlockOperator, ColumnShape, matrix_unit, random_operator


def test_vectorize_round_trip(rng):
    s = ColumnShape({0: 2, 3: 3})
    a = random_operator(s, rng)
    assert devectorize(vectorize(a), s).allclose(a, 1e-15)


def test_full_matrix_algebra_from_two_units():
    s = ColumnShape({0: 3})
    basis = star_closure([matrix_unit(s, 0, 0, 1), matrix_unit(s, 0, 1, 2)])
    assert basis.dim == 9


def test_diagonal_generates_diagonal():
    s = ColumnShape({0: 3})
    d = BlockOperator(s, {0: np.diag([1.0, 2.0, 3.0])})
    assert star_closure([d]).dim == 3


def test_projection_generates_one_dimension():
    s = ColumnShape({0: 2})
    assert star_closure([matrix_unit(s, 0, 0, 0)]).dim == 1


def test_membership_of_products(rng):
    s = ColumnShape({0: 2, 1: 2})
    a, b = random_operator(s, rng), random_operator(s, rng)
    basis = star_closure([a, b])
    assert membership(a @ b.adjoint() @ a, basis).member
    assert basis.contains(a.adjoint())


def test_non_member_detected():
    s = ColumnShape({0: 2})
    basis = star_closure([matrix_unit(s, 0, 0, 0)])
    res = membership(matrix_unit(s, 0, 0, 1), basis)
    assert not res.member and res.residual > 0.5


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_closure_is_closed(width, seed):
    rng = np.random.default_rng(seed)
    s = ColumnShape({0: width})
    gens = [BlockOperator(s, {0: np.diag(rng.integers(0, 3, width).astype(float))})]
    basis = star_closure(gens)
    ops = basis.operators()
    for x in ops:
        for y in ops:
            assert basis.contains(x @ y)
        assert basis.contains(x.adjoint())
