import numpy as np
import pytest

from _corpus import triple

from fdapprox.blockop import matrix_unit, random_operator
from fdapprox.errors import NotConvenient, NotOrthonormal, WidthMismatch
from fdapprox.poset import (V_HALF, amalgamate_anticommuting, amalgamate_disjoint, amalgamate_including,
                            amalgamate_type1, amalgamate_type2, amalgamate_type3, anticommuting_unitary,
                            check_extension, convenient_position, random_condition, validate_condition)


def test_convenient_position(rng):
    p1, p2, p3 = triple(rng, root=1, block=2)
    sigma = convenient_position(p1, p2)
    assert sigma is not None and sigma.mapping == {0: 0, 1: 3, 2: 4}
    assert convenient_position(p2, p1) is None
    other = random_condition(p2.widths, rng)
    assert convenient_position(p1, other) is None


def test_disjoint(rng):
    p, q, _ = triple(rng, root=1, block=1)
    r, (rp, rq) = amalgamate_disjoint(p, q)
    assert r.support == (0, 1, 2)
    assert validate_condition(r).passed
    assert check_extension(r, p, rp) and check_extension(r, q, rq)
    with pytest.raises(NotConvenient):
        amalgamate_disjoint(q, p)


def test_including_copies_upper(rng):
    p, q, _ = triple(rng, root=1, block=1)
    r, (rp, rq) = amalgamate_including(p, q)
    assert check_extension(r, p, rp) and check_extension(r, q, rq)
    a = random_operator(q.shape, rng)
    out = rq.evaluate(a)
    assert np.allclose(out.block(1), a.block(2))


def test_anticommuting_unitary():
    u = anticommuting_unitary([1, 0], [0, 1], 2)
    assert np.allclose(u, V_HALF)
    u3 = anticommuting_unitary([0, 1, 0], [0, 0, 1], 3)
    assert np.allclose(u3 @ u3.conj().T, np.eye(3))
    assert np.allclose(u3[0], [1, 0, 0])
    with pytest.raises(NotOrthonormal):
        anticommuting_unitary([1, 0], [1, 0], 2)
    with pytest.raises(NotOrthonormal):
        anticommuting_unitary([1, 0, 0], [0, 1, 0], 2)


def test_anticommuting_width_mismatch(rng):
    p = random_condition({0: 2, 1: 2, 2: 3}, rng)
    from fdapprox.poset import transport_condition
    from fdapprox.scheme import order_iso
    q = transport_condition(p, order_iso((0, 1, 2), (0, 3, 4)))
    with pytest.raises(WidthMismatch):
        amalgamate_anticommuting(p, q, [1, 0], [0, 1])


def test_type2_identity(rng):
    ps = triple(rng, root=1, block=2)
    r, (r1, r2, r3) = amalgamate_type2(*ps)
    for p, rec in zip(ps, (r1, r2, r3)):
        assert check_extension(r, p, rec)
    from fdapprox.scheme import order_iso
    for _ in range(20):
        a = random_operator(ps[2].shape, rng)
        ja = a.relabel(order_iso(ps[2].support, ps[1].support).mapping, ps[1].shape)
        j1 = a.relabel(order_iso(ps[2].support, ps[0].support).mapping, ps[0].shape)
        lhs = r3.evaluate(a) @ r2.evaluate(ja)
        rhs = r1.evaluate(j1) @ r1.evaluate(j1)
        assert (lhs - rhs).norm() <= 1e-12 * max(1.0, rhs.norm())


def test_type3_commutator(rng):
    ps = triple(rng, root=1, block=1, width=2)
    v1, v2 = np.array([1, 0]), np.array([0, 1])
    r, (r1, r2, r3) = amalgamate_type3(*ps, v1, v2)
    for p, rec in zip(ps, (r1, r2, r3)):
        assert check_extension(r, p, rec)
    from fdapprox.scheme import order_iso
    a2 = matrix_unit(ps[1].shape, 2, 0, 0)
    a1 = a2.relabel(order_iso(ps[1].support, ps[0].support).mapping, ps[0].shape)
    a3 = a2.relabel(order_iso(ps[1].support, ps[2].support).mapping, ps[2].shape)
    x1, x2, x3 = r1.evaluate(a1), r2.evaluate(a2), r3.evaluate(a3)
    assert abs((x1 @ x2 - x2 @ x1).norm() - 0.5) < 1e-9
    assert abs((x1 @ x3 - x3 @ x1).norm() - 0.5) < 1e-9
    assert (x2 @ x3 - x3 @ x2).norm() < 1e-12


def test_type1_grows_and_extends(rng):
    ps = triple(rng, root=1, block=1)
    r, recs = amalgamate_type1(*ps)
    assert len(set(r.widths.values())) == 1
    assert max(r.widths.values()) > max(max(p.widths.values()) for p in ps)
    assert validate_condition(r).passed
    for p, rec in zip(ps, recs):
        assert check_extension(r, p, rec)
