import pytest

from fdapprox.blockop import Rect
from fdapprox.errors import AlreadyPresent, NotInSupport, WidthCapExceeded
from fdapprox.poset import (check_extension, dominate_column, extend_domain, generated_subalgebra,
                            grow_column, has_f_witness, random_condition, sample_f_membership,
                            validate_condition)


def test_extend_domain(rng):
    q = random_condition({0: 2, 5: 1}, rng)
    p, rec = extend_domain(q, 3)
    assert p.widths == {0: 2, 3: 1, 5: 1}
    assert validate_condition(p).passed and check_extension(p, q, rec)
    with pytest.raises(AlreadyPresent):
        extend_domain(q, 5)


def test_grow_column(rng):
    q = random_condition({0: 2, 5: 1}, rng)
    p, rec = grow_column(q, 5, 3)
    assert p.width(5) == 3
    assert validate_condition(p).passed and check_extension(p, q, rec)
    same, _ = grow_column(q, 0, 1)
    assert same is q
    with pytest.raises(NotInSupport):
        grow_column(q, 1, 2)
    with pytest.raises(WidthCapExceeded):
        grow_column(q, 0, 9, width_cap=8)


def test_dominate_column_widths_and_witness(rng):
    q = random_condition({0: 2, 5: 3}, rng)
    p, rec = dominate_column(q, None, 0)
    assert p.widths == {0: 5, 5: 3}
    assert validate_condition(p).passed and check_extension(p, q, rec)
    assert has_f_witness(p, q.X, 0)
    stats = sample_f_membership(p, q.X, 0, rng, samples=200)
    assert stats["violations"] == 0


def test_dominate_top_column_only_records(rng):
    q = random_condition({0: 2, 5: 3}, rng)
    p, _ = dominate_column(q, None, 5)
    assert p.widths == q.widths and has_f_witness(p, q.X, 5)


def test_domination_can_fail_before(rng):
    q = random_condition({0: 1, 1: 1}, rng)
    gens = generated_subalgebra(q)
    rect = q.X
    stats = sample_f_membership(q, rect, 0, rng, samples=200)
    assert gens.dim == 2 and stats["violations"] > 0


def test_dominate_errors(rng):
    q = random_condition({0: 1}, rng)
    with pytest.raises(NotInSupport):
        dominate_column(q, None, 3)
    with pytest.raises(Exception):
        dominate_column(q, Rect({2: [0]}), 0)
