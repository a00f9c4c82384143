import numpy as np
import pytest

from fdapprox.errors import BadIndex, NotCovered, ParamError, WidthCapExceeded
from fdapprox.limit import (build_family, check_directed, check_f_richness, check_rank_invariants,
                            enumerate_rational_pairs, ideal_chain, ideal_structure_check, materialize_window,
                            rational_pair)
from fdapprox.scheme import build_scheme, validate_params


def test_rational_pairs_frozen():
    assert rational_pair(3) == (((1, 0), (0, 0)), ((0, 0), (1, 0)))
    assert rational_pair(4) == (((1, 0), (0, 0)), ((0, 0), (0, 1)))
    assert rational_pair(7) == (((0, 1), (0, 0)), ((0, 0), (1, 0)))
    with pytest.raises(BadIndex):
        rational_pair(2)
    seen = set()
    for m in range(3, 40):
        v, w = enumerate_rational_pairs(m)
        assert abs(np.vdot(w, v)) < 1e-15
        assert abs(np.linalg.norm(v) - 1) < 1e-15 and abs(np.linalg.norm(w) - 1) < 1e-15
        assert len(v) <= m
        key = rational_pair(m)
        assert key not in seen
        seen.add(key)


def test_default_family(family3):
    assert family3.l_seq == (1, 3, 3, 3)
    assert family3.kinds == {0: "type1", 1: "type3", 2: "type2"}
    assert family3.report.passed
    assert family3.vectors[1][0] == 3
    for k in range(4):
        assert check_rank_invariants(family3, k).passed


def test_directed_and_rich(family3):
    assert check_directed(family3).passed
    assert check_f_richness(family3).passed


def test_window_and_ideals(family3):
    w = materialize_window(family3)
    assert len(w.columns) == 27 and len(w.generators) == 27 * 9
    assert all(len(v) >= 2 for k, v in w.provenance.items())
    rep = ideal_structure_check(family3, w, 13, samples=100)
    assert rep.passed, rep.violations
    assert ideal_chain(family3, w).passed
    with pytest.raises(NotCovered):
        materialize_window(family3, columns=[100])
    with pytest.raises(NotCovered):
        materialize_window(family3, width=9)


def test_partial_window(family3):
    w = materialize_window(family3, columns=[0, 1, 2], width=2)
    assert set(w.widths.values()) == {2}
    assert len(w.generators) == 12


def test_params_and_cap():
    with pytest.raises(ParamError):
        build_family(build_scheme(validate_params([0, 2, 3], [0, 0, 0], 2)))
    sch = build_scheme(validate_params([0, 3, 3, 3], [0, 0, 0, 0], 3), [1, 1, 1])
    with pytest.raises(WidthCapExceeded):
        build_family(sch, width_cap=8)


def test_rooted_family():
    sch = build_scheme(validate_params([0, 3, 3], [0, 0, 1], 2))
    fam = build_family(sch)
    assert fam.report.passed
    assert fam.l_seq[0] == 1 and fam.kinds[0] == "type1"
