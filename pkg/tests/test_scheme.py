import json

import pytest

from fdapprox.errors import AxiomViolation, BadPrefix, NonAllowed, NotDeltaSystem, NotInScheme, RootTooLarge
from fdapprox.scheme import (build_scheme, canonical_decomposition, captures, default_partition, delta_system,
                             find_capture, is_initial_fragment, order_iso, precedes, scheme_from_json,
                             scheme_from_levels, validate_params, verify_scheme_axioms)


@pytest.mark.parametrize("r,m", [((0, 0, 0, 0), (1, 3, 9, 27)), ((0, 0, 1, 0), (1, 3, 7, 21)),
                                 ((0, 0, 0, 1), (1, 3, 9, 25)), ((0, 0, 1, 1), (1, 3, 7, 19))])
def test_m_sequence(r, m):
    assert validate_params([0, 3, 3, 3], r, 3).m_seq == m


def test_param_errors():
    with pytest.raises(BadPrefix):
        validate_params([0, 3], [1, 0], 1)
    with pytest.raises(BadPrefix):
        validate_params([0, 3, 3], [0, 1, 0], 2)
    with pytest.raises(NonAllowed):
        validate_params([0, 1], [0, 0], 1)
    with pytest.raises(RootTooLarge):
        validate_params([0, 3, 3], [0, 0, 3], 2)


def test_ordinal_helpers():
    assert is_initial_fragment((1, 2), (1, 2, 5))
    assert not is_initial_fragment((1, 5), (1, 2, 5))
    assert precedes((0, 1), (2, 3)) and not precedes((0, 2), (1, 3))
    phi = order_iso((2, 5, 9), (0, 1, 4))
    assert phi(5) == 1 and phi.inverse()(4) == 9
    assert not phi.is_identity()
    ds = delta_system([(0, 1, 2), (0, 3, 4)])
    assert ds.root == (0,) and ds.increasing
    with pytest.raises(NotDeltaSystem):
        delta_system([(0, 1), (0, 1, 2), (0, 3)])


def test_canonical_scheme_levels():
    sch = build_scheme(validate_params([0, 3, 3], [0, 0, 1], 2))
    assert sch.ground == tuple(range(7))
    assert [len(lev) for lev in sch.levels] == [7, 3, 1]
    dec = canonical_decomposition(sch, tuple(range(7)))
    assert dec.members == ((0, 1, 2), (0, 3, 4), (0, 5, 6))
    assert dec.root == (0,)
    assert verify_scheme_axioms(sch).passed
    assert sch.rank_of((0, 3, 4)) == 1
    with pytest.raises(NotInScheme):
        sch.rank_of((1, 2, 3))


def test_default_partition():
    assert default_partition(4) == (1, 3, 2, 1)


def test_captures_and_find_capture():
    sch = build_scheme(validate_params([0, 3, 3], [0, 0, 1], 2))
    top = tuple(range(7))
    assert captures(sch, top, [(0, 1, 2), (0, 3, 4), (0, 5, 6)]).kind == "full"
    assert captures(sch, top, [(0, 1), (0, 3)]).kind == "partial"
    assert captures(sch, top, [(0, 1), (0, 4)]).kind == "none"
    hit = find_capture(sch, [(0, 2), (0, 4), (0, 6)], require_full=True)
    assert hit is not None and hit[0] == top and hit[2].kind == "full"
    assert find_capture(sch, [(1,), (2,)], require_full=True) is None
    assert find_capture(sch, [(1,), (2,)])[2].kind == "partial"


def test_mutation_detected():
    sch = build_scheme(validate_params([0, 3, 3], [0, 0, 0], 2))
    levels = [list(lev) for lev in sch.levels]
    levels[1][1] = (3, 4, 8)
    bad = scheme_from_levels(sch.params, levels, sch.partition, sch.ground)
    assert not verify_scheme_axioms(bad).passed


def test_json_round_trip():
    sch = build_scheme(validate_params([0, 2, 3], [0, 0, 1], 2))
    again = scheme_from_json(json.loads(json.dumps(sch.to_json())))
    assert again.levels == sch.levels and again.partition == sch.partition
    data = sch.to_json()
    data["params"]["m"] = [1, 2, 5]
    with pytest.raises(ValueError):
        scheme_from_json(data)


def test_axiom_violation_type():
    assert issubclass(AxiomViolation, Exception)


def test_capture_examples_rank_two():
    sch = build_scheme(validate_params([0, 3, 3], [0, 0, 0], 2))
    top = tuple(range(9))
    assert captures(sch, top, [(0, 1), (3, 4), (6, 7)]).kind == "full"
    assert captures(sch, top, [(0, 1), (3, 5)]).kind == "none"
    res = captures(sch, top, [(2,), (5,)])
    assert res.kind == "partial" and res.n == 2
    hit = find_capture(sch, [(0, 1), (3, 4), (6, 7)])
    assert hit[0] == top and sch.rank_of(hit[0]) == 2 and hit[2].kind == "full"
    assert find_capture(sch, [(0, 20), (21, 30)]) is None
    single = find_capture(sch, [(3,)])
    assert single is not None and 3 in single[0]
