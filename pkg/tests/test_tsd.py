import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ternlink.tsd import (
    BinaryStructure,
    CompatibleSystem,
    GFamily,
    ResourceLimitError,
    TernaryStructure,
    alexander_gfamily_sl2z3,
    augmented_cyclic_system,
    check_compatible_system,
    check_rack,
    check_tsd,
    compose_binary,
    cyclic_group,
    dihedral_group_d3,
    dihedral_quandle,
    gfamily_check,
    gfamily_to_compatible,
    heap_of_group,
    mutual_shift_pair,
    sl2z3_group,
    structure_from_json,
    symmetric_group_s3,
)


def brute_tsd_counterexample(T):
    m = T.shape[0]
    for x in range(m):
        for y in range(m):
            for z in range(m):
                for u in range(m):
                    for v in range(m):
                        lhs = T[T[x, y, z], u, v]
                        rhs = T[T[x, u, v], T[y, u, v], T[z, u, v]]
                        if lhs != rhs:
                            return (x, y, z, u, v)
    return None


def test_heap_z3_is_tsd():
    s = heap_of_group(cyclic_group(3))
    rep = check_tsd(s)
    assert rep.ok and rep.counterexample is None
    assert rep.checked == rep.total == 3 ** 5


def test_heap_z4_rack_left_inverse():
    s = heap_of_group(cyclic_group(4))
    rep = check_rack(s)
    assert rep.ok
    L = s.left_inverse
    for x in range(4):
        for y in range(4):
            for z in range(4):
                assert L[x, y, z] == (x + y - z) % 4
                assert s.table[L[x, y, z], y, z] == x
                assert L[s.table[x, y, z], y, z] == x


def test_nonabelian_heaps_are_tsd_racks():
    for grp in (dihedral_group_d3(), symmetric_group_s3()):
        s = heap_of_group(grp)
        assert check_tsd(s).ok
        assert check_rack(s).ok
        # closed-form left inverse agrees with the bijection inverse
        closed = s.left_inverse.copy()
        check_rack(s)
        assert np.array_equal(closed, s.left_inverse)


def test_tsd_counterexample_is_lex_first():
    s = heap_of_group(cyclic_group(3))
    T = s.table.copy()
    T[2, 1, 0] = (T[2, 1, 0] + 1) % 3
    rep = check_tsd(TernaryStructure(T))
    assert not rep.ok
    assert rep.counterexample == brute_tsd_counterexample(T)


def test_rack_failure_reported():
    T = np.zeros((3, 3, 3), dtype=np.int64)  # constant map, nowhere bijective
    rep = check_rack(TernaryStructure(T))
    assert not rep.ok
    assert rep.counterexample == (0, 0)


def test_heap_para_associativity():
    # T(T(x,y,z),u,v) = T(x, T(u,z,y), v) on every heap, plus the undo-redo
    # special case T(T(T(x,z,w),w,z),z,w) = T(x,z,w)
    groups = [cyclic_group(n) for n in range(2, 7)] + [dihedral_group_d3(), symmetric_group_s3()]
    for grp in groups:
        T = heap_of_group(grp).table
        m = T.shape[0]
        i = np.arange(m)
        x = i[:, None, None, None, None]
        y = i[None, :, None, None, None]
        z = i[None, None, :, None, None]
        u = i[None, None, None, :, None]
        v = i[None, None, None, None, :]
        lhs = T[T[x, y, z], u, v]
        rhs = T[x, T[u, z, y], v]
        assert np.array_equal(lhs, rhs)
        a = T[x[:, :, :, 0, 0], y[:, :, :, 0, 0], z[:, :, :, 0, 0]]
        undo_redo = T[T[a, z[:, :, :, 0, 0], y[:, :, :, 0, 0]], y[:, :, :, 0, 0], z[:, :, :, 0, 0]]
        assert np.array_equal(undo_redo, a)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8))
def test_cyclic_heaps_always_pass(n):
    assert check_tsd(heap_of_group(cyclic_group(n))).ok


def test_dihedral_quandle_composition():
    q = dihedral_quandle(5)
    t = compose_binary(q)
    assert check_tsd(t).ok
    for x in range(5):
        for y in range(5):
            for z in range(5):
                assert t.table[x, y, z] == (x - 2 * y + 2 * z) % 5


def test_compose_two_binaries():
    b1 = dihedral_quandle(3)
    b2 = BinaryStructure(np.arange(3)[:, None] * np.ones(3, dtype=np.int64)[None, :])
    t = compose_binary(b1, b2)
    # (x *1 y) *2 z with *2 the left projection
    for x in range(3):
        for y in range(3):
            for z in range(3):
                assert t.table[x, y, z] == b1.table[x, y]


def test_d3_group_layout():
    g = dihedral_group_d3()
    assert g.labels == ["e", "r", "r2", "s", "sr", "sr2"]
    assert g.identity == 0
    # reflections enumerate as r^a * s: the element labeled sr is r*s,
    # and s*r lands on sr2
    assert g.mul(1, 3) == 4
    assert g.mul(3, 1) == 5
    # defining relations: r order 3, s order 2, s r s = r^-1
    assert g.mul(1, g.mul(1, 1)) == 0
    assert g.mul(3, 3) == 0
    assert g.mul(g.mul(3, 1), 3) == g.inverse[1]
    # every reflection is an involution
    for x in (3, 4, 5):
        assert g.mul(x, x) == 0


def test_sl2z3_group_sane():
    g = sl2z3_group()
    assert g.size == 24
    assert g.matrices[g.identity] == (1, 0, 0, 1)


def test_alexander_family_satisfies_axioms():
    fam = alexander_gfamily_sl2z3()
    reports = gfamily_check(fam)
    for rep in reports:
        assert rep.ok, rep.identity


def test_gfamily_axiom_violation_detected():
    fam = alexander_gfamily_sl2z3()
    ops = fam.ops.copy()
    ops[5, 2, 7] = (ops[5, 2, 7] + 1) % 9
    bad = GFamily(fam.group, ops)
    assert not all(r.ok for r in gfamily_check(bad))


def test_gfamily_to_compatible_printed_formula():
    fam = alexander_gfamily_sl2z3()
    system, report = gfamily_to_compatible(fam)
    assert report.printed_ok
    assert report.chosen == "printed"
    assert system.n_indices == 24
    # diagonal agrees with composing the two relevant binary operations
    G = fam.group
    for g in (0, 1, 7, 23):
        expect = compose_binary(BinaryStructure(fam.ops[g]),
                                BinaryStructure(fam.ops[G.inverse[g]])).table
        assert np.array_equal(system.tables[(g, g)], expect)
    # diagonals are themselves TSD
    assert check_tsd(TernaryStructure(system.tables[(3, 3)])).ok


def test_mutual_pair_exhaustive():
    sys2 = mutual_shift_pair()
    rep = check_compatible_system(sys2)
    assert rep.ok and rep.mode == "exhaustive" and rep.fraction == 1.0


def test_corrupted_system_fails():
    sys2 = mutual_shift_pair()
    rng = np.random.default_rng(3)
    tables = dict(sys2.tables)
    tables[(0, 1)] = rng.integers(0, 5, size=(5, 5, 5))
    bad = CompatibleSystem([5, 5], tables)
    rep = check_compatible_system(bad)
    assert not rep.ok
    assert rep.counterexample is not None


def test_sampled_mode_coverage():
    sys2 = mutual_shift_pair()
    rep = check_compatible_system(sys2, budget=500)
    assert rep.mode == "sampled"
    assert 0 < rep.fraction < 1
    assert rep.ok


def test_augmented_cyclic_system():
    for flag in (False, True):
        sysa = augmented_cyclic_system(2, 2, 3, heap_diagonal=flag)
        assert sysa.sizes == (4, 6)
        rep = check_compatible_system(sysa)
        assert rep.ok and rep.mode == "exhaustive"
    with pytest.raises(ValueError):
        augmented_cyclic_system(2, 2, 4)


def test_augmented_small_range_exhaustive():
    # every n*m_i <= 12 instance with coprime multipliers passes exhaustively
    for n, m1, m2 in [(1, 2, 3), (2, 2, 3), (3, 1, 2), (2, 3, 1), (1, 3, 4), (4, 1, 3)]:
        if n * m1 <= 12 and n * m2 <= 12:
            assert check_compatible_system(augmented_cyclic_system(n, m1, m2)).ok


def test_structure_json_round_trips():
    s = heap_of_group(cyclic_group(4))
    again = structure_from_json(s.to_json())
    assert again == s
    q = dihedral_quandle(6)
    back = structure_from_json(q.to_json())
    assert np.array_equal(back.table, q.table)
    fam = alexander_gfamily_sl2z3()
    fam2 = structure_from_json(fam.to_json())
    assert np.array_equal(fam2.ops, fam.ops)
    assert np.array_equal(fam2.group.table, fam.group.table)
    sysa = augmented_cyclic_system(2, 2, 3)
    sysb = structure_from_json(sysa.to_json())
    assert all(np.array_equal(sysa.tables[k], sysb.tables[k]) for k in sysa.tables)


def test_bad_tables_rejected():
    with pytest.raises(ValueError):
        TernaryStructure(np.zeros((2, 3, 2), dtype=np.int64))
    with pytest.raises(ValueError):
        TernaryStructure(np.full((2, 2, 2), 5, dtype=np.int64))
    with pytest.raises(ValueError):
        structure_from_json({"kind": "ternary", "size": 2, "table": [0] * 7})
    with pytest.raises(ValueError):
        structure_from_json({"kind": "nope"})


def test_cell_budget_enforced(monkeypatch):
    monkeypatch.setenv("TSD_MAX_CELLS", "100")
    s = heap_of_group(cyclic_group(4))
    with pytest.raises(ResourceLimitError):
        check_tsd(s)
    monkeypatch.setenv("TSD_MAX_CELLS", "abc")
    with pytest.raises(ValueError):
        check_tsd(s)
