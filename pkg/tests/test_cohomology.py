import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ternlink.coeffs import AbelianGroup
from ternlink.cohomology import (
    Cochain1,
    Cochain2,
    augmented_system_cocycle,
    boundary_map,
    characteristic_cochain2,
    check_cocycle2,
    check_system_cocycle,
    cochain_from_json,
    compute_H2,
    d1_matrix,
    d2_matrix,
    d3_psi_cocycle,
    delta1,
    delta2,
    is_coboundary2,
    is_system_trivial,
    nosaka_pair_value,
    nosaka_singular_labels,
    nosaka_system_cocycle,
    phi_i_cocycle,
    sl2z3_lambda,
    system_coboundary,
    SystemCocycle,
    zero_cochain2,
)
from ternlink.tsd import (
    CompatibleSystem,
    ResourceLimitError,
    TernaryStructure,
    cyclic_group,
    dihedral_group_d3,
    heap_of_group,
    mutual_shift_pair,
    sl2z3_group,
)

try:
    from sympy import Matrix
    HAVE_SYMPY = True
except Exception:
    HAVE_SYMPY = False


def heap_z(m):
    return heap_of_group(cyclic_group(m))


def brute_cocycle_counterexample(S, values, mods):
    """Pure-python lex-first violation of the 2-cocycle condition."""
    m = S.size
    T = S.table

    def val(a, b, c):
        return values[(a * m + b) * m + c]

    for x in range(m):
        for y in range(m):
            for z in range(m):
                for u in range(m):
                    for v in range(m):
                        lhs = [p - q - r + s for p, q, r, s in zip(
                            val(x, y, z),
                            val(T[x, u, v], T[y, u, v], T[z, u, v]),
                            val(x, u, v),
                            val(T[x, y, z], u, v))]
                        for pos, k in enumerate(mods):
                            t = lhs[pos] % k if k else lhs[pos]
                            if t:
                                return (x, y, z, u, v)
    return None


def test_delta1_identity_on_z3_heap():
    S = heap_z(3)
    A = AbelianGroup((3,))
    f = Cochain1(S, A, np.arange(3))
    out = delta1(f)
    for x in range(3):
        for y in range(3):
            for z in range(3):
                assert out.value(x, y, z) == ((y - z) % 3,)


def test_delta1_constant_and_singleton():
    S = heap_z(4)
    A = AbelianGroup((0,))
    const = Cochain1(S, A, np.full(4, 7))
    assert not delta1(const).values.any()
    point = TernaryStructure(np.zeros((1, 1, 1), dtype=np.int64), name="point")
    g = Cochain1(point, AbelianGroup((5,)), np.array([3]))
    assert not delta1(g).values.any()


@given(st.integers(2, 4),
       st.lists(st.integers(-9, 9), min_size=2, max_size=4))
@settings(max_examples=40, deadline=None)
def test_delta2_of_delta1_vanishes(m, raw):
    S = heap_z(m)
    A = AbelianGroup((0,))
    f = Cochain1(S, A, np.resize(np.array(raw, dtype=np.int64), m))
    assert not delta2(delta1(f)).any()


def test_delta2_of_delta1_vanishes_d3():
    S = heap_of_group(dihedral_group_d3())
    A = AbelianGroup((3,))
    rng = np.random.default_rng(3)
    f = Cochain1(S, A, rng.integers(0, 3, size=(6, 1)))
    assert not delta2(delta1(f)).any()


def test_check_cocycle2_agrees_with_brute_force_all_z2_cochains():
    # every Z_2-valued 2-cochain on the order-2 heap, both verdict and
    # lex-first counterexample
    S = heap_z(2)
    A = AbelianGroup((2,))
    for bits in range(256):
        vals = np.array([(bits >> t) & 1 for t in range(8)], dtype=np.int64)
        c = Cochain2(S, A, vals.reshape(8, 1))
        rep = check_cocycle2(c)
        brute = brute_cocycle_counterexample(S, [tuple(v) for v in c.values], (2,))
        assert rep.ok == (brute is None)
        if not rep.ok:
            assert rep.counterexample == brute


def test_chi001_on_z2_heap_is_not_a_cocycle():
    S = heap_z(2)
    c = characteristic_cochain2(S, AbelianGroup((2,)), (0, 0, 1))
    rep = check_cocycle2(c)
    assert not rep.ok
    assert rep.counterexample == (0, 0, 1, 1, 0)


def test_phi_values_match_printed_examples():
    p1 = phi_i_cocycle(4, 1)
    assert p1.value(0, 2, 3) == (1,)
    assert p1.value(0, 2, 0) == (0,)
    p0 = phi_i_cocycle(5, 0)
    for a in range(5):
        for b in range(5):
            assert p0.value(a, b, b) == (1,)
    with pytest.raises(ValueError):
        phi_i_cocycle(4, 4)


def test_phi_2_of_5_passes_brute_oracle():
    c = phi_i_cocycle(5, 2)
    assert brute_cocycle_counterexample(
        c.structure, [tuple(v) for v in c.values], (0,)) is None
    assert check_cocycle2(c).ok


def test_phi_all_small_m():
    for m in range(2, 7):
        for i in range(m):
            assert check_cocycle2(phi_i_cocycle(m, i)).ok


def test_d3_psi_values_and_characterization():
    psi = d3_psi_cocycle()
    G = dihedral_group_d3()
    assert psi.coeffs.factors == (3,)
    assert psi.value(0, 0, 1) == (1,)    # (e, e, r)
    assert psi.value(0, 1, 0) == (0,)    # (e, r, e)
    assert psi.value(4, 5, 3) == (1,)    # (sr, sr^2, s)
    # support pairs are the left-translation orbit (y, r*y)
    r = 1
    for a in range(6):
        for b in range(6):
            for c in range(6):
                expect = 1 if G.table[r, b] == c else 0
                assert psi.value(a, b, c) == (expect,)


def test_d3_psi_is_cocycle_and_not_coboundary():
    psi = d3_psi_cocycle()
    assert check_cocycle2(psi).ok
    assert brute_cocycle_counterexample(
        psi.structure, [tuple(v) for v in psi.values], (3,)) is None
    ok, wit = is_coboundary2(psi)
    assert not ok and wit is None


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
@settings(max_examples=25, deadline=None)
def test_coboundary_roundtrip_z4(raw):
    S = heap_z(4)
    A = AbelianGroup((4,))
    f = Cochain1(S, A, np.array(raw, dtype=np.int64))
    ok, wit = is_coboundary2(delta1(f))
    assert ok
    assert delta1(wit) == delta1(f)


def test_coboundary_roundtrip_mixed_factors():
    S = heap_z(3)
    A = AbelianGroup((2, 6, 0))
    rng = np.random.default_rng(5)
    f = Cochain1(S, A, rng.integers(-4, 5, size=(3, 3)))
    ok, wit = is_coboundary2(delta1(f))
    assert ok
    assert delta1(wit) == delta1(f)


def test_phi_is_never_a_coboundary():
    for (m, i) in [(4, 0), (4, 1), (5, 2)]:
        ok, _ = is_coboundary2(phi_i_cocycle(m, i))
        assert not ok, (m, i)


def test_phi_differences_not_coboundary():
    for m in (3, 4):
        for i in range(m):
            for k in range(i + 1, m):
                ok, _ = is_coboundary2(phi_i_cocycle(m, i) - phi_i_cocycle(m, k))
                assert not ok, (m, i, k)


def test_boundary_compositions_vanish():
    for m in (2, 3):
        S = heap_z(m)
        d1 = boundary_map(S, 1)
        d2 = boundary_map(S, 2)
        assert not (d1 @ d2).any()
    S2 = heap_z(2)
    assert not (boundary_map(S2, 2) @ boundary_map(S2, 3)).any()
    with pytest.raises(ValueError):
        boundary_map(S2, 4)


def test_boundary_transposes_match_differentials():
    for S in (heap_z(3), heap_of_group(dihedral_group_d3())):
        assert np.array_equal(boundary_map(S, 2).T, d2_matrix(S))
        assert np.array_equal(boundary_map(S, 1).T, -d1_matrix(S))


def test_boundary_degree_one_column_signs():
    S = heap_z(3)
    M = boundary_map(S, 1)
    # column (x,y,z): -1 at x, +1 at T(x,y,z), signs from the alternating sum
    x, y, z = 1, 2, 0
    col = M[:, (x * 3 + y) * 3 + z]
    t = int(S.table[x, y, z])
    expect = np.zeros(3, dtype=np.int64)
    expect[x] -= 1
    expect[t] += 1
    assert np.array_equal(col, expect)


def _gf_rank(M, p):
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        mask = np.arange(rows) != r
        A[mask] = (A[mask] - np.outer(A[mask, c], A[r])) % p
        r += 1
    return r


def test_h2_z2_heap_mod2():
    S = heap_z(2)
    rep = compute_H2(S, AbelianGroup((2,)))
    assert rep.free_rank == 0
    assert rep.torsion == [2, 2]
    assert rep.group_description() == "Z2 + Z2"
    for g in rep.cocycle_basis:
        assert check_cocycle2(g).ok
        ok, _ = is_coboundary2(g)
        assert not ok
    g1, g2 = rep.cocycle_basis
    ok, _ = is_coboundary2(g1 - g2)
    assert not ok


def test_h2_z2_heap_class_structure():
    """Mod 2 on the two-element heap the cocycle space has 8 elements.

    No single characteristic function is a cocycle (each fails delta2),
    and [y = z] together with the x=0 slice of [y != z] generate the four
    classes.  The full [y != z] cochain, phi_1, cobounds mod 2 even though
    it does not over the integers.
    """
    S = heap_z(2)
    A = AbelianGroup((2,))

    for triple, first_bad in (((0, 0, 0), (0, 0, 0, 0, 1)),
                              ((0, 1, 1), (0, 0, 1, 1, 1))):
        rep = check_cocycle2(characteristic_cochain2(S, A, triple))
        assert not rep.ok
        assert rep.counterexample == first_bad

    cocycles = []
    for bits in range(256):
        vals = np.array([(bits >> i) & 1 for i in range(8)],
                        dtype=np.int64).reshape(8, 1)
        c = Cochain2(S, A, vals)
        if check_cocycle2(c).ok:
            cocycles.append(c)
    assert len(cocycles) == 8
    assert sum(1 for c in cocycles if is_coboundary2(c)[0]) == 2

    # generator one: [y = z], the x-independent diagonal indicator
    diag = Cochain2(S, A, np.array(
        [1, 0, 0, 1, 1, 0, 0, 1], dtype=np.int64).reshape(8, 1))
    # generator two: the x=0 slice of the off-diagonal indicator
    slice0 = Cochain2(S, A, np.array(
        [0, 1, 1, 0, 0, 0, 0, 0], dtype=np.int64).reshape(8, 1))
    for c in (diag, slice0, diag + slice0):
        assert check_cocycle2(c).ok
        assert not is_coboundary2(c)[0]
    assert not is_coboundary2(diag - slice0)[0]

    # phi_1 = [y != z] is a coboundary at this modulus
    phi1 = Cochain2(S, A, np.array(
        [0, 1, 1, 0, 0, 1, 1, 0], dtype=np.int64).reshape(8, 1))
    assert check_cocycle2(phi1).ok
    assert is_coboundary2(phi1)[0]

    # the computed generators hit the same four classes
    rep = compute_H2(S, A)
    g1, g2 = rep.cocycle_basis
    reachable = set()
    for c in (diag, slice0, diag + slice0):
        hits = [k for k, gen in enumerate((g1, g2, g1 + g2))
                if is_coboundary2(c - gen)[0]]
        assert len(hits) == 1
        reachable.add(hits[0])
    assert reachable == {0, 1, 2}


def test_h2_z3_heap_mod3_dimension_oracle():
    S = heap_z(3)
    rep = compute_H2(S, AbelianGroup((3,)))
    D1, D2 = d1_matrix(S), d2_matrix(S)
    dim = (27 - _gf_rank(D2, 3)) - _gf_rank(D1, 3)
    assert rep.free_rank == 0
    assert rep.torsion == [3] * dim


def test_h2_singleton_reproduces_coefficients():
    point = TernaryStructure(np.zeros((1, 1, 1), dtype=np.int64), name="point")
    rep = compute_H2(point, AbelianGroup((0,)))
    assert rep.free_rank == 1 and rep.torsion == []
    rep = compute_H2(point, AbelianGroup((6,)))
    assert rep.free_rank == 0 and rep.torsion == [6]
    rep = compute_H2(point, AbelianGroup((2, 4)))
    assert rep.free_rank == 0 and rep.torsion == [2, 4]


@pytest.mark.skipif(not HAVE_SYMPY, reason="sympy not installed")
def test_h2_z2_heap_integer_free_rank_oracle():
    S = heap_z(2)
    rep = compute_H2(S, AbelianGroup((0,)))
    D1, D2 = d1_matrix(S), d2_matrix(S)
    expect_free = (8 - Matrix(D2.tolist()).rank()) - Matrix(D1.tolist()).rank()
    assert rep.free_rank == expect_free
    for order, g in zip(rep.generator_orders, rep.cocycle_basis):
        assert check_cocycle2(g).ok
        assert not is_coboundary2(g)[0]
        if order > 1:
            scaled = Cochain2(S, g.coeffs, g.values * order)
            assert is_coboundary2(scaled)[0]
            for k in range(2, order):
                partial = Cochain2(S, g.coeffs, g.values * k)
                assert not is_coboundary2(partial)[0]


def test_h2_composite_modulus_orders_behave():
    S = heap_z(2)
    rep = compute_H2(S, AbelianGroup((4,)))
    assert rep.free_rank == 0
    for order, g in zip(rep.generator_orders, rep.cocycle_basis):
        assert 4 % order == 0
        assert check_cocycle2(g).ok
        assert not is_coboundary2(g)[0]
        scaled = Cochain2(S, g.coeffs, g.values * order)
        assert is_coboundary2(scaled)[0]


def test_h2_resource_gate():
    with pytest.raises(ResourceLimitError):
        compute_H2(heap_z(2), AbelianGroup((2,)), max_dim=4)


def test_h2_report_serializes():
    rep = compute_H2(heap_z(2), AbelianGroup((2,)))
    blob = json.dumps(rep.to_json())
    assert "generators" in blob


def test_cochain_json_roundtrip():
    c = phi_i_cocycle(4, 1)
    obj = c.to_json(inline_structure=True)
    back = cochain_from_json(obj)
    assert back == c
    named = c.to_json()
    assert named["structure"] == "heap:Z4"
    back2 = cochain_from_json(named, resolve=lambda name: heap_z(4))
    assert back2 == c
    with pytest.raises(ValueError):
        cochain_from_json(named)
    f = Cochain1(heap_z(3), AbelianGroup((3,)), np.arange(3))
    back3 = cochain_from_json(f.to_json(inline_structure=True))
    assert isinstance(back3, Cochain1) and back3 == f


def test_zero_system_cocycle_passes():
    system = mutual_shift_pair()
    A = AbelianGroup((5,))
    values = {p: np.zeros((system.sizes[p[0]], system.sizes[p[1]],
                           system.sizes[p[1]]), dtype=np.int64)
              for p in system.tables}
    alpha = SystemCocycle(system, A, values)
    rep = check_system_cocycle(alpha)
    assert rep.ok and rep.mode == "exhaustive" and rep.fraction == 1.0


def test_system_coboundary_passes_and_is_trivial():
    system = mutual_shift_pair()
    A = AbelianGroup((5,))
    rng = np.random.default_rng(11)
    fs = [rng.integers(0, 5, size=(system.sizes[i], 1)) for i in range(2)]
    alpha = system_coboundary(system, fs, A)
    assert check_system_cocycle(alpha).ok
    ok, wit = is_system_trivial(alpha)
    assert ok
    rebuilt = system_coboundary(system, wit, A)
    for pair in alpha.values:
        assert np.array_equal(rebuilt.values[pair], alpha.values[pair])


def test_perturbed_coboundary_fails_check():
    system = mutual_shift_pair()
    A = AbelianGroup((5,))
    fs = [np.arange(system.sizes[i])[:, None] % 5 for i in range(2)]
    alpha = system_coboundary(system, fs, A)
    alpha.values[(0, 1)][2, 3, 1, 0] = (alpha.values[(0, 1)][2, 3, 1, 0] + 1) % 5
    rep = check_system_cocycle(alpha)
    assert not rep.ok
    assert rep.counterexample is not None


def test_augmented_indicator_cocycle_passes_and_is_nontrivial():
    system, alpha = augmented_system_cocycle(2, 2, 3)
    rep = check_system_cocycle(alpha)
    assert rep.ok and rep.mode == "exhaustive"
    ok, _ = is_system_trivial(alpha)
    assert not ok


def test_single_index_system_reduces_to_plain_cocycle_condition():
    S = heap_z(4)
    system = CompatibleSystem((4,), {(0, 0): S.table}, name="solo")
    phi = phi_i_cocycle(4, 1)
    alpha = SystemCocycle(system, AbelianGroup((0,)),
                          {(0, 0): phi.values.reshape(4, 4, 4)})
    assert check_system_cocycle(alpha).ok
    ok, _ = is_system_trivial(alpha)
    assert not ok
    diag = alpha.diagonal_cochain(0)
    assert check_cocycle2(diag).ok


def test_system_cocycle_sampled_mode():
    system = mutual_shift_pair()
    A = AbelianGroup((5,))
    values = {p: np.zeros((system.sizes[p[0]], system.sizes[p[1]],
                           system.sizes[p[1]]), dtype=np.int64)
              for p in system.tables}
    alpha = SystemCocycle(system, A, values)
    rep = check_system_cocycle(alpha, budget=500)
    assert rep.ok and rep.mode == "sampled"
    assert 0 < rep.fraction < 1


def test_system_cocycle_json_roundtrip():
    from ternlink.cohomology import system_cocycle_from_json
    system, alpha = augmented_system_cocycle(2, 2, 3)
    back = system_cocycle_from_json(alpha.to_json())
    for pair in alpha.values:
        assert np.array_equal(back.values[pair], alpha.values[pair])


def test_nosaka_singular_labels():
    G = sl2z3_group()
    sing = nosaka_singular_labels(G)
    assert len(sing) == 9
    assert G.identity in sing
    assert set(sing) == {i for i, (a, b, c, d) in enumerate(G.matrices)
                         if (a + d) % 3 == 2}


def test_nosaka_lambda_and_pair_values():
    G = sl2z3_group()
    assert sl2z3_lambda(G.matrices[G.identity]) == 0
    sing = set(nosaka_singular_labels(G))
    adm = [i for i in range(G.size) if i not in sing]
    nz = [g for g in range(G.size) if sl2z3_lambda(G.matrices[g])]
    assert nz
    # repeated point: det has a zero column
    for g in nz[:2]:
        for h in adm[:3]:
            for x in (0, 4, 8):
                assert nosaka_pair_value(x, g, x, h, group=G) == 0
    with pytest.raises(ValueError):
        nosaka_pair_value(0, nz[0], 1, G.identity, group=G)


def test_nosaka_default_base_is_vacuously_zero_and_passes():
    alpha, report = nosaka_system_cocycle(budget=250_000)
    assert report.base_weight == 0
    assert sorted(report.excluded_labels) == nosaka_singular_labels()
    assert len(report.admissible_labels) == 15
    assert all(not a.any() for a in alpha.values.values())
    assert report.check.ok
    json.dumps(report.to_json())


def test_nosaka_nonzero_base_fails_printed_condition():
    # With a base label of nonzero weight the printed assembly is not a
    # system cocycle; the frozen tuple below violates the mixed condition.
    G = sl2z3_group()
    base = next(g for g in range(G.size) if sl2z3_lambda(G.matrices[g]))
    alpha, report = nosaka_system_cocycle(base_label=base, budget=300_000)
    assert report.base_weight != 0
    assert any(a.any() for a in alpha.values.values())
    assert not report.check.ok

    i = j = k = 0
    assert (i, j) in alpha.values
    T = alpha.system.tables[(i, j)]
    a = alpha.values[(i, j)][..., 0]
    x, y, z, u, v = 7, 0, 5, 8, 8
    lhs = (a[x, y, z] + a[T[x, y, z], u, v]) % 3
    rhs = (a[x, u, v] + a[T[x, u, v], T[y, u, v], T[z, u, v]]) % 3
    assert lhs != rhs


def test_nosaka_values_match_pair_helper():
    G = sl2z3_group()
    base = next(g for g in range(G.size) if sl2z3_lambda(G.matrices[g]))
    alpha, _ = nosaka_system_cocycle(base_label=base, budget=1000)
    from ternlink.tsd import alexander_gfamily_sl2z3
    fam = alexander_gfamily_sl2z3()
    rng = np.random.default_rng(2)
    pairs = list(alpha.values)
    for _ in range(25):
        g, h = pairs[rng.integers(len(pairs))]
        x, y, z = (int(t) for t in rng.integers(0, 9, size=3))
        direct = (nosaka_pair_value(x, base, y, g, group=G)
                  + nosaka_pair_value(int(fam.ops[g][x, y]), base, z, h, group=G)) % 3
        assert int(alpha.values[(g, h)][x, y, z, 0]) == direct
