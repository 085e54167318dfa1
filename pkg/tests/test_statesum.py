import math
import random

import numpy as np
import pytest

from ternlink.braid import (
    FramedBraidWord,
    apply_move,
    enumerate_applicable_moves,
    parse_word,
    r2_insert,
)
from ternlink.coeffs import AbelianGroup, GroupRingElement
from ternlink.cohomology import (
    Cochain1,
    SystemCocycle,
    characteristic_cochain2,
    delta1,
    phi_i_cocycle,
    zero_cochain2,
)
from ternlink.statesum import (
    Coloring,
    InvariantValue,
    enumerate_colorings,
    propagate_coloring,
    ribbon_invariant,
    statesum_all_assignments,
    statesum_for_system,
    vector_invariant,
)
from ternlink.tsd import (
    CompatibleSystem,
    TernaryStructure,
    augmented_cyclic_system,
    cyclic_group,
    dihedral_group_d3,
    heap_of_group,
    mutual_shift_pair,
)
from ternlink.cohomology import augmented_system_cocycle, d3_psi_cocycle


def heap_z(m):
    return heap_of_group(cyclic_group(m))


def identity_value(coeffs, t, count):
    base = AbelianGroup(tuple(coeffs.factors) * (2 * t))
    return InvariantValue(t, GroupRingElement(base, {base.zero(): count}), count)


def test_propagate_trivial_word():
    S = heap_z(3)
    b = FramedBraidWord(2)
    col = propagate_coloring(b, [(0, 1), (2, 2)], S)
    assert col is not None
    assert col.trace == ()
    assert col.bottom_colors == ((0, 1), (2, 2))


def test_propagate_positive_crossing_rule():
    S = heap_z(3)
    b = parse_word("n=2; s1")
    col = propagate_coloring(b, [(0, 0), (1, 2)], S, require_closure=False)
    step = col.trace[0]
    assert step["under"] == (0, 0)
    assert step["over"] == (1, 2)
    # underpass (0,0) becomes (T(0,1,2), T(0,1,2)) = (1,1)
    assert step["after"] == ((1, 2), (1, 1))
    # that coloring does not close up
    assert propagate_coloring(b, [(0, 0), (1, 2)], S) is None


def test_propagate_twist_consistency_condition():
    m, n0 = 4, 2
    S = heap_z(m)
    b = FramedBraidWord(1, [n0])
    for x in range(m):
        for y in range(m):
            col = propagate_coloring(b, [(x, y)], S)
            expect = (n0 * (y - x)) % m == 0
            assert (col is not None) == expect


def test_enumerate_counts_for_framed_unknots():
    for m in (2, 3, 5):
        S = heap_z(m)
        assert len(enumerate_colorings(FramedBraidWord(1), S)) == m * m
    # coprime framing leaves m colorings, otherwise gcd * m
    for m, n0 in ((3, 1), (4, 2), (6, 4), (5, 3)):
        S = heap_z(m)
        cols = len(enumerate_colorings(FramedBraidWord(1, [n0]), S))
        assert cols == m * math.gcd(n0, m)


def test_enumerate_is_lexicographic():
    S = heap_z(2)
    cols = enumerate_colorings(FramedBraidWord(1), S)
    assert cols[0].top_colors == ((0, 0),)
    assert cols[1].top_colors == ((0, 1),)
    assert len(cols) == 4


def test_zero_cochain_gives_coloring_count():
    S = heap_z(3)
    psi = zero_cochain2(S, AbelianGroup((0,)))
    b = parse_word("n=2; s1 s1 s1")
    val = ribbon_invariant(b, S, psi)
    assert val == identity_value(psi.coeffs, 1, val.colorings)
    assert val.value.augmentation() == val.colorings


def test_unknot_coprime_framing_values():
    # gcd(n, m) = 1 forces constant pairs and all weights vanish
    for m, n0, i in ((5, 2, 1), (4, 3, 2), (7, 3, 4)):
        S = heap_z(m)
        psi = phi_i_cocycle(m, i)
        val = ribbon_invariant(FramedBraidWord(1, [n0]), S, psi)
        assert val == identity_value(psi.coeffs, 1, m)


def test_unknot_resonant_framing_splits_terms():
    # m=4, n0=2: differences 0 and 2 survive; i=2 picks up weight (2,2)
    S = heap_z(4)
    psi = phi_i_cocycle(4, 2)
    val = ribbon_invariant(FramedBraidWord(1, [2]), S, psi)
    base = val.value.base
    assert val.colorings == 8
    assert val.value.terms == {(0, 0): 4, (2, 2): 4}
    assert base.factors == (0, 0)


def test_ribbon_invariant_rejects_links():
    S = heap_z(2)
    psi = zero_cochain2(S, AbelianGroup((0,)))
    with pytest.raises(ValueError, match="vector_invariant"):
        ribbon_invariant(FramedBraidWord(2), S, psi)


def test_vector_invariant_unlink():
    S = heap_z(2)
    psi = phi_i_cocycle(2, 1)
    val = vector_invariant(FramedBraidWord(2), S, psi)
    assert val.components == 2
    assert val == identity_value(psi.coeffs, 2, 16)


def test_vector_invariant_matches_ribbon_on_knots():
    S = heap_z(4)
    psi = phi_i_cocycle(4, 1)
    b = parse_word("n=2; s1 s1 s1")
    assert vector_invariant(b, S, psi) == ribbon_invariant(b, S, psi)


def test_torus_22_with_diagonal_weight():
    # closure of s1 s1: colorings are constant pairs; phi_0 weights every
    # crossing, one per component
    S = heap_z(2)
    psi = phi_i_cocycle(2, 0)
    val = vector_invariant(parse_word("n=2; s1 s1"), S, psi)
    assert val.components == 2
    assert val.value.terms == {(1, 1, 1, 1): 4}


def test_coboundary_weight_collapses_to_unit():
    rng = random.Random(5)
    S = heap_z(3)
    A = AbelianGroup((0,))
    for b in (FramedBraidWord(1, [1]),
              parse_word("n=2; s1 s1 s1"),
              parse_word("n=2; t1^2 s1")):
        f = Cochain1(S, A, np.array([[rng.randint(-3, 3)] for _ in range(3)]))
        val = ribbon_invariant(b, S, delta1(f))
        assert val == identity_value(A, 1, val.colorings)


def test_cohomologous_cocycles_agree():
    rng = random.Random(11)
    S = heap_z(4)
    psi = phi_i_cocycle(4, 1)
    words = [parse_word("n=2; s1 s1 s1"), parse_word("n=2; t1 s1 s1 s1")]
    for b in words:
        for _ in range(5):
            f = Cochain1(S, psi.coeffs,
                         np.array([[rng.randint(-2, 2)] for _ in range(4)]))
            shifted = psi + delta1(f)
            assert ribbon_invariant(b, S, shifted) == ribbon_invariant(b, S, psi)
    G = dihedral_group_d3()
    SD = heap_of_group(G)
    psi3 = d3_psi_cocycle()
    b = parse_word("n=2; s1 s1 s1")
    f = Cochain1(SD, psi3.coeffs, np.array([[rng.randint(0, 2)] for _ in range(6)]))
    assert (vector_invariant(b, SD, psi3 + delta1(f))
            == vector_invariant(b, SD, psi3))


def test_move_invariance_small_sweep():
    S = heap_z(3)
    psi = phi_i_cocycle(3, 1)
    for text in ("n=2; s1 s1 s1", "n=2; t1 s1", "n=3; s1 s2 s1 t2^-1"):
        b = parse_word(text)
        base = vector_invariant(b, S, psi)
        for move in enumerate_applicable_moves(b):
            assert vector_invariant(apply_move(b, move), S, psi) == base


def test_d3_move_invariance():
    SD = heap_of_group(dihedral_group_d3())
    psi = d3_psi_cocycle()
    b = parse_word("n=2; t1 s1 s1")
    base = vector_invariant(b, SD, psi)
    for move in enumerate_applicable_moves(b)[:12]:
        assert vector_invariant(apply_move(b, move), SD, psi) == base


def test_forward_negative_reading_breaks_rii():
    # reading negative crossings forward through T leaves s1 s1^-1 acting
    # as a shear instead of the identity, so padding the word changes the
    # answer and the second Reidemeister move no longer holds
    S = heap_z(3)
    psi = phi_i_cocycle(3, 1)
    b = parse_word("n=2; s1")
    padded = apply_move(b, r2_insert(0, 1, 1))
    good = ribbon_invariant(padded, S, psi)
    assert good == ribbon_invariant(b, S, psi)
    assert good.colorings == 3
    broken = ribbon_invariant(padded, S, psi, forward_negative=True)
    assert broken != good
    assert broken.colorings == 9
    assert broken.value.terms == {(0, 0): 6, (1, 1): 3}
    # on a word with no negative crossings the flag is inert
    assert ribbon_invariant(b, S, psi, forward_negative=True) == good


def test_verify_flag_rejects_non_cocycles():
    S = heap_z(2)
    A = AbelianGroup((2,))
    bad = characteristic_cochain2(S, A, (0, 0, 1))
    with pytest.raises(ValueError, match="2-cocycle"):
        ribbon_invariant(FramedBraidWord(1, [1]), S, bad)
    ribbon_invariant(FramedBraidWord(1, [1]), S, bad, verify=False)


def test_structure_mismatch_rejected():
    psi = phi_i_cocycle(3, 1)
    with pytest.raises(ValueError, match="different structure"):
        ribbon_invariant(FramedBraidWord(1, [1]), heap_z(4), psi)


def test_max_colorings_guard():
    S = heap_z(4)
    psi = phi_i_cocycle(4, 0)
    with pytest.raises(ValueError, match="exceeds"):
        ribbon_invariant(FramedBraidWord(2, [0, 0], [(1, 1)]), S, psi,
                         max_colorings=10)


def test_non_rack_structure_rejected():
    S = TernaryStructure(np.zeros((2, 2, 2), dtype=np.int64))
    psi = zero_cochain2(S, AbelianGroup((0,)))
    with pytest.raises(ValueError, match="rack"):
        ribbon_invariant(FramedBraidWord(1, [1]), S, psi, verify=False)


def test_invariant_json_shape():
    S = heap_z(4)
    psi = phi_i_cocycle(4, 2)
    val = ribbon_invariant(FramedBraidWord(1, [2]), S, psi)
    doc = val.to_json()
    assert doc["components"] == 1
    assert doc["colorings"] == 8
    assert {"key": [[2, 2]], "coeff": 4} in doc["terms"]


def test_single_index_system_reduces_to_ribbon():
    m = 3
    S = heap_z(m)
    psi = phi_i_cocycle(m, 1)
    system = CompatibleSystem([m], {(0, 0): S.table})
    alpha = SystemCocycle(system, psi.coeffs,
                          {(0, 0): psi.values.reshape(m, m, m, 1)})
    for text in ("n=1; t1", "n=2; s1 s1 s1", "n=2; t1^-1 s1"):
        b = parse_word(text)
        got = statesum_for_system(b, system, alpha, [0] * b.strands)
        want = vector_invariant(b, S, psi)
        assert got == want


def brute_system_statesum(b, system, alpha, assignment):
    """Independent per-coloring walk used as an oracle."""
    import itertools
    n = b.strands
    coeffs = alpha.coeffs
    f = len(coeffs.factors)
    from ternlink.braid import closure_components
    info = closure_components(b)
    t = len(info.components)
    comp_of = [0] * n
    for c, members in enumerate(info.components):
        for s in members:
            comp_of[s - 1] = c
    base = AbelianGroup(tuple(coeffs.factors) * (2 * t))
    terms = {}
    count = 0
    ranges = []
    for k in range(n):
        mk = system.sizes[assignment[k]]
        ranges.append([(a, b2) for a in range(mk) for b2 in range(mk)])
    for tops in itertools.product(*ranges):
        state = [list(p) for p in tops]
        W = [[np.zeros(f, dtype=np.int64), np.zeros(f, dtype=np.int64)]
             for _ in range(t)]
        ok = True
        for k in range(n):
            r = b.twists[k]
            i = assignment[k]
            Tii = system.tables[(i, i)]
            Aii = alpha.values[(i, i)]
            mi = system.sizes[i]
            step = 1 if r > 0 else -1
            for _ in range(abs(r)):
                x, y = state[k]
                if step > 0:
                    W[comp_of[k]][0] += Aii[x, x, y]
                    W[comp_of[k]][1] += Aii[y, x, y]
                    state[k] = [int(Tii[x, x, y]), int(Tii[y, x, y])]
                else:
                    found = None
                    for px in range(mi):
                        for py in range(mi):
                            if Tii[px, px, py] == x and Tii[py, px, py] == y:
                                found = (px, py)
                    px, py = found
                    W[comp_of[k]][0] -= Aii[px, px, py]
                    W[comp_of[k]][1] -= Aii[py, px, py]
                    state[k] = [px, py]
        cur = list(range(n))
        for gi, sign in b.word:
            p = gi - 1
            su, so = (cur[p], cur[p + 1]) if sign > 0 else (cur[p + 1], cur[p])
            i, j = assignment[su], assignment[so]
            Tij = system.tables[(i, j)]
            Aij = alpha.values[(i, j)]
            comp = comp_of[su]
            if sign > 0:
                (a1, a2), (o1, o2) = state[p], state[p + 1]
                W[comp][0] += Aij[a1, o1, o2]
                W[comp][1] += Aij[a2, o1, o2]
                state[p], state[p + 1] = [o1, o2], [int(Tij[a1, o1, o2]),
                                                   int(Tij[a2, o1, o2])]
            else:
                (o1, o2), (u1, u2) = state[p], state[p + 1]
                mi = system.sizes[i]
                n1 = next(x for x in range(mi) if Tij[x, o1, o2] == u1)
                n2 = next(x for x in range(mi) if Tij[x, o1, o2] == u2)
                W[comp][0] -= Aij[n1, o1, o2]
                W[comp][1] -= Aij[n2, o1, o2]
                state[p], state[p + 1] = [n1, n2], [o1, o2]
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
        for k in range(n):
            if tuple(state[k]) != tuple(tops[k]):
                ok = False
        if not ok:
            continue
        count += 1
        key = []
        for c in range(t):
            key.extend(int(v) for v in W[c][0])
            key.extend(int(v) for v in W[c][1])
        key = base.reduce(tuple(key))
        terms[key] = terms.get(key, 0) + 1
    return InvariantValue(t, GroupRingElement(base, terms), count)


def test_system_statesum_against_brute_oracle():
    system = mutual_shift_pair(5, (1, 2))
    rng = np.random.default_rng(3)
    coeffs = AbelianGroup((5,))
    values = {(i, j): rng.integers(0, 5, size=(5, 5, 5, 1))
              for i in range(2) for j in range(2)}
    alpha = SystemCocycle(system, coeffs, values)
    for text in ("n=1; t1", "n=1; t1^-2", "n=2; s1 s1", "n=2; s1^-1"):
        b = parse_word(text)
        for assignment in ([0] * b.strands, [1] * b.strands):
            got = statesum_for_system(b, system, alpha, assignment)
            want = brute_system_statesum(b, system, alpha, assignment)
            assert got == want, (text, assignment)


def test_mixed_component_assignment_has_no_colorings():
    system = mutual_shift_pair(5, (1, 2))
    coeffs = AbelianGroup((5,))
    zeros = {(i, j): np.zeros((5, 5, 5, 1), dtype=np.int64)
             for i in range(2) for j in range(2)}
    alpha = SystemCocycle(system, coeffs, zeros)
    b = parse_word("n=2; s1")          # one component through both strands
    val = statesum_for_system(b, system, alpha, [0, 1])
    assert val.colorings == 0
    assert val.value.terms == {}


def test_augmented_system_unknot_counts():
    system, alpha = augmented_system_cocycle(2, 2, 3)
    val = statesum_all_assignments(FramedBraidWord(1), system, alpha)
    assert val.colorings == 4 ** 2 + 6 ** 2
    assert val == identity_value(alpha.coeffs, 1, 52)


def test_missing_pair_rejected():
    system = mutual_shift_pair(5, (1, 2))
    coeffs = AbelianGroup((5,))
    alpha = SystemCocycle(system, coeffs,
                          {(0, 0): np.zeros((5, 5, 5, 1), dtype=np.int64)})
    b = parse_word("n=2; s1 s1")
    with pytest.raises(ValueError, match="index pair"):
        statesum_for_system(b, system, alpha, [0, 1])
