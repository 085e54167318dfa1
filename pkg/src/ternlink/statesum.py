"""State-sum invariants of framed braid closures colored by ternary racks.

A coloring assigns a pair (x1, x2) of carrier elements to each ribbon arc.
At a positive crossing the underpass pair maps through T with the overpass
pair as the last two arguments; at a negative crossing it maps through the
left inverse L; a twist unit on a strand carrying (x, y) maps the pair to
(T(x,x,y), T(y,x,y)).  Each crossing or twist contributes a Boltzmann
weight pair to the component that owns the underpassing ribbon, and the
invariant sums the resulting group-ring keys over all consistent colorings.
"""

import numpy as np

from .braid import closure_components
from .coeffs import AbelianGroup, GroupRingElement
from .cohomology import check_cocycle2

DEFAULT_MAX_COLORINGS = 10_000_000


class Coloring:
    """A consistent coloring: top pairs per strand plus an optional trace."""

    def __init__(self, strands, top_colors, trace=None, bottom_colors=None):
        self.strands = strands
        self.top_colors = tuple((int(a), int(b)) for a, b in top_colors)
        self.trace = None if trace is None else tuple(trace)
        self.bottom_colors = (None if bottom_colors is None
                              else tuple((int(a), int(b)) for a, b in bottom_colors))

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return (self.strands == other.strands
                and self.top_colors == other.top_colors)

    def __repr__(self):
        return "Coloring(%r)" % (self.top_colors,)


class InvariantValue:
    """Group-ring value of the state sum plus coloring bookkeeping.

    The augmentation of `value` always equals `colorings`.
    """

    def __init__(self, components, value, colorings):
        self.components = int(components)
        self.value = value
        self.colorings = int(colorings)

    def __eq__(self, other):
        if not isinstance(other, InvariantValue):
            return NotImplemented
        return (self.components == other.components
                and self.value == other.value)

    def __repr__(self):
        return ("InvariantValue(components=%d, colorings=%d, value=%r)"
                % (self.components, self.colorings, self.value))

    def to_json(self):
        f = len(self.value.base.factors) // (2 * self.components)
        terms = []
        for key, c in sorted(self.value.terms.items()):
            blocks = []
            for t in range(self.components):
                at = 2 * f * t
                a1 = list(key[at:at + f])
                a2 = list(key[at + f:at + 2 * f])
                if f == 1:
                    blocks.append([a1[0], a2[0]])
                else:
                    blocks.append([a1, a2])
            terms.append({"key": blocks, "coeff": c})
        return {"components": self.components,
                "terms": terms,
                "colorings": self.colorings}


def _rack_tables(structure):
    """Forward table, left-inverse table, and the twist map with its inverse."""
    T = structure.table
    m = structure.size
    L = structure.left_inverse
    if L is None:
        perm = np.argsort(T, axis=0, kind="stable")
        if not np.array_equal(np.take_along_axis(T, perm, axis=0),
                              np.broadcast_to(np.arange(m)[:, None, None], T.shape)):
            raise ValueError("structure is not a rack: T(-,y,z) is not bijective")
        L = perm
    x = np.arange(m)
    tw1 = T[x[:, None], x[:, None], x[None, :]]
    tw2 = T[x[None, :], x[:, None], x[None, :]]
    theta = tw1 * m + tw2                      # flat image of (x, y) -> pair
    flat = theta.reshape(-1)
    inv = np.full(m * m, -1, dtype=np.int64)
    inv[flat] = np.arange(m * m)
    if (inv < 0).any():
        raise ValueError("twist map is not bijective on this structure")
    return T, np.asarray(L, dtype=np.int64), inv


def _crossing_plan(b):
    """Per letter: (0-based position, sign, under strand, over strand)."""
    plan = []
    cur = list(range(b.strands))
    for i, sign in b.word:
        p = i - 1
        if sign > 0:
            under, over = cur[p], cur[p + 1]
        else:
            under, over = cur[p + 1], cur[p]
        plan.append((p, sign, under, over))
        cur[p], cur[p + 1] = cur[p + 1], cur[p]
    return plan


def propagate_coloring(b, top_colors, structure, forward_negative=False,
                       require_closure=True):
    """Propagate one coloring top to bottom; None when the closure fails.

    The trace records every twist unit and crossing with the colors it saw;
    the under entry holds the pair at the weight-bearing instance (incoming
    at positive crossings, outgoing at negative ones).  Propagation itself
    never fails; pass require_closure=False to keep the trace and bottom
    colors of a coloring that does not close up.
    """
    T, L, theta_inv = _rack_tables(structure)
    m = structure.size
    state = [(int(a), int(b)) for a, b in top_colors]
    if len(state) != b.strands:
        raise ValueError("need one color pair per strand")
    tops = tuple(state)
    trace = []
    for k in range(b.strands):
        r = b.twists[k]
        step = 1 if r > 0 else -1
        for _ in range(abs(r)):
            x, y = state[k]
            if step > 0:
                nxt = (int(T[x, x, y]), int(T[y, x, y]))
                weight_pair = (x, y)
            else:
                flat = theta_inv[x * m + y]
                nxt = (int(flat // m), int(flat % m))
                weight_pair = nxt
            trace.append({"kind": "twist", "strand": k + 1, "sign": step,
                          "pair_before": (x, y), "pair_after": nxt,
                          "under": weight_pair})
            state[k] = nxt
    for p, sign, _under, _over in _crossing_plan(b):
        before = tuple(state)
        a1, a2 = state[p]
        b1, b2 = state[p + 1]
        if sign > 0:
            out = (int(T[a1, b1, b2]), int(T[a2, b1, b2]))
            state[p], state[p + 1] = (b1, b2), out
            under_pair, over_pair = (a1, a2), (b1, b2)
        elif forward_negative:
            out = (int(T[b1, a1, a2]), int(T[b2, a1, a2]))
            state[p], state[p + 1] = out, (a1, a2)
            under_pair, over_pair = (b1, b2), (a1, a2)
        else:
            out = (int(L[b1, a1, a2]), int(L[b2, a1, a2]))
            state[p], state[p + 1] = out, (a1, a2)
            under_pair, over_pair = out, (a1, a2)
        trace.append({"kind": "crossing", "position": p + 1, "sign": sign,
                      "under": under_pair, "over": over_pair,
                      "before": before, "after": tuple(state)})
    if require_closure and tuple(state) != tops:
        return None
    return Coloring(b.strands, top_colors, trace, state)


def _vector_run(b, structure, psi_values, factors, comp_of_strand, n_components,
                forward_negative, max_colorings):
    """Shared vectorized engine: survivor mask, tops, weight exponents."""
    m = structure.size
    n = b.strands
    K = m ** (2 * n)
    if K > max_colorings:
        raise ValueError("coloring space %d exceeds the %d bound"
                         % (K, max_colorings))
    T, L, theta_inv = _rack_tables(structure)
    Tf = T.reshape(-1)
    Lf = L.reshape(-1)
    grids = np.indices((m,) * (2 * n), dtype=np.int64).reshape(2 * n, K)
    top1 = grids[0::2].T.copy()
    top2 = grids[1::2].T.copy()
    cur1 = top1.copy()
    cur2 = top2.copy()
    f = len(factors)
    W1 = np.zeros((K, n_components, f), dtype=np.int64)
    W2 = np.zeros((K, n_components, f), dtype=np.int64)

    for k in range(n):
        r = b.twists[k]
        step = 1 if r > 0 else -1
        comp = comp_of_strand[k]
        for _ in range(abs(r)):
            x, y = cur1[:, k].copy(), cur2[:, k].copy()
            if step > 0:
                W1[:, comp] += psi_values[(x * m + x) * m + y]
                W2[:, comp] += psi_values[(y * m + x) * m + y]
                cur1[:, k] = Tf[(x * m + x) * m + y]
                cur2[:, k] = Tf[(y * m + x) * m + y]
            else:
                flat = theta_inv[x * m + y]
                px, py = flat // m, flat % m
                W1[:, comp] -= psi_values[(px * m + px) * m + py]
                W2[:, comp] -= psi_values[(py * m + px) * m + py]
                cur1[:, k] = px
                cur2[:, k] = py

    for p, sign, under, _over in _crossing_plan(b):
        comp = comp_of_strand[under]
        a1, a2 = cur1[:, p].copy(), cur2[:, p].copy()
        o1, o2 = cur1[:, p + 1].copy(), cur2[:, p + 1].copy()
        if sign > 0:
            idx1 = (a1 * m + o1) * m + o2
            idx2 = (a2 * m + o1) * m + o2
            W1[:, comp] += psi_values[idx1]
            W2[:, comp] += psi_values[idx2]
            cur1[:, p], cur2[:, p] = o1, o2
            cur1[:, p + 1], cur2[:, p + 1] = Tf[idx1], Tf[idx2]
        else:
            if forward_negative:
                u1 = Tf[(o1 * m + a1) * m + a2]
                u2 = Tf[(o2 * m + a1) * m + a2]
                w1 = (o1 * m + a1) * m + a2
                w2 = (o2 * m + a1) * m + a2
            else:
                u1 = Lf[(o1 * m + a1) * m + a2]
                u2 = Lf[(o2 * m + a1) * m + a2]
                w1 = (u1 * m + a1) * m + a2
                w2 = (u2 * m + a1) * m + a2
            W1[:, comp] -= psi_values[w1]
            W2[:, comp] -= psi_values[w2]
            cur1[:, p], cur2[:, p] = u1, u2
            cur1[:, p + 1], cur2[:, p + 1] = a1, a2

    mask = np.logical_and((cur1 == top1).all(axis=1), (cur2 == top2).all(axis=1))
    return mask, top1, top2, W1, W2


def _collect_invariant(coeffs, t, W1, W2, mask):
    f = len(coeffs.factors)
    keys = np.empty((int(mask.sum()), t * 2 * f), dtype=np.int64)
    for c in range(t):
        keys[:, 2 * f * c:2 * f * c + f] = W1[mask, c]
        keys[:, 2 * f * c + f:2 * f * c + 2 * f] = W2[mask, c]
    base = AbelianGroup(tuple(coeffs.factors) * (2 * t))
    for j, k in enumerate(base.factors):
        if k:
            keys[:, j] %= k
    if keys.shape[0]:
        uniq, counts = np.unique(keys, axis=0, return_counts=True)
    else:
        uniq, counts = keys, np.zeros(0, dtype=np.int64)
    terms = {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, counts)}
    value = GroupRingElement(base, terms)
    return InvariantValue(t, value, int(mask.sum()))


def enumerate_colorings(b, structure, forward_negative=False,
                        max_colorings=DEFAULT_MAX_COLORINGS, with_trace=False):
    """All consistent colorings, top pairs in lexicographic order."""
    info = closure_components(b)
    comp_of = _component_of_strand(info, b.strands)
    zero = np.zeros((structure.size ** 3, 1), dtype=np.int64)
    mask, top1, top2, _W1, _W2 = _vector_run(
        b, structure, zero, (2,), comp_of, len(info.components),
        forward_negative, max_colorings)
    out = []
    for row in np.nonzero(mask)[0]:
        tops = list(zip(top1[row].tolist(), top2[row].tolist()))
        if with_trace:
            out.append(propagate_coloring(b, tops, structure,
                                          forward_negative=forward_negative))
        else:
            out.append(Coloring(b.strands, tops))
    return out


def _component_of_strand(info, n):
    comp_of = [0] * n
    for c, members in enumerate(info.components):
        for s in members:
            comp_of[s - 1] = c
    return comp_of


def _statesum(b, structure, psi, verify, forward_negative, max_colorings):
    if verify:
        rep = check_cocycle2(psi)
        if not rep.ok:
            raise ValueError("weight cochain fails the 2-cocycle condition at %s"
                             % (rep.counterexample,))
    if psi.structure.size != structure.size or not np.array_equal(
            psi.structure.table, structure.table):
        raise ValueError("cochain was built over a different structure")
    info = closure_components(b)
    t = len(info.components)
    comp_of = _component_of_strand(info, b.strands)
    mask, _t1, _t2, W1, W2 = _vector_run(
        b, structure, psi.values, psi.coeffs.factors, comp_of, t,
        forward_negative, max_colorings)
    return _collect_invariant(psi.coeffs, t, W1, W2, mask)


def ribbon_invariant(b, structure, psi, verify=True, forward_negative=False,
                     max_colorings=DEFAULT_MAX_COLORINGS):
    """The knot-case state sum; requires a one-component closure."""
    info = closure_components(b)
    if len(info.components) != 1:
        raise ValueError("closure has %d components; use vector_invariant"
                         % len(info.components))
    return _statesum(b, structure, psi, verify, forward_negative, max_colorings)


def vector_invariant(b, structure, psi, verify=True, forward_negative=False,
                     max_colorings=DEFAULT_MAX_COLORINGS):
    """The link-case state sum with one weight pair per component."""
    return _statesum(b, structure, psi, verify, forward_negative, max_colorings)


def _system_rack_inverse(table):
    mi = table.shape[0]
    perm = np.argsort(table, axis=0, kind="stable")
    if not np.array_equal(np.take_along_axis(table, perm, axis=0),
                          np.broadcast_to(np.arange(mi)[:, None, None], table.shape)):
        raise ValueError("system table is not a rack in its first slot")
    return perm


def statesum_for_system(b, system, alpha, assignment,
                        max_colorings=DEFAULT_MAX_COLORINGS):
    """State sum with strand k colored by carrier assignment[k].

    The caller is responsible for alpha passing check_system_cocycle; the
    budgeted system check is not rerun here.  Strands whose closure cycle
    mixes carrier indices admit no coloring and contribute zero.
    """
    n = b.strands
    assignment = [int(a) for a in assignment]
    if len(assignment) != n:
        raise ValueError("need one carrier index per strand")
    for a in assignment:
        if not 0 <= a < system.n_indices:
            raise ValueError("carrier index %d out of range" % a)
    info = closure_components(b)
    t = len(info.components)
    comp_of = _component_of_strand(info, n)
    coeffs = alpha.coeffs
    f = len(coeffs.factors)
    base = AbelianGroup(tuple(coeffs.factors) * (2 * t))

    for members in info.components:
        idx = {assignment[s - 1] for s in members}
        if len(idx) > 1:
            return InvariantValue(t, GroupRingElement(base, {}), 0)
    needed = set()
    for k in range(n):
        if b.twists[k]:
            needed.add((assignment[k], assignment[k]))
    for p, sign, under, over in _crossing_plan(b):
        needed.add((assignment[under], assignment[over]))
    for pair in sorted(needed):
        if pair not in alpha.values:
            raise ValueError("system cocycle has no entry for index pair %s"
                             % (pair,))

    sizes = [system.sizes[a] for a in assignment]
    K = 1
    for s in sizes:
        K *= s * s
    if K > max_colorings:
        raise ValueError("coloring space %d exceeds the %d bound"
                         % (K, max_colorings))
    dims = []
    for s in sizes:
        dims.extend((s, s))
    mesh = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in dims],
                       indexing="ij")
    grids = np.stack([g.reshape(-1) for g in mesh])
    top1 = grids[0::2].T.copy()
    top2 = grids[1::2].T.copy()
    cur1 = top1.copy()
    cur2 = top2.copy()
    W1 = np.zeros((K, t, f), dtype=np.int64)
    W2 = np.zeros((K, t, f), dtype=np.int64)

    for k in range(n):
        r = b.twists[k]
        if not r:
            continue
        i = assignment[k]
        Tii = system.tables[(i, i)]
        Aii = alpha.values[(i, i)]
        mi = system.sizes[i]
        x1 = np.arange(mi)
        th1 = Tii[x1[:, None], x1[:, None], x1[None, :]]
        th2 = Tii[x1[None, :], x1[:, None], x1[None, :]]
        flat = (th1 * mi + th2).reshape(-1)
        inv = np.full(mi * mi, -1, dtype=np.int64)
        inv[flat] = np.arange(mi * mi)
        if (inv < 0).any():
            raise ValueError("twist map is not bijective on carrier %d" % i)
        step = 1 if r > 0 else -1
        comp = comp_of[k]
        for _ in range(abs(r)):
            x, y = cur1[:, k].copy(), cur2[:, k].copy()
            if step > 0:
                W1[:, comp] += Aii[x, x, y]
                W2[:, comp] += Aii[y, x, y]
                cur1[:, k] = Tii[x, x, y]
                cur2[:, k] = Tii[y, x, y]
            else:
                fl = inv[x * mi + y]
                px, py = fl // mi, fl % mi
                W1[:, comp] -= Aii[px, px, py]
                W2[:, comp] -= Aii[py, px, py]
                cur1[:, k] = px
                cur2[:, k] = py

    inverse_cache = {}
    for p, sign, under, over in _crossing_plan(b):
        i, j = assignment[under], assignment[over]
        Tij = system.tables[(i, j)]
        Aij = alpha.values[(i, j)]
        comp = comp_of[under]
        if sign > 0:
            a1, a2 = cur1[:, p].copy(), cur2[:, p].copy()
            o1, o2 = cur1[:, p + 1].copy(), cur2[:, p + 1].copy()
            W1[:, comp] += Aij[a1, o1, o2]
            W2[:, comp] += Aij[a2, o1, o2]
            cur1[:, p], cur2[:, p] = o1, o2
            cur1[:, p + 1], cur2[:, p + 1] = Tij[a1, o1, o2], Tij[a2, o1, o2]
        else:
            o1, o2 = cur1[:, p].copy(), cur2[:, p].copy()
            u1, u2 = cur1[:, p + 1].copy(), cur2[:, p + 1].copy()
            if (i, j) not in inverse_cache:
                inverse_cache[(i, j)] = _system_rack_inverse(Tij)
            Lij = inverse_cache[(i, j)]
            n1 = Lij[u1, o1, o2]
            n2 = Lij[u2, o1, o2]
            W1[:, comp] -= Aij[n1, o1, o2]
            W2[:, comp] -= Aij[n2, o1, o2]
            cur1[:, p], cur2[:, p] = n1, n2
            cur1[:, p + 1], cur2[:, p + 1] = o1, o2

    mask = np.logical_and((cur1 == top1).all(axis=1), (cur2 == top2).all(axis=1))
    return _collect_invariant(coeffs, t, W1, W2, mask)


def statesum_all_assignments(b, system, alpha,
                             max_colorings=DEFAULT_MAX_COLORINGS):
    """Sum of statesum_for_system over every carrier assignment."""
    n = b.strands
    total = None
    idxs = [0] * n
    while True:
        part = statesum_for_system(b, system, alpha, idxs,
                                   max_colorings=max_colorings)
        if total is None:
            total = part
        else:
            total = InvariantValue(part.components,
                                   total.value + part.value,
                                   total.colorings + part.colorings)
        pos = n - 1
        while pos >= 0:
            idxs[pos] += 1
            if idxs[pos] < system.n_indices:
                break
            idxs[pos] = 0
            pos -= 1
        if pos < 0:
            return total
