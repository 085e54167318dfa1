"""Low-degree cohomology of finite ternary self-distributive structures.

Cochains take values in a finitely generated abelian coefficient group,
represented additively as integer coordinate vectors (one coordinate per
cyclic factor, factor 0 meaning an infinite factor).  The differentials are

    (d1 f)(x, y, z)        = f(x) - f(T(x, y, z))
    (d2 p)(x, y, z, u, v)  = p(x,y,z) - p(T(x,u,v), T(y,u,v), T(z,u,v))
                             - p(x,u,v) + p(T(x,y,z), u, v)

and H2 = ker d2 / im d1 is computed by exact Smith reduction of the two
matrices.  The chain-level boundary operators on (2n+1)-tuples carry
alternating signs, so that the second differential above is the transpose of
the degree-2 boundary and the first is minus the transpose of the degree-1
boundary; ``boundary_map`` exposes the signed matrices for cross-checks.
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

from ._intmat import (
    smith_normal_form,
    smith_normal_form_np,
    solve_integer,
    solve_mod,
)
from .coeffs import AbelianGroup
from .tsd import (
    CheckReport,
    CompatibleSystem,
    CoverageReport,
    ResourceLimitError,
    TernaryStructure,
    alexander_gfamily_sl2z3,
    gfamily_to_compatible,
    heap_of_group,
    cyclic_group,
    dihedral_group_d3,
    sl2z3_group,
    structure_from_json,
)

DEFAULT_MAX_COCHAIN_DIM = 216


def _reduce_columns(values, factors):
    out = np.array(values, dtype=np.int64)
    for pos, k in enumerate(factors):
        if k:
            out[..., pos] %= k
    return out


class Cochain1:
    """A map X -> A, stored as an (m, f) coordinate array."""

    def __init__(self, structure, coeffs, values):
        self.structure = structure
        self.coeffs = coeffs
        vals = np.asarray(values, dtype=np.int64)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape != (structure.size, len(coeffs.factors)):
            raise ValueError("expected shape %r, got %r"
                             % ((structure.size, len(coeffs.factors)), vals.shape))
        self.values = _reduce_columns(vals, coeffs.factors)

    def value(self, x):
        return tuple(int(v) for v in self.values[x])

    def __eq__(self, other):
        return (isinstance(other, Cochain1)
                and self.structure == other.structure
                and self.coeffs.factors == other.coeffs.factors
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        return "Cochain1(%s, %s)" % (self.structure.name or "structure",
                                     self.coeffs)

    def to_json(self, inline_structure=False):
        return _cochain_json(self, inline_structure)


class Cochain2:
    """A map X^3 -> A, stored as an (m^3, f) coordinate array.

    The flat index of (x, y, z) is (x*m + y)*m + z.
    """

    def __init__(self, structure, coeffs, values):
        self.structure = structure
        self.coeffs = coeffs
        m = structure.size
        vals = np.asarray(values, dtype=np.int64)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape != (m ** 3, len(coeffs.factors)):
            raise ValueError("expected shape %r, got %r"
                             % ((m ** 3, len(coeffs.factors)), vals.shape))
        self.values = _reduce_columns(vals, coeffs.factors)

    def value(self, x, y, z):
        m = self.structure.size
        return tuple(int(v) for v in self.values[(x * m + y) * m + z])

    def _like(self, values):
        return Cochain2(self.structure, self.coeffs, values)

    def _check_mate(self, other):
        if not isinstance(other, Cochain2):
            raise TypeError("can only combine with another Cochain2")
        if other.structure != self.structure or other.coeffs.factors != self.coeffs.factors:
            raise ValueError("cochains live on different complexes")

    def __add__(self, other):
        self._check_mate(other)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        self._check_mate(other)
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def __eq__(self, other):
        return (isinstance(other, Cochain2)
                and self.structure == other.structure
                and self.coeffs.factors == other.coeffs.factors
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        nz = int(np.count_nonzero(self.values.any(axis=1)))
        return "Cochain2(%s, %s, support=%d)" % (
            self.structure.name or "structure", self.coeffs, nz)

    def to_json(self, inline_structure=False):
        return _cochain_json(self, inline_structure)


def _cochain_json(c, inline_structure):
    if inline_structure or not c.structure.name:
        struct = c.structure.to_json()
    else:
        struct = c.structure.name
    return {
        "structure": struct,
        "coeffs": {"factors": list(c.coeffs.factors)},
        "values": [int(v) for v in c.values.reshape(-1)],
    }


def cochain_from_json(obj, resolve=None):
    """Rebuild a 1- or 2-cochain from its JSON form.

    ``resolve`` maps a structure name to a TernaryStructure; it is required
    when the file stores a name instead of an inline table.
    """
    struct = obj["structure"]
    if isinstance(struct, str):
        if resolve is None:
            raise ValueError("structure %r needs a resolver" % struct)
        structure = resolve(struct)
    else:
        structure = structure_from_json(struct)
    coeffs = AbelianGroup(tuple(obj["coeffs"]["factors"]))
    flat = np.array(obj["values"], dtype=np.int64)
    f = len(coeffs.factors)
    m = structure.size
    if flat.size == m * f:
        return Cochain1(structure, coeffs, flat.reshape(m, f))
    if flat.size == m ** 3 * f:
        return Cochain2(structure, coeffs, flat.reshape(m ** 3, f))
    raise ValueError("value array has %d entries; expected %d or %d"
                     % (flat.size, m * f, m ** 3 * f))


def zero_cochain2(structure, coeffs):
    f = len(coeffs.factors)
    return Cochain2(structure, coeffs,
                    np.zeros((structure.size ** 3, f), dtype=np.int64))


def characteristic_cochain2(structure, coeffs, triple, value=None):
    """chi_{(a,b,c)}: the indicator of one triple, scaled by ``value``.

    ``value`` defaults to the unit coordinate vector (1, 0, ..., 0).
    """
    m = structure.size
    f = len(coeffs.factors)
    a, b, c = triple
    vals = np.zeros((m ** 3, f), dtype=np.int64)
    if value is None:
        value = (1,) + (0,) * (f - 1)
    vals[(a * m + b) * m + c] = np.array(value, dtype=np.int64)
    return Cochain2(structure, coeffs, vals)


def delta1(f):
    """First differential: (d1 f)(x,y,z) = f(x) - f(T(x,y,z))."""
    S = f.structure
    m = S.size
    xs = np.repeat(np.arange(m), m * m)
    ts = S.table.reshape(-1)
    return Cochain2(S, f.coeffs, f.values[xs] - f.values[ts])


def delta2(p):
    """Second differential, evaluated on all of X^5.

    Returns an (m^5, f) array already reduced modulo the finite factors; the
    flat index of (x,y,z,u,v) is lexicographic.
    """
    S = p.structure
    m = S.size
    T = S.table
    idx = np.arange(m)
    x = idx[:, None, None, None, None]
    y = idx[None, :, None, None, None]
    z = idx[None, None, :, None, None]
    u = idx[None, None, None, :, None]
    v = idx[None, None, None, None, :]

    def flat(a, b, c):
        return (a * m + b) * m + c

    i1 = np.broadcast_to(flat(x, y, z), (m,) * 5)
    i2 = flat(T[x, u, v], T[y, u, v], T[z, u, v])
    i3 = np.broadcast_to(flat(x, u, v), (m,) * 5)
    i4 = flat(np.broadcast_to(T[x, y, z], (m,) * 5), u, v)
    vals = (p.values[i1.reshape(-1)] - p.values[i2.reshape(-1)]
            - p.values[i3.reshape(-1)] + p.values[i4.reshape(-1)])
    return _reduce_columns(vals, p.coeffs.factors)


def check_cocycle2(p):
    """Exhaustively test the 2-cocycle condition; counterexample is lex-first."""
    m = p.structure.size
    total = m ** 5
    vals = delta2(p)
    bad = vals.any(axis=1)
    if not bad.any():
        return CheckReport(True, None, total, total, identity="2-cocycle condition")
    first = int(np.argmax(bad))
    tup = tuple(int(t) for t in np.unravel_index(first, (m,) * 5))
    return CheckReport(False, tup, first + 1, total, identity="2-cocycle condition")


def d1_matrix(structure):
    """Matrix of delta1 with rows indexed by X^3 and columns by X."""
    m = structure.size
    M = np.zeros((m ** 3, m), dtype=np.int64)
    rows = np.arange(m ** 3)
    xs = np.repeat(np.arange(m), m * m)
    ts = structure.table.reshape(-1)
    np.add.at(M, (rows, xs), 1)
    np.add.at(M, (rows, ts), -1)
    return M


def d2_matrix(structure):
    """Matrix of delta2 with rows indexed by X^5 and columns by X^3."""
    m = structure.size
    T = structure.table
    idx = np.arange(m)
    x = idx[:, None, None, None, None]
    y = idx[None, :, None, None, None]
    z = idx[None, None, :, None, None]
    u = idx[None, None, None, :, None]
    v = idx[None, None, None, None, :]

    def flat(a, b, c):
        return (a * m + b) * m + c

    shape = (m,) * 5
    cols1 = np.broadcast_to(flat(x, y, z), shape).reshape(-1)
    cols2 = flat(T[x, u, v], T[y, u, v], T[z, u, v]).reshape(-1)
    cols3 = np.broadcast_to(flat(x, u, v), shape).reshape(-1)
    cols4 = flat(np.broadcast_to(T[x, y, z], shape), u, v).reshape(-1)
    M = np.zeros((m ** 5, m ** 3), dtype=np.int64)
    rows = np.arange(m ** 5)
    np.add.at(M, (rows, cols1), 1)
    np.add.at(M, (rows, cols2), -1)
    np.add.at(M, (rows, cols3), -1)
    np.add.at(M, (rows, cols4), 1)
    return M


def boundary_map(structure, n):
    """Signed boundary matrix on free chains of (2n+1)-tuples, n in {1,2,3}.

    The i-th face (i = 1..n) drops the i-th pair; its second half applies
    T(-, y_i, z_i) to the head and to every pair before the dropped one.  The
    sign is (-1)^i, so transpose(partial_2) equals the delta2 matrix and
    transpose(partial_1) equals minus the delta1 matrix.
    """
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    m = structure.size
    T = structure.table
    rows, cols = m ** (2 * n - 1), m ** (2 * n + 1)
    M = np.zeros((rows, cols), dtype=np.int64)
    tuples = np.indices((m,) * (2 * n + 1)).reshape(2 * n + 1, -1)

    def pack(parts):
        out = np.zeros(cols, dtype=np.int64)
        for part in parts:
            out = out * m + part
        return out

    col_idx = np.arange(cols)
    for i in range(1, n + 1):
        yi, zi = tuples[2 * i - 1], tuples[2 * i]
        keep = [tuples[0]]
        acted = [T[tuples[0], yi, zi]]
        for j in range(1, n + 1):
            if j == i:
                continue
            if j < i:
                keep.extend([tuples[2 * j - 1], tuples[2 * j]])
                acted.extend([T[tuples[2 * j - 1], yi, zi],
                              T[tuples[2 * j], yi, zi]])
            else:
                keep.extend([tuples[2 * j - 1], tuples[2 * j]])
                acted.extend([tuples[2 * j - 1], tuples[2 * j]])
        sign = -1 if i % 2 else 1
        np.add.at(M, (pack(keep), col_idx), sign)
        np.add.at(M, (pack(acted), col_idx), -sign)
    return M


def is_coboundary2(p):
    """Decide whether p = d1 f has a solution; return (verdict, witness).

    The solve runs factor by factor: an exact integer solve for infinite
    factors and a modular solve for each finite one.  A found witness is
    re-substituted through delta1 before being returned.
    """
    S = p.structure
    factors = p.coeffs.factors
    m = S.size
    D1 = [[int(v) for v in row] for row in d1_matrix(S)]
    witness = np.zeros((m, len(factors)), dtype=np.int64)
    for pos, k in enumerate(factors):
        rhs = [int(v) for v in p.values[:, pos]]
        if k:
            sol = solve_mod(D1, rhs, k)
        else:
            sol = solve_integer(D1, rhs)
        if sol is None:
            return False, None
        witness[:, pos] = sol
    f = Cochain1(S, p.coeffs, witness)
    if delta1(f) != Cochain2(S, p.coeffs, p.values):
        raise AssertionError("witness failed re-substitution")
    return True, f


@dataclass
class H2Report:
    structure: TernaryStructure
    coeffs: AbelianGroup
    free_rank: int
    torsion: list
    cocycle_basis: list
    generator_orders: list

    def group_description(self):
        parts = ["Z"] * self.free_rank + ["Z%d" % t for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "H2Report(%s; %s -> %s)" % (
            self.structure.name or "structure", self.coeffs,
            self.group_description())

    def to_json(self):
        return {
            "structure": (self.structure.name or self.structure.to_json()),
            "coeffs": {"factors": list(self.coeffs.factors)},
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "generator_orders": list(self.generator_orders),
            "generators": [c.to_json() for c in self.cocycle_basis],
        }


def _embed_column(column, pos, n_factors):
    out = np.zeros((len(column), n_factors), dtype=np.int64)
    out[:, pos] = column
    return out


def compute_H2(structure, coeffs, max_dim=DEFAULT_MAX_COCHAIN_DIM):
    """ker d2 / im d1 over each coefficient factor, by Smith reduction.

    For an infinite factor the kernel lattice of the d2 matrix is saturated,
    the image of d1 is expressed in kernel coordinates and a second Smith
    form reads off free rank and torsion.  For a finite factor Z_k the
    mod-k kernel lattice is generated from the Smith form of d2, the
    coboundary-plus-k lattice is expressed in its coordinates, and the
    quotient's invariant factors come from a final Smith form.  Structures
    with m^3 above ``max_dim`` are refused.
    """
    m = structure.size
    if m ** 3 > max_dim:
        raise ResourceLimitError(
            "cochain dimension m^3 = %d exceeds the configured bound %d"
            % (m ** 3, max_dim))
    factors = coeffs.factors
    if not factors:
        raise ValueError("coefficient group needs at least one factor")
    D1 = d1_matrix(structure)
    D2 = d2_matrix(structure)
    sf = smith_normal_form_np([[int(v) for v in row] for row in D2],
                              want_v=True, want_vinv=True)
    r = sf.rank
    V = np.array(sf.V, dtype=np.int64)
    Vinv = np.array(sf.Vinv, dtype=np.int64)
    dim = m ** 3

    free_rank = 0
    orders = []
    basis = []
    for pos, k in enumerate(factors):
        if k == 0:
            K = V[:, r:]
            coords = (Vinv @ D1)
            if np.any(coords[:r, :]):
                raise AssertionError("coboundaries escaped the kernel lattice")
            Y = [[int(v) for v in row] for row in coords[r:, :]]
            if not Y:
                continue
            sf2 = smith_normal_form(Y, want_u=False, want_uinv=True,
                                    want_v=False, want_vinv=False)
            U2inv = np.array(sf2.Uinv, dtype=np.int64)
            gens = K @ U2inv
            for i in range(len(Y)):
                e = sf2.diag[i] if i < len(sf2.diag) else 0
                if e == 1:
                    continue
                basis.append(Cochain2(structure, coeffs,
                                      _embed_column(gens[:, i], pos, len(factors))))
                if e == 0:
                    free_rank += 1
                    orders.append(0)
                else:
                    orders.append(e)
        else:
            t = np.ones(dim, dtype=np.int64)
            for i in range(r):
                t[i] = k // gcd(sf.diag[i], k)
            L = V * t[None, :]
            gen_block = np.concatenate(
                [D1, k * np.eye(dim, dtype=np.int64)], axis=1)
            raw = Vinv @ gen_block
            if np.any(raw % t[:, None]):
                raise AssertionError("coboundary lattice escaped the kernel lattice")
            C = [[int(v) for v in row] for row in (raw // t[:, None])]
            sf2 = smith_normal_form_np(C, want_u=False, want_uinv=True,
                                       want_v=False, want_vinv=False)
            U2inv = np.array(sf2.Uinv, dtype=np.int64)
            gens = (L @ U2inv) % k
            for i in range(dim):
                e = sf2.diag[i] if i < len(sf2.diag) else 0
                if e == 0 or k % e:
                    raise AssertionError("quotient exponent does not divide %d" % k)
                if e == 1:
                    continue
                basis.append(Cochain2(structure, coeffs,
                                      _embed_column(gens[:, i], pos, len(factors))))
                orders.append(e)
    torsion = sorted(o for o in orders if o > 1)
    return H2Report(structure, coeffs, free_rank, torsion, basis, orders)


def phi_i_cocycle(m, i):
    """Indicator cocycle on the cyclic heap: 1 exactly when z - y = i mod m."""
    if not 0 <= i < m:
        raise ValueError("need 0 <= i < m")
    S = heap_of_group(cyclic_group(m))
    coeffs = AbelianGroup((0,))
    idx = np.arange(m)
    diff = (idx[None, None, :] - idx[None, :, None]) % m
    vals = np.broadcast_to((diff == i), (m, m, m)).reshape(-1, 1)
    return Cochain2(S, coeffs, vals.astype(np.int64))


D3_PSI_PAIRS = ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3))


def d3_psi_cocycle():
    """The sum-of-characteristic-functions cocycle on the dihedral heap.

    The support pairs (y, z) walk the rotation orbit e -> r -> r^2 and the
    reflection orbit s -> sr -> sr^2; equivalently the value at (x, y, z)
    is 1 exactly when z = r y.  Coefficients are Z_3.
    """
    G = dihedral_group_d3()
    S = heap_of_group(G)
    coeffs = AbelianGroup((3,))
    m = S.size
    vals = np.zeros((m ** 3, 1), dtype=np.int64)
    for x in range(m):
        for (y, z) in D3_PSI_PAIRS:
            vals[(x * m + y) * m + z] = 1
    return Cochain2(S, coeffs, vals)


# ---------------------------------------------------------------------------
# Compatible systems of 2-cocycles


class SystemCocycle:
    """Pair-indexed family alpha_ij : X_i x X_j x X_j -> A.

    ``values`` maps an index pair (i, j) to an (m_i, m_j, m_j, f) array;
    pairs absent from the mapping are excluded from every check (the
    label-cocycle construction below excludes pairs whose labels make its
    defining formula undefined).
    """

    def __init__(self, system, coeffs, values, name=None):
        self.system = system
        self.coeffs = coeffs
        self.name = name
        f = len(coeffs.factors)
        store = {}
        for (i, j), arr in values.items():
            if (i, j) not in system.tables:
                raise ValueError("pair (%d, %d) is not part of the system" % (i, j))
            arr = np.asarray(arr, dtype=np.int64)
            want = (system.sizes[i], system.sizes[j], system.sizes[j])
            if arr.shape == want:
                arr = arr[..., None]
            if arr.shape != want + (f,):
                raise ValueError("alpha_%d%d has shape %r, expected %r"
                                 % (i, j, arr.shape, want + (f,)))
            store[(i, j)] = _reduce_columns(arr, coeffs.factors)
        self.values = store

    def pairs(self):
        return sorted(self.values.keys())

    def diagonal_cochain(self, i):
        """alpha_ii as a plain 2-cochain over the diagonal structure T_ii."""
        if (i, i) not in self.values:
            raise ValueError("pair (%d, %d) is not defined" % (i, i))
        S = TernaryStructure(self.system.tables[(i, i)],
                             name="%s[%d]" % (self.system.name or "system", i))
        m = self.system.sizes[i]
        return Cochain2(S, self.coeffs,
                        self.values[(i, i)].reshape(m ** 3, -1))

    def __repr__(self):
        return "SystemCocycle(%s, %d pairs)" % (
            self.name or self.system.name or "system", len(self.values))

    def to_json(self):
        return {
            "system": self.system.to_json(),
            "coeffs": {"factors": list(self.coeffs.factors)},
            "values": {"%d,%d" % p: [int(v) for v in arr.reshape(-1)]
                       for p, arr in sorted(self.values.items())},
        }


def system_cocycle_from_json(obj):
    system = CompatibleSystem.from_json(obj["system"])
    coeffs = AbelianGroup(tuple(obj["coeffs"]["factors"]))
    f = len(coeffs.factors)
    values = {}
    for key, flat in obj["values"].items():
        i, j = (int(t) for t in key.split(","))
        shape = (system.sizes[i], system.sizes[j], system.sizes[j], f)
        values[(i, j)] = np.array(flat, dtype=np.int64).reshape(shape)
    return SystemCocycle(system, coeffs, values)


def system_coboundary(system, fs, coeffs):
    """Build the coboundary system of a family of 1-cochains f_i.

    Each pair gets (d f)_ij(x, y1, y2) = f_i(x) - f_i(T_ij(x, y1, y2)); the
    dependence on j enters through the pair operation.
    """
    f = len(coeffs.factors)
    arrs = []
    for i, size in enumerate(system.sizes):
        a = np.asarray(fs[i], dtype=np.int64)
        if a.ndim == 1:
            a = a[:, None]
        if a.shape != (size, f):
            raise ValueError("f_%d has shape %r, expected %r"
                             % (i, a.shape, (size, f)))
        arrs.append(a)
    values = {}
    for (i, j), T in system.tables.items():
        fi = arrs[i]
        values[(i, j)] = fi[:, None, None, :] - fi[T]
    return SystemCocycle(system, coeffs, values, name="coboundary")


def _system_pair_terms(alpha, i, j, k):
    sys_ = alpha.system
    Tij = sys_.tables[(i, j)]
    Tik = sys_.tables[(i, k)]
    Tjk = sys_.tables[(j, k)]
    Aij = alpha.values[(i, j)]
    Aik = alpha.values[(i, k)]
    return Tij, Tik, Tjk, Aij, Aik


def _system_triple_exhaustive(alpha, i, j, k):
    Tij, Tik, Tjk, Aij, Aik = _system_pair_terms(alpha, i, j, k)
    a, b, c = (alpha.system.sizes[t] for t in (i, j, k))
    x = np.arange(a)[:, None, None, None, None]
    y = np.arange(b)[None, :, None, None, None]
    z = np.arange(b)[None, None, :, None, None]
    u = np.arange(c)[None, None, None, :, None]
    v = np.arange(c)[None, None, None, None, :]
    txyz = Tij[x, y, z]
    lhs = Aij[x, y, z] + Aik[txyz, u, v]
    rhs = Aik[x, u, v] + Aij[Tik[x, u, v], Tjk[y, u, v], Tjk[z, u, v]]
    diff = _reduce_columns(lhs - rhs, alpha.coeffs.factors)
    bad = diff.any(axis=-1)
    if not bad.any():
        return None
    flat = int(np.argmax(bad.reshape(-1)))
    xx, yy, zz, uu, vv = np.unravel_index(flat, (a, b, b, c, c))
    return (i, j, k, int(xx), int(yy), int(zz), int(uu), int(vv))


def _system_triple_sampled(alpha, i, j, k, count, rng):
    Tij, Tik, Tjk, Aij, Aik = _system_pair_terms(alpha, i, j, k)
    a, b, c = (alpha.system.sizes[t] for t in (i, j, k))
    x = rng.integers(0, a, size=count)
    y = rng.integers(0, b, size=count)
    z = rng.integers(0, b, size=count)
    u = rng.integers(0, c, size=count)
    v = rng.integers(0, c, size=count)
    lhs = Aij[x, y, z] + Aik[Tij[x, y, z], u, v]
    rhs = Aik[x, u, v] + Aij[Tik[x, u, v], Tjk[y, u, v], Tjk[z, u, v]]
    diff = _reduce_columns(lhs - rhs, alpha.coeffs.factors)
    bad = diff.any(axis=-1)
    if bad.any():
        w = int(np.argmax(bad))
        return (i, j, k, int(x[w]), int(y[w]), int(z[w]), int(u[w]), int(v[w]))
    return None


def check_system_cocycle(alpha, budget=100_000_000, seed=0, exhaustive=False):
    """Verify the mixed 2-cocycle condition across defined index triples.

    A triple (i, j, k) participates when both alpha_ij and alpha_ik are
    defined; budgeting and coverage reporting mirror the compatibility check
    of the underlying system.
    """
    defined = set(alpha.values.keys())
    triples = [(i, j, k) for (i, j) in sorted(defined)
               for k in range(alpha.system.n_indices) if (i, k) in defined]
    sizes = alpha.system.sizes

    def cells(t):
        i, j, k = t
        return sizes[i] * sizes[j] ** 2 * sizes[k] ** 2

    total = sum(cells(t) for t in triples)
    if total == 0:
        return CoverageReport(True, None, 0, 0, "exhaustive", seed, 1.0)
    if exhaustive or total <= budget:
        checked = 0
        for t in triples:
            bad = _system_triple_exhaustive(alpha, *t)
            if bad is not None:
                return CoverageReport(False, bad, checked, total,
                                      "exhaustive", seed, checked / total)
            checked += cells(t)
        return CoverageReport(True, None, total, total, "exhaustive", seed, 1.0)
    rng = np.random.default_rng(seed)
    checked = 0
    share = budget / total
    for t in triples:
        count = max(1, int(round(cells(t) * share)))
        bad = _system_triple_sampled(alpha, *t, count, rng)
        if bad is not None:
            return CoverageReport(False, bad, checked, total,
                                  "sampled", seed, checked / total)
        checked += count
    return CoverageReport(True, None, checked, total, "sampled", seed,
                          checked / total)


def is_system_trivial(alpha):
    """Decide whether alpha is a system coboundary; return (verdict, fs).

    Every constraint f_i(x) - f_i(T_ij(x,y,z)) = alpha_ij(x,y,z) relates two
    values of the same f_i, so the joint system splits by index and is solved
    by potential propagation on the graph whose edges join x to its images;
    conflicts along any edge refute solvability.  Works unchanged for finite
    and infinite coefficient factors because all edge coefficients are +-1.
    """
    sys_ = alpha.system
    factors = alpha.coeffs.factors
    f = len(factors)
    witness = []
    for i, size in enumerate(sys_.sizes):
        edges_a = []
        edges_b = []
        edges_w = []
        for (a_idx, j) in alpha.values:
            if a_idx != i:
                continue
            T = sys_.tables[(i, j)]
            w = alpha.values[(i, j)]
            mj = sys_.sizes[j]
            xs = np.repeat(np.arange(size), mj * mj)
            edges_a.append(xs)
            edges_b.append(T.reshape(-1))
            edges_w.append(w.reshape(-1, f))
        if not edges_a:
            witness.append(np.zeros((size, f), dtype=np.int64))
            continue
        ea = np.concatenate(edges_a)
        eb = np.concatenate(edges_b)
        ew = np.concatenate(edges_w)
        pot = np.zeros((size, f), dtype=np.int64)
        known = np.zeros(size, dtype=bool)
        while not known.all():
            root = int(np.argmax(~known))
            known[root] = True
            changed = True
            while changed:
                changed = False
                fwd = known[ea] & ~known[eb]
                if fwd.any():
                    idx = np.nonzero(fwd)[0]
                    pot[eb[idx]] = pot[ea[idx]] - ew[idx]
                    known[eb[idx]] = True
                    changed = True
                back = known[eb] & ~known[ea]
                if back.any():
                    idx = np.nonzero(back)[0]
                    pot[ea[idx]] = pot[eb[idx]] + ew[idx]
                    known[ea[idx]] = True
                    changed = True
        diff = _reduce_columns(pot[ea] - pot[eb] - ew, factors)
        if diff.any():
            return False, None
        witness.append(_reduce_columns(pot, factors))
    rebuilt = system_coboundary(sys_, witness, alpha.coeffs)
    for pair, arr in alpha.values.items():
        if not np.array_equal(rebuilt.values[pair], arr):
            raise AssertionError("witness failed re-substitution on pair %r" % (pair,))
    return True, witness


def augmented_system_cocycle(n, m1, m2, w=1, heap_diagonal=False, coeffs=None):
    """The indicator cocycle on the two-carrier cyclic system.

    alpha_ij(x, y, z) = w exactly when y and z agree under the augmentation
    to Z_n (their difference is divisible by n).  Returns the system together
    with the cocycle.  Default coefficients are the integers.
    """
    from .tsd import augmented_cyclic_system
    system = augmented_cyclic_system(n, m1, m2, heap_diagonal=heap_diagonal)
    if coeffs is None:
        coeffs = AbelianGroup((0,))
    values = {}
    for (i, j) in system.tables:
        Mi, Mj = system.sizes[i], system.sizes[j]
        y = np.arange(Mj)[None, :, None]
        z = np.arange(Mj)[None, None, :]
        hit = ((z - y) % n == 0)
        arr = np.where(hit, w, 0)
        values[(i, j)] = np.broadcast_to(arr, (Mi, Mj, Mj)).astype(np.int64)
    return system, SystemCocycle(system, coeffs, values,
                                 name="augmented-indicator")


# ---------------------------------------------------------------------------
# The label cocycle on the SL(2, Z_3) Alexander family


def sl2z3_lambda(mat):
    """Abelianization weight (a+d)(b-c)(1-bc) mod 3 of a flat (a,b,c,d)."""
    a, b, c, d = (int(v) for v in mat)
    return ((a + d) * (b - c) * (1 - b * c)) % 3


def nosaka_singular_labels(group=None):
    """Labels h for which 1 - h is singular mod 3 (trace 2 mod 3)."""
    G = group or sl2z3_group()
    out = []
    for idx, (a, b, c, d) in enumerate(G.matrices):
        if ((1 - a) * (1 - d) - b * c) % 3 == 0:
            out.append(idx)
    return out


def _inv2_mod3(mat):
    a, b, c, d = (int(v) for v in mat)
    det = (a * d - b * c) % 3
    inv_det = pow(det, -1, 3)
    return np.array([[d, -b], [-c, a]], dtype=np.int64) * inv_det % 3


def nosaka_pair_value(x, g, y, h, group=None):
    """The raw pair weight lambda(g) det(x - y, (1-h)^-1 y) mod 3.

    x and y are point indices in Z_3 x Z_3 (index 3*p0 + p1); g and h are
    group label indices.  Raises ValueError when 1 - h is singular.
    """
    G = group or sl2z3_group()
    if h in nosaka_singular_labels(G):
        raise ValueError("label %d has singular 1 - h" % h)
    a, b, c, d = G.matrices[h]
    W = _inv2_mod3(((1 - a) % 3, (-b) % 3, (-c) % 3, (1 - d) % 3))
    ux, uy = x // 3 - y // 3, x % 3 - y % 3
    w = W @ np.array([y // 3, y % 3], dtype=np.int64)
    lam = sl2z3_lambda(G.matrices[g])
    return int(lam * (ux * w[1] - uy * w[0]) % 3)


@dataclass
class NosakaReport:
    base_label: int
    base_weight: int
    excluded_labels: list
    admissible_labels: list
    check: CoverageReport

    def to_json(self):
        return {
            "base_label": self.base_label,
            "base_weight": self.base_weight,
            "excluded_labels": list(self.excluded_labels),
            "admissible_labels": list(self.admissible_labels),
            "check": self.check.to_json(),
        }


def nosaka_system_cocycle(base_label=None, budget=100_000_000, seed=0,
                          exhaustive=False):
    """Label 2-cocycle on the SL(2, Z_3) Alexander family, assembled pairwise.

    For labels g, h the pair cocycle evaluates the determinant form at
    ((x, base), (y, g)) and ((x *_g y, base), (z, h)); labels whose 1 - h is
    singular are excluded from the system and listed in the report.  The
    printed base label is the identity, whose abelianization weight vanishes,
    making the default system identically zero; any other base label may be
    passed to exercise the construction non-vacuously.
    """
    fam = alexander_gfamily_sl2z3()
    G = fam.group
    system, _ = gfamily_to_compatible(fam)
    if base_label is None:
        base_label = G.identity
    lam = sl2z3_lambda(G.matrices[base_label])
    singular = nosaka_singular_labels(G)
    admissible = [i for i in range(G.size) if i not in singular]
    m = fam.set_size
    P = np.array([(p // 3, p % 3) for p in range(m)], dtype=np.int64)

    inv1m = {}
    for h in admissible:
        a, b, c, d = G.matrices[h]
        inv1m[h] = _inv2_mod3(((1 - a) % 3, (-b) % 3, (-c) % 3, (1 - d) % 3))

    def det_term(heads, labels_inv, pts):
        # det(heads - pts, labels_inv . pts) with heads broadcast over pts
        W = (P @ labels_inv.T) % 3
        d = ((P[heads][..., 0] - P[pts][..., 0]) * W[pts][..., 1]
             - (P[heads][..., 1] - P[pts][..., 1]) * W[pts][..., 0])
        return d % 3

    xs = np.arange(m)
    values = {}
    for g in admissible:
        first = det_term(xs[:, None], inv1m[g], xs[None, :])  # (x, y)
        xy = fam.ops[g][xs[:, None], xs[None, :]]
        for h in admissible:
            second = det_term(xy[:, :, None], inv1m[h], xs[None, None, :])
            values[(g, h)] = (lam * (first[:, :, None] + second)) % 3
    alpha = SystemCocycle(system, AbelianGroup((3,)), values,
                          name="sl2z3-label-cocycle")
    check = check_system_cocycle(alpha, budget=budget, seed=seed,
                                 exhaustive=exhaustive)
    report = NosakaReport(base_label, lam, singular, admissible, check)
    return alpha, report
