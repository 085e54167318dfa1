"""Ternary self-distributive structures on finite carriers.

A ternary operation is stored as an (m, m, m) integer table, T[x, y, z] being
the result index.  The axiom checkers are vectorized over numpy index grids
and always report the lexicographically first counterexample, so results do
not depend on chunking.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd

import numpy as np

MAX_CARRIER = 255

DEFAULT_MAX_CELLS = 50_000_000


def max_cells():
    """Cell budget for exhaustive table checks, overridable via TSD_MAX_CELLS."""
    raw = os.environ.get("TSD_MAX_CELLS")
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        v = int(raw)
    except ValueError as exc:
        raise ValueError("TSD_MAX_CELLS must be an integer, got %r" % raw) from exc
    if v <= 0:
        raise ValueError("TSD_MAX_CELLS must be positive")
    return v


class ResourceLimitError(RuntimeError):
    """An exhaustive check would exceed the configured cell budget."""


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    counterexample: tuple | None
    checked: int
    total: int
    identity: str = ""

    def to_json(self):
        return {
            "ok": self.ok,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "checked": self.checked,
            "total": self.total,
            "identity": self.identity,
        }


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    counterexample: tuple | None
    checked: int
    total: int
    mode: str
    seed: int
    fraction: float

    def to_json(self):
        return {
            "ok": self.ok,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "checked": self.checked,
            "total": self.total,
            "mode": self.mode,
            "seed": self.seed,
            "fraction": self.fraction,
        }


class TernaryStructure:
    """Finite set with a ternary operation, optionally with left inverse."""

    def __init__(self, table, name=None, left_inverse=None):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 3 or len(set(table.shape)) != 1:
            raise ValueError("ternary table must be cubic")
        m = table.shape[0]
        if m < 1 or m > MAX_CARRIER:
            raise ValueError("carrier size %d out of range 1..%d" % (m, MAX_CARRIER))
        if table.min() < 0 or table.max() >= m:
            raise ValueError("table entries out of range")
        self.size = m
        self.table = table
        self.name = name
        self.left_inverse = None if left_inverse is None else np.asarray(left_inverse, dtype=np.int64)

    def __repr__(self):
        tag = self.name or "size %d" % self.size
        return "TernaryStructure(%s)" % tag

    def __eq__(self, other):
        return (isinstance(other, TernaryStructure)
                and self.size == other.size
                and np.array_equal(self.table, other.table))

    def to_json(self):
        out = {"kind": "ternary", "size": self.size,
               "table": [int(v) for v in self.table.reshape(-1)]}
        if self.name:
            out["name"] = self.name
        return out

    @staticmethod
    def from_json(obj):
        m = int(obj["size"])
        flat = obj["table"]
        if len(flat) != m ** 3:
            raise ValueError("ternary table needs %d entries, got %d" % (m ** 3, len(flat)))
        return TernaryStructure(np.asarray(flat, dtype=np.int64).reshape(m, m, m),
                                name=obj.get("name"))


class BinaryStructure:
    def __init__(self, table, name=None):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("binary table must be square")
        m = table.shape[0]
        if m < 1 or m > MAX_CARRIER:
            raise ValueError("carrier size %d out of range 1..%d" % (m, MAX_CARRIER))
        if table.min() < 0 or table.max() >= m:
            raise ValueError("table entries out of range")
        self.size = m
        self.table = table
        self.name = name

    def __repr__(self):
        return "BinaryStructure(%s)" % (self.name or "size %d" % self.size)

    def to_json(self):
        out = {"kind": "binary", "size": self.size,
               "table": [int(v) for v in self.table.reshape(-1)]}
        if self.name:
            out["name"] = self.name
        return out

    @staticmethod
    def from_json(obj):
        m = int(obj["size"])
        flat = obj["table"]
        if len(flat) != m * m:
            raise ValueError("binary table needs %d entries" % (m * m))
        return BinaryStructure(np.asarray(flat, dtype=np.int64).reshape(m, m),
                               name=obj.get("name"))


class FiniteGroup:
    """Multiplication table group with cached inverses and identity."""

    def __init__(self, table, name=None, labels=None):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("group table must be square")
        self.size = n
        self.table = table
        self.name = name
        self.labels = labels
        e = None
        for cand in range(n):
            if np.array_equal(table[cand], np.arange(n)) and np.array_equal(table[:, cand], np.arange(n)):
                e = cand
                break
        if e is None:
            raise ValueError("table has no identity element")
        self.identity = e
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.nonzero(table[g] == e)[0]
            if len(hits) != 1:
                raise ValueError("element %d has no unique inverse" % g)
            inv[g] = hits[0]
        self.inverse = inv
        # associativity: (ab)c == a(bc), vectorized
        a = np.arange(n)
        lhs = table[table[a[:, None, None], a[None, :, None]], a[None, None, :]]
        rhs = table[a[:, None, None], table[a[None, :, None], a[None, None, :]]]
        if not np.array_equal(lhs, rhs):
            raise ValueError("multiplication table is not associative")

    def mul(self, g, h):
        return int(self.table[g, h])

    def __repr__(self):
        return "FiniteGroup(%s)" % (self.name or "order %d" % self.size)


def cyclic_group(n):
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name="Z%d" % n)


def dihedral_group_d3():
    """Order 6 dihedral group, presentation s^2 = r^3 = e and s r s = r^-1.

    Element order is [e, r, r2, s, sr, sr2].  Reflections enumerate as
    r^a * s, so the element labeled sr is the product r*s (equal to s*r2
    under the relation).  With this layout the support pairs of the
    dihedral 2-cocycle are exactly the orbit pairs (y, r*y).
    """
    def idx(b, a):
        return 3 * b + a % 3
    table = np.zeros((6, 6), dtype=np.int64)
    for b1 in range(2):
        for a1 in range(3):
            for b2 in range(2):
                for a2 in range(3):
                    b = (b1 + b2) % 2
                    a = a1 + a2 if b1 == 0 else a1 - a2
                    table[idx(b1, a1), idx(b2, a2)] = idx(b, a)
    labels = ["e", "r", "r2", "s", "sr", "sr2"]
    return FiniteGroup(table, name="D3", labels=labels)


def symmetric_group_s3():
    """S3 on {0,1,2}, elements in lexicographic one-line order."""
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}
    table = np.zeros((6, 6), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[k]] for k in range(3))]
    return FiniteGroup(table, name="S3", labels=["".join(map(str, p)) for p in perms])


def heap_of_group(group):
    """The heap ternary operation (x, y, z) -> x y^(-1) z."""
    t = group.table
    xyinv = t[:, group.inverse]          # [x, y] -> x * y^-1
    table = t[xyinv]                     # [x, y, z] -> (x y^-1) z
    name = "heap:%s" % group.name if group.name else None
    s = TernaryStructure(table, name=name)
    # heaps are racks; attach the closed-form left inverse x z^-1 y
    xzinv = t[:, group.inverse]
    left = np.transpose(t[xzinv], (0, 2, 1))
    s.left_inverse = left
    return s


def dihedral_quandle(n):
    a = np.arange(n)
    return BinaryStructure((2 * a[None, :] - a[:, None]) % n, name="dihedral:Z%d" % n)


def compose_binary(b1, b2=None):
    """Ternary operation (x, y, z) -> (x * y) ** z from one or two binaries."""
    t1 = b1.table if isinstance(b1, BinaryStructure) else np.asarray(b1)
    if b2 is None:
        t2 = t1
    else:
        t2 = b2.table if isinstance(b2, BinaryStructure) else np.asarray(b2)
    if t1.shape != t2.shape:
        raise ValueError("binary tables must share a carrier")
    return TernaryStructure(t2[t1])


def _tsd_mismatch(table, budget=None):
    """First (x,y,z,u,v) violating self-distributivity, or None."""
    m = table.shape[0]
    total = m ** 5
    if budget is None:
        budget = max_cells()
    if total > budget:
        raise ResourceLimitError(
            "exhaustive TSD check needs %d cells, budget is %d (set TSD_MAX_CELLS)"
            % (total, budget))
    T = table
    idx = np.arange(m)
    y = idx[:, None, None, None]
    z = idx[None, :, None, None]
    u = idx[None, None, :, None]
    v = idx[None, None, None, :]
    for x in range(m):
        lhs = T[T[x, y, z], u, v]
        rhs = T[T[x, u, v], T[y, u, v], T[z, u, v]]
        neq = lhs != rhs
        if neq.any():
            flat = int(np.argmax(neq.reshape(-1)))
            yy, zz, uu, vv = np.unravel_index(flat, (m, m, m, m))
            return (x, int(yy), int(zz), int(uu), int(vv))
    return None


def check_tsd(structure, budget=None):
    """Exhaustively verify T(T(x,y,z),u,v) = T(T(x,u,v),T(y,u,v),T(z,u,v))."""
    table = structure.table if isinstance(structure, TernaryStructure) else np.asarray(structure)
    m = table.shape[0]
    bad = _tsd_mismatch(table, budget)
    total = m ** 5
    return CheckReport(ok=bad is None, counterexample=bad,
                       checked=total if bad is None else _lex_rank(bad, m),
                       total=total, identity="ternary self-distributivity")


def _lex_rank(tup, m):
    r = 0
    for t in tup:
        r = r * m + t
    return r + 1


def check_rack(structure):
    """Verify x -> T(x,y,z) is bijective for each (y,z); fill left_inverse.

    The left inverse satisfies both L(T(x,y,z),y,z) = x and T(L(x,y,z),y,z) = x.
    """
    table = structure.table
    m = structure.size
    cols = table.transpose(1, 2, 0).reshape(m * m, m)   # row (y,z), entry x
    sorted_cols = np.sort(cols, axis=1)
    good = (sorted_cols == np.arange(m)[None, :]).all(axis=1)
    if not good.all():
        first = int(np.argmax(~good))
        y, z = divmod(first, m)
        return CheckReport(ok=False, counterexample=(y, z),
                           checked=first, total=m * m,
                           identity="translation bijectivity")
    inv = np.argsort(cols, axis=1)                       # row (y,z): d -> x
    left = inv.reshape(m, m, m).transpose(2, 0, 1)       # [d, y, z]
    structure.left_inverse = left
    return CheckReport(ok=True, counterexample=None, checked=m * m, total=m * m,
                       identity="translation bijectivity")


class GFamily:
    """Family of binary operations on X indexed by a finite group G."""

    def __init__(self, group, ops, name=None):
        ops = np.asarray(ops, dtype=np.int64)
        if ops.ndim != 3 or ops.shape[0] != group.size or ops.shape[1] != ops.shape[2]:
            raise ValueError("ops must have shape (|G|, m, m)")
        self.group = group
        self.ops = ops
        self.set_size = ops.shape[1]
        self.name = name

    def to_json(self):
        out = {
            "kind": "gfamily",
            "size": self.set_size,
            "group_size": self.group.size,
            "group_table": [int(v) for v in self.group.table.reshape(-1)],
            "ops": [int(v) for v in self.ops.reshape(-1)],
        }
        if self.name:
            out["name"] = self.name
        return out

    @staticmethod
    def from_json(obj):
        n = int(obj["group_size"])
        m = int(obj["size"])
        gt = np.asarray(obj["group_table"], dtype=np.int64).reshape(n, n)
        ops = np.asarray(obj["ops"], dtype=np.int64).reshape(n, m, m)
        return GFamily(FiniteGroup(gt), ops, name=obj.get("name"))

    def __repr__(self):
        return "GFamily(%s)" % (self.name or "|G|=%d, m=%d" % (self.group.size, self.set_size))


def gfamily_check(fam):
    """Verify the G-family axioms; returns one report per axiom."""
    G, ops = fam.group, fam.ops
    n, m = G.size, fam.set_size
    idx = np.arange(m)
    reports = []

    # x *e y = x
    eq = ops[G.identity] == idx[:, None]
    ok = bool(eq.all())
    ce = None
    if not ok:
        x, y = np.unravel_index(int(np.argmax(~eq)), (m, m))
        ce = (int(x), int(y))
    reports.append(CheckReport(ok, ce, m * m, m * m, "identity label acts trivially"))

    # x *g x = x
    diag = ops[:, idx, idx]
    eq = diag == idx[None, :]
    ok = bool(eq.all())
    ce = None
    if not ok:
        g, x = np.unravel_index(int(np.argmax(~eq)), (n, m))
        ce = (int(g), int(x))
    reports.append(CheckReport(ok, ce, n * m, n * m, "idempotency"))

    # (x *g y) *h y = x *(gh) y
    g4 = np.arange(n)[:, None, None, None]
    h4 = np.arange(n)[None, :, None, None]
    x4 = idx[None, None, :, None]
    y4 = idx[None, None, None, :]
    lhs = ops[h4, ops[g4, x4, y4], y4]
    rhs = ops[G.table[g4, h4], x4, y4]
    eq = lhs == rhs
    ok = bool(eq.all())
    ce = None
    if not ok:
        g, h, x, y = np.unravel_index(int(np.argmax(~eq)), (n, n, m, m))
        ce = (int(g), int(h), int(x), int(y))
    reports.append(CheckReport(ok, ce, n * n * m * m, n * n * m * m, "label composition"))

    # (x *g y) *h z = (x *h z) *(h^-1 g h) (y *h z)
    hg = G.table[G.inverse]                       # [h, g] -> h^-1 g
    conj = G.table[hg.T, np.arange(n)[None, :]]   # [g, h] -> (h^-1 g) h
    g5 = np.arange(n)[:, None, None, None, None]
    h5 = np.arange(n)[None, :, None, None, None]
    x5 = idx[None, None, :, None, None]
    y5 = idx[None, None, None, :, None]
    z5 = idx[None, None, None, None, :]
    lhs = ops[h5, ops[g5, x5, y5], z5]
    rhs = ops[conj[g5, h5], ops[h5, x5, z5], ops[h5, y5, z5]]
    eq = lhs == rhs
    ok = bool(eq.all())
    ce = None
    if not ok:
        g, h, x, y, z = np.unravel_index(int(np.argmax(~eq)), (n, n, m, m, m))
        ce = (int(g), int(h), int(x), int(y), int(z))
    reports.append(CheckReport(ok, ce, n * n * m ** 3, n * n * m ** 3, "exchange"))
    return reports


def sl2z3_group():
    """SL(2, Z3) as a multiplication table.

    The stored product is mult(g, h) = matrix product h.g; with this
    convention the G-family axioms hold verbatim for the Alexander family
    below (the abstract axioms do not care which of the two opposite groups
    we present).
    """
    mats = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for d in range(3):
                    if (a * d - b * c) % 3 == 1:
                        mats.append((a, b, c, d))
    index = {mm: i for i, mm in enumerate(mats)}
    nn = len(mats)
    table = np.zeros((nn, nn), dtype=np.int64)
    for i, g in enumerate(mats):
        for j, h in enumerate(mats):
            ga, gb, gc, gd = g
            ha, hb, hc, hd = h
            # h @ g
            p = ((ha * ga + hb * gc) % 3, (ha * gb + hb * gd) % 3,
                 (hc * ga + hd * gc) % 3, (hc * gb + hd * gd) % 3)
            table[i, j] = index[p]
    grp = FiniteGroup(table, name="SL2Z3")
    grp.matrices = mats
    return grp


def alexander_gfamily_sl2z3():
    """The Alexander G-family x *g y = g x + (1 - g) y on X = Z3^2."""
    G = sl2z3_group()
    m = 9
    ops = np.zeros((G.size, m, m), dtype=np.int64)
    pts = [(p, q) for p in range(3) for q in range(3)]
    pidx = {pq: i for i, pq in enumerate(pts)}
    for gi, (a, b, c, d) in enumerate(G.matrices):
        for xi, (x0, x1) in enumerate(pts):
            gx = ((a * x0 + b * x1) % 3, (c * x0 + d * x1) % 3)
            for yi, (y0, y1) in enumerate(pts):
                gy = ((a * y0 + b * y1) % 3, (c * y0 + d * y1) % 3)
                ops[gi, xi, yi] = pidx[((gx[0] + y0 - gy[0]) % 3, (gx[1] + y1 - gy[1]) % 3)]
    fam = GFamily(G, ops, name="alexander-gfamily:SL2Z3")
    return fam


class CompatibleSystem:
    """Doubly indexed family T_ij : X_i x X_j x X_j -> X_i."""

    def __init__(self, sizes, tables, name=None, index_labels=None):
        self.sizes = tuple(int(s) for s in sizes)
        self.n_indices = len(self.sizes)
        self.tables = {}
        for (i, j), t in tables.items():
            t = np.asarray(t, dtype=np.int64)
            want = (self.sizes[i], self.sizes[j], self.sizes[j])
            if t.shape != want:
                raise ValueError("table T_%d%d has shape %s, expected %s"
                                 % (i, j, t.shape, want))
            self.tables[(i, j)] = t
        for i in range(self.n_indices):
            for j in range(self.n_indices):
                if (i, j) not in self.tables:
                    raise ValueError("missing table T_%d%d" % (i, j))
        self.name = name
        self.index_labels = index_labels

    def to_json(self):
        out = {
            "kind": "system",
            "sizes": list(self.sizes),
            "tables": {"%d,%d" % ij: [int(v) for v in t.reshape(-1)]
                       for ij, t in sorted(self.tables.items())},
        }
        if self.name:
            out["name"] = self.name
        return out

    @staticmethod
    def from_json(obj):
        sizes = obj["sizes"]
        tables = {}
        for key, flat in obj["tables"].items():
            i, j = (int(p) for p in key.split(","))
            tables[(i, j)] = np.asarray(flat, dtype=np.int64).reshape(
                sizes[i], sizes[j], sizes[j])
        return CompatibleSystem(sizes, tables, name=obj.get("name"))

    def __repr__(self):
        return "CompatibleSystem(%s)" % (self.name or "indices=%d" % self.n_indices)


def _triple_cells(system, i, j, k):
    return system.sizes[i] * system.sizes[j] ** 2 * system.sizes[k] ** 2


def _check_triple_exhaustive(system, i, j, k):
    Tij = system.tables[(i, j)]
    Tik = system.tables[(i, k)]
    Tjk = system.tables[(j, k)]
    a, b, c = system.sizes[i], system.sizes[j], system.sizes[k]
    x = np.arange(a)[:, None, None, None, None]
    y = np.arange(b)[None, :, None, None, None]
    z = np.arange(b)[None, None, :, None, None]
    u = np.arange(c)[None, None, None, :, None]
    v = np.arange(c)[None, None, None, None, :]
    lhs = Tik[Tij[x, y, z], u, v]
    rhs = Tij[Tik[x, u, v], Tjk[y, u, v], Tjk[z, u, v]]
    eq = lhs == rhs
    if eq.all():
        return None
    flat = int(np.argmax(~eq.reshape(-1)))
    xx, yy, zz, uu, vv = np.unravel_index(flat, (a, b, b, c, c))
    return (i, j, k, int(xx), int(yy), int(zz), int(uu), int(vv))


def _check_triple_sampled(system, i, j, k, count, rng):
    Tij = system.tables[(i, j)]
    Tik = system.tables[(i, k)]
    Tjk = system.tables[(j, k)]
    a, b, c = system.sizes[i], system.sizes[j], system.sizes[k]
    x = rng.integers(0, a, size=count)
    y = rng.integers(0, b, size=count)
    z = rng.integers(0, b, size=count)
    u = rng.integers(0, c, size=count)
    v = rng.integers(0, c, size=count)
    lhs = Tik[Tij[x, y, z], u, v]
    rhs = Tij[Tik[x, u, v], Tjk[y, u, v], Tjk[z, u, v]]
    neq = lhs != rhs
    if neq.any():
        w = int(np.argmax(neq))
        return (i, j, k, int(x[w]), int(y[w]), int(z[w]), int(u[w]), int(v[w]))
    return None


def check_compatible_system(system, budget=100_000_000, seed=0, exhaustive=False):
    """Verify mixed distributivity across all index triples.

    Runs exhaustively when the identity count fits the budget (or when forced);
    otherwise samples ``budget`` identity instances with a seeded generator and
    reports the covered fraction.
    """
    n = system.n_indices
    triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    total = sum(_triple_cells(system, *t) for t in triples)
    if exhaustive or total <= budget:
        checked = 0
        for t in triples:
            bad = _check_triple_exhaustive(system, *t)
            if bad is not None:
                return CoverageReport(False, bad, checked, total, "exhaustive", seed, checked / total)
            checked += _triple_cells(system, *t)
        return CoverageReport(True, None, total, total, "exhaustive", seed, 1.0)
    rng = np.random.default_rng(seed)
    checked = 0
    share = budget / total
    for t in triples:
        count = max(1, int(round(_triple_cells(system, *t) * share)))
        bad = _check_triple_sampled(system, *t, count, rng)
        if bad is not None:
            return CoverageReport(False, bad, checked, total, "sampled", seed, checked / total)
        checked += count
    return CoverageReport(True, None, checked, total, "sampled", seed, checked / total)


@dataclass(frozen=True)
class GFamilyCompatibleReport:
    printed_ok: bool
    variant_ok: bool
    chosen: str
    printed_counterexample: tuple | None = None
    variant_counterexample: tuple | None = None

    def to_json(self):
        return {
            "printed_ok": self.printed_ok,
            "variant_ok": self.variant_ok,
            "chosen": self.chosen,
            "printed_counterexample": None if self.printed_counterexample is None
            else list(self.printed_counterexample),
            "variant_counterexample": None if self.variant_counterexample is None
            else list(self.variant_counterexample),
        }


def _one_label_family_tables(fam):
    """S_h(x,y,z) = (x *h y) *(h^-1) z for each label h, as (|G|, m, m, m)."""
    G, ops = fam.group, fam.ops
    out = np.zeros((G.size, fam.set_size, fam.set_size, fam.set_size), dtype=np.int64)
    for h in range(G.size):
        out[h] = compose_binary(BinaryStructure(ops[h]),
                                BinaryStructure(ops[G.inverse[h]])).table
    return out


def _mutual_pair_mismatch(S, first_label):
    """Check the pairwise compatibility laws for a one-label family.

    first_label False: T_ij = S_j, condition S_k(S_j(x,y,z),u,v) =
    S_j(S_k(x,u,v), S_k(y,u,v), S_k(z,u,v)) for all (j,k).
    first_label True: T_ij = S_i, condition S_i(S_i(x,y,z),u,v) =
    S_i(S_i(x,u,v), S_j(y,u,v), S_j(z,u,v)) for all (i,j).
    """
    nlab, m = S.shape[0], S.shape[1]
    idx = np.arange(m)
    x = idx[:, None, None, None, None]
    y = idx[None, :, None, None, None]
    z = idx[None, None, :, None, None]
    u = idx[None, None, None, :, None]
    v = idx[None, None, None, None, :]
    for a in range(nlab):
        Sa = S[a]
        for b in range(nlab):
            Sb = S[b]
            if first_label:
                lhs = Sa[Sa[x, y, z], u, v]
                rhs = Sa[Sa[x, u, v], Sb[y, u, v], Sb[z, u, v]]
            else:
                lhs = Sb[Sa[x, y, z], u, v]
                rhs = Sa[Sb[x, u, v], Sb[y, u, v], Sb[z, u, v]]
            eq = lhs == rhs
            if not eq.all():
                flat = int(np.argmax(~eq.reshape(-1)))
                xx, yy, zz, uu, vv = np.unravel_index(flat, (m,) * 5)
                return (a, b, int(xx), int(yy), int(zz), int(uu), int(vv))
    return None


def gfamily_to_compatible(fam):
    """Compatible system from a G-family, trying the printed one-label formula.

    The formula T_gh(x,y,z) = (x *h y) *(h^-1) z only involves the second
    label; the variant using the first label instead is evaluated too, and the
    report records which of the two satisfies mixed distributivity (checked
    exhaustively at the pair level, which is equivalent for one-label
    systems).  Raises ValueError if neither passes.
    """
    S = _one_label_family_tables(fam)
    printed_bad = _mutual_pair_mismatch(S, first_label=False)
    variant_bad = _mutual_pair_mismatch(S, first_label=True)
    printed_ok = printed_bad is None
    variant_ok = variant_bad is None
    if printed_ok:
        chosen = "printed"
    elif variant_ok:
        chosen = "first-label variant"
    else:
        raise ValueError("neither the printed formula nor the first-label variant "
                         "yields a compatible system; first failures %s / %s"
                         % (printed_bad, variant_bad))
    n = fam.group.size
    tables = {}
    for i in range(n):
        for j in range(n):
            tables[(i, j)] = S[j] if printed_ok else S[i]
    system = CompatibleSystem([fam.set_size] * n, tables,
                              name="compatible:%s" % (fam.name or "gfamily"))
    report = GFamilyCompatibleReport(printed_ok, variant_ok, chosen,
                                     printed_bad, variant_bad)
    return system, report


def mutual_shift_pair(p=5, shifts=(1, 2)):
    """Two mutually distributive shift operations on Z_p as a 2-index system."""
    m = p
    idx = np.arange(m)
    tabs = []
    for a in shifts:
        t = (idx[:, None, None] + a * (idx[None, None, :] - idx[None, :, None])) % m
        tabs.append(t)
    tables = {(i, j): tabs[j] for i in range(2) for j in range(2)}
    return CompatibleSystem([m, m], tables,
                            name="mutual:Z%d[%s]" % (p, ",".join(map(str, shifts))))


def augmented_cyclic_system(n, m1, m2, heap_diagonal=False):
    """Two-carrier compatible system on Z_{n m1} and Z_{n m2}.

    T_ij(t; s1, s2) = t + m_i (s2 - s1) mod (n m_i); requires gcd(m1, m2) = 1,
    which makes the shift well defined across carriers.  With heap_diagonal
    the diagonal operations are replaced by the cyclic heaps t - s1 + s2.
    """
    if gcd(m1, m2) != 1:
        raise ValueError("m1 and m2 must be coprime, got %d and %d" % (m1, m2))
    if n < 1 or m1 < 1 or m2 < 1:
        raise ValueError("parameters must be positive")
    sizes = (n * m1, n * m2)
    mults = (m1, m2)
    tables = {}
    for i in range(2):
        for j in range(2):
            Mi, Mj = sizes[i], sizes[j]
            t = np.arange(Mi)[:, None, None]
            s1 = np.arange(Mj)[None, :, None]
            s2 = np.arange(Mj)[None, None, :]
            if heap_diagonal and i == j:
                tables[(i, j)] = (t - s1 + s2) % Mi
            else:
                tables[(i, j)] = (t + mults[i] * (s2 - s1)) % Mi
    name = "augmented:%d-%d-%d%s" % (n, m1, m2, "+heapdiag" if heap_diagonal else "")
    return CompatibleSystem(sizes, tables, name=name)


def structure_from_json(obj):
    kind = obj.get("kind")
    if kind == "ternary":
        return TernaryStructure.from_json(obj)
    if kind == "binary":
        return BinaryStructure.from_json(obj)
    if kind == "gfamily":
        return GFamily.from_json(obj)
    if kind == "system":
        return CompatibleSystem.from_json(obj)
    raise ValueError("unknown structure kind %r" % kind)
