"""Coefficient arithmetic: abelian groups, group rings, characters, cyclotomics.

Everything here is exact.  Scalars live in Z[zeta_N] (or Q(zeta_N) once a
division happens), represented on the power basis 1, z, ..., z^(phi(N)-1) of
Z[x]/(Phi_N).  Order N = 1 gives the rationals, which is how the Hopf layer
gets a plain exact field without a second scalar type.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod_exact(num, den):
    """Divide integer polynomials, asserting the remainder is zero."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        q[k] = c // lead
        if q[k]:
            for j, dj in enumerate(den):
                num[k + j] -= q[k] * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return _poly_trim(q)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, constant term first."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, list(cyclotomic_polynomial(d)))
    return tuple(_poly_divmod_exact(num, den))


@lru_cache(maxsize=None)
def _phi(n):
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _reduction_rows(n):
    """Row j = coordinates of z^j on the power basis, for j up to 2*phi(n)."""
    d = _phi(n)
    phi = cyclotomic_polynomial(n)
    # z^d = -(phi[0] + phi[1] z + ... + phi[d-1] z^(d-1)) since phi is monic
    rows = [[Fraction(1) if i == j else Fraction(0) for i in range(d)] for j in range(d)]
    for j in range(d, 2 * d):
        prev = rows[j - 1]
        row = [Fraction(0)] + prev[: d - 1]
        top = prev[d - 1]
        if top:
            for i in range(d):
                row[i] -= top * phi[i]
        rows.append(row)
    return rows


class Cyclotomic:
    """An element of Q(zeta_n) on the power basis of Z[x]/(Phi_n).

    Coordinates are Fractions; integer values stay integral through + and *.
    """

    __slots__ = ("order", "coords")

    def __init__(self, order, coords):
        d = _phi(order)
        coords = [Fraction(c) for c in coords]
        if len(coords) > d:
            raise ValueError("too many coordinates for order %d" % order)
        coords += [Fraction(0)] * (d - len(coords))
        self.order = order
        self.coords = tuple(coords)

    @staticmethod
    def from_int(value, order=1):
        return Cyclotomic(order, [Fraction(value)])

    @staticmethod
    def zero(order=1):
        return Cyclotomic(order, [])

    @staticmethod
    def one(order=1):
        return Cyclotomic(order, [Fraction(1)])

    @staticmethod
    def zeta(order, power=1):
        return Cyclotomic.from_powers(order, {power: 1})

    @staticmethod
    def from_powers(order, powers):
        """Build sum c_k * zeta^k from a {power: coefficient} mapping."""
        d = _phi(order)
        acc = [Fraction(0)] * d
        rows = _reduction_rows(order)
        for k, c in powers.items():
            if c == 0:
                continue
            k %= order
            row = rows[k] if k < len(rows) else None
            if row is None:
                # k < order <= 2*phi(order) fails only for small n; reduce by
                # repeated squaring through multiplication instead
                term = Cyclotomic.zeta(order) ** k
                for i, ci in enumerate(term.coords):
                    acc[i] += c * ci
                continue
            for i in range(d):
                acc[i] += c * row[i]
        return Cyclotomic(order, acc)

    def promote(self, order):
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError("cannot promote order %d to %d" % (self.order, order))
        step = order // self.order
        powers = {}
        for j, c in enumerate(self.coords):
            if c:
                powers[j * step] = c
        return Cyclotomic.from_powers(order, powers)

    def _pair(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_int(other)
        n = math.lcm(self.order, other.order)
        return self.promote(n), other.promote(n)

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coords])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -Cyclotomic.from_int(other))

    def __rsub__(self, other):
        return Cyclotomic.from_int(other) - self

    def __mul__(self, other):
        a, b = self._pair(other)
        d = _phi(a.order)
        rows = _reduction_rows(a.order)
        acc = [Fraction(0)] * d
        for i, ai in enumerate(a.coords):
            if not ai:
                continue
            for j, bj in enumerate(b.coords):
                if not bj:
                    continue
                row = rows[i + j]
                c = ai * bj
                for k in range(d):
                    if row[k]:
                        acc[k] += c * row[k]
        return Cyclotomic(a.order, acc)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        """Multiplicative inverse via extended Euclid over Q[x] mod Phi_n."""
        if not any(self.coords):
            raise ZeroDivisionError("cyclotomic zero has no inverse")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        a = list(self.coords)
        _poly_trim(a)
        # extended euclid: find s with s*a = gcd (mod phi); gcd is a unit
        r0, r1 = phi, a
        s0, s1 = [], [Fraction(1)]
        while r1:
            # divide r0 by r1 over Q
            q = [Fraction(0)] * max(len(r0) - len(r1) + 1, 0)
            rem = list(r0)
            for k in range(len(q) - 1, -1, -1):
                if len(rem) < len(r1) + k:
                    continue
                c = rem[k + len(r1) - 1] / r1[-1]
                q[k] = c
                if c:
                    for j, dj in enumerate(r1):
                        rem[k + j] -= c * dj
            _poly_trim(rem)
            _poly_trim(q)
            qs1 = _poly_mul(q, s1)
            s_new = [Fraction(0)] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(qs1):
                s_new[i] -= c
            _poly_trim(s_new)
            r0, r1 = r1, rem
            s0, s1 = s1, s_new
        if len(r0) != 1:
            raise ZeroDivisionError("element not invertible mod Phi_n")
        unit = r0[0]
        inv = [c / unit for c in s0]
        return Cyclotomic(self.order, inv + [Fraction(0)] * (_phi(self.order) - len(inv)))

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_int(other)
        a, b = self._pair(other)
        return a * b.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(1, [other])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    def __hash__(self):
        # hash through a canonical minimal representation
        r = self.reduce_order()
        return hash((r.order, r.coords))

    def reduce_order(self):
        """Smallest cyclotomic field (among divisors of order) containing self."""
        for div in sorted(_divisors(self.order)):
            if div == self.order:
                break
            try:
                cand = _demote(self, div)
            except ValueError:
                continue
            return cand
        return self

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:]) or self.order == 1

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.coords[0]

    def as_int(self):
        v = self.rational_value()
        if v.denominator != 1:
            raise ValueError("not an integer")
        return v.numerator

    def to_json(self):
        coords = []
        for c in self.coords:
            coords.append(c.numerator if c.denominator == 1 else {"num": c.numerator, "den": c.denominator})
        return {"order": self.order, "coords": coords}

    @staticmethod
    def from_json(obj):
        coords = []
        for c in obj["coords"]:
            if isinstance(c, dict):
                coords.append(Fraction(c["num"], c["den"]))
            else:
                coords.append(Fraction(c))
        return Cyclotomic(obj["order"], coords)

    def __str__(self):
        if self.is_rational():
            v = self.coords[0]
            return str(v.numerator) if v.denominator == 1 else str(v)
        sym = "z%d" % self.order
        parts = []
        for j, c in enumerate(self.coords):
            if not c:
                continue
            if j == 0:
                parts.append(str(c))
                continue
            mono = sym if j == 1 else "%s^%d" % (sym, j)
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (c, mono))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "Cyclotomic(%d, %s)" % (self.order, self)


def _divisors(n):
    out = []
    for d in range(1, n + 1):
        if n % d == 0:
            out.append(d)
    return out


def _demote(x, div):
    """Rewrite x in Q(zeta_div) if possible, else raise ValueError."""
    # express x as a rational combination of the subfield power basis, viewed
    # inside the big field, and fail if the linear system is inconsistent
    d_small = _phi(div)
    gens = [Cyclotomic.zeta(div, j).promote(x.order) for j in range(d_small)]
    # Gaussian solve: express x as a rational combination of gens
    cols = [g.coords for g in gens]
    target = list(x.coords)
    rows = len(target)
    mat = [[cols[c][r] for c in range(d_small)] + [target[r]] for r in range(rows)]
    piv_cols = []
    r = 0
    for c in range(d_small):
        sel = None
        for rr in range(r, rows):
            if mat[rr][c] != 0:
                sel = rr
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for rr in range(rows):
            if rr != r and mat[rr][c] != 0:
                f = mat[rr][c]
                mat[rr] = [v - f * w for v, w in zip(mat[rr], mat[r])]
        piv_cols.append(c)
        r += 1
    sol = [Fraction(0)] * d_small
    for i, c in enumerate(piv_cols):
        sol[c] = mat[i][-1]
    for rr in range(r, rows):
        if mat[rr][-1] != 0:
            raise ValueError("element not in subfield")
    # verify
    rebuilt = Cyclotomic(div, sol)
    if rebuilt.promote(x.order).coords != x.coords:
        raise ValueError("element not in subfield")
    return rebuilt


def cyclo_normalize(powers, order):
    """Reduce a {power: coefficient} mapping (or coefficient list indexed by
    power) modulo Phi_order."""
    if isinstance(powers, (list, tuple)):
        powers = {k: c for k, c in enumerate(powers)}
    return Cyclotomic.from_powers(order, powers)


def cyclo_mul(a, b):
    """Product of two cyclotomic values of the same declared order."""
    if a.order != b.order:
        raise ValueError("mismatched cyclotomic orders %d and %d" % (a.order, b.order))
    return a * b


class AbelianGroup:
    """Finitely generated abelian group, a product of cyclic factors.

    Factor k >= 2 means Z/k; factor 0 means Z.  Elements are integer tuples,
    one coordinate per factor, reduced mod k on finite factors.
    """

    __slots__ = ("factors",)

    def __init__(self, factors):
        factors = tuple(int(k) for k in factors)
        for k in factors:
            if k < 0 or k == 1:
                raise ValueError("factors must be 0 (infinite) or >= 2, got %d" % k)
        self.factors = factors

    @staticmethod
    def from_spec(spec):
        """Parse "Z", "Z3", "Z2xZ4", "ZxZ3" style strings."""
        parts = spec.replace(" ", "").split("x")
        factors = []
        for p in parts:
            if p in ("Z", "Z0"):
                factors.append(0)
            elif p.startswith("Z") and p[1:].isdigit():
                factors.append(int(p[1:]))
            else:
                raise ValueError("bad coefficient group %r" % spec)
        return AbelianGroup(factors)

    @property
    def rank(self):
        return len(self.factors)

    def zero(self):
        return (0,) * len(self.factors)

    def reduce(self, vec):
        return tuple(v % k if k else int(v) for v, k in zip(vec, self.factors))

    def add(self, a, b):
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a):
        return self.reduce(tuple(-x for x in a))

    def sub(self, a, b):
        return self.reduce(tuple(x - y for x, y in zip(a, b)))

    def scale(self, n, a):
        return self.reduce(tuple(n * x for x in a))

    def is_finite(self):
        return all(k != 0 for k in self.factors)

    def order(self):
        if not self.is_finite():
            return None
        n = 1
        for k in self.factors:
            n *= k
        return n

    def elements(self):
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        def rec(i):
            if i == len(self.factors):
                yield ()
                return
            for rest in rec(i + 1):
                for v in range(self.factors[i]):
                    yield (v,) + rest
        return iter(sorted(rec(0)))

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        if not self.factors:
            return "AbelianGroup(trivial)"
        return "AbelianGroup(%s)" % "x".join("Z" if k == 0 else "Z%d" % k for k in self.factors)

    def to_json(self):
        return {"factors": list(self.factors)}

    @staticmethod
    def from_json(obj):
        return AbelianGroup(obj["factors"])


def product_group(groups):
    factors = []
    for g in groups:
        factors.extend(g.factors)
    return AbelianGroup(factors)


class GroupRingElement:
    """Formal integer combination of elements of an abelian group.

    The invariant values computed downstream live here: keys are group
    elements (integer tuples), coefficients are plain ints, and zero
    coefficients are pruned on construction.
    """

    __slots__ = ("base", "terms")

    def __init__(self, base, terms=None):
        self.base = base
        clean = {}
        for key, c in (terms or {}).items():
            key = base.reduce(key)
            c = clean.get(key, 0) + int(c)
            if c:
                clean[key] = c
            elif key in clean:
                del clean[key]
        self.terms = clean

    @staticmethod
    def delta(base, key, coeff=1):
        return GroupRingElement(base, {tuple(key): coeff})

    def __add__(self, other):
        if self.base != other.base:
            raise ValueError("mismatched group ring bases")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return GroupRingElement(self.base, terms)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, n):
        return GroupRingElement(self.base, {k: n * c for k, c in self.terms.items()})

    def __mul__(self, other):
        """Convolution product: group addition on keys."""
        if self.base != other.base:
            raise ValueError("mismatched group ring bases")
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = self.base.add(k1, k2)
                terms[k] = terms.get(k, 0) + c1 * c2
        return GroupRingElement(self.base, terms)

    def augmentation(self):
        return sum(self.terms.values())

    def __eq__(self, other):
        return (isinstance(other, GroupRingElement)
                and self.base == other.base and self.terms == other.terms)

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "GroupRingElement(0)"
        bits = []
        for k in sorted(self.terms):
            c = self.terms[k]
            bits.append("%+d*%s" % (c, list(k)))
        return "GroupRingElement(%s)" % " ".join(bits)

    def to_json(self):
        items = sorted(self.terms.items())
        return {
            "base": self.base.to_json(),
            "terms": [{"key": list(k), "coeff": c} for k, c in items],
        }

    @staticmethod
    def from_json(obj):
        base = AbelianGroup.from_json(obj["base"])
        return GroupRingElement(base, {tuple(t["key"]): t["coeff"] for t in obj["terms"]})


class Character:
    """Homomorphism from an abelian group into the roots of unity of order N.

    chi(a) = zeta_N ** (sum_i exponents[i] * a_i).  Well-definedness on a
    finite factor Z/k needs exponents[i] * k = 0 mod N.
    """

    __slots__ = ("source", "root_order", "exponents")

    def __init__(self, source, root_order, exponents):
        if root_order < 1:
            raise ValueError("root order must be positive")
        exponents = tuple(int(e) % root_order for e in exponents)
        if len(exponents) != len(source.factors):
            raise ValueError("need one exponent per factor")
        for e, k in zip(exponents, source.factors):
            if k and (e * k) % root_order != 0:
                raise ValueError(
                    "exponent %d is not well defined on a Z%d factor with root order %d"
                    % (e, k, root_order))
        self.source = source
        self.root_order = root_order
        self.exponents = exponents

    def exponent_of(self, a):
        return sum(e * v for e, v in zip(self.exponents, a)) % self.root_order

    def apply(self, a):
        return Cyclotomic.zeta(self.root_order, self.exponent_of(a))

    def to_json(self):
        return {"root_order": self.root_order, "exponents": list(self.exponents)}

    @staticmethod
    def from_json(source, obj):
        return Character(source, obj["root_order"], obj["exponents"])

    def __repr__(self):
        return "Character(N=%d, exponents=%s)" % (self.root_order, list(self.exponents))


def character_apply(chi, a):
    """Apply a character to a single group element, yielding a Cyclotomic."""
    return chi.apply(a)


def ring_element_character_sum(chi, elem, pair_width=None):
    """Push a GroupRingElement through a character.

    Keys are interpreted as concatenated blocks of chi.source elements (the
    invariant values downstream store tuples of pairs this way); each block is
    mapped through chi and the results multiplied, then summed with the
    integer coefficients.
    """
    w = len(chi.source.factors)
    total = Cyclotomic.zero(chi.root_order)
    for key, c in elem.terms.items():
        if len(key) % w != 0:
            raise ValueError("key width %d is not a multiple of the character source width %d"
                             % (len(key), w))
        exp = 0
        for i in range(0, len(key), w):
            exp += chi.exponent_of(key[i:i + w])
        total = total + Cyclotomic.from_powers(chi.root_order, {exp: c})
    return total


def dumps_canonical(obj):
    """Deterministic JSON used by reports and file formats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
