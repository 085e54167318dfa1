"""Exact integer matrix routines: Smith normal form, kernels, linear solves.

Everything is plain Python ints in lists of lists, so intermediate entries can
grow without overflow.  Matrix sizes in this package stay in the hundreds, so
the classical elimination algorithms are fast enough and easy to audit.
"""

from __future__ import annotations

from math import gcd


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    n_inner = len(B)
    if A and len(A[0]) != n_inner:
        raise ValueError("shape mismatch")
    Bt = list(zip(*B)) if B else []
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = 0
            for a, b in zip(row, col):
                if a and b:
                    s += a * b
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


class SmithForm:
    """U * A * V = S with U, V unimodular and S diagonal.

    ``diag`` holds the invariant factors (nonnegative, divisibility chain),
    ``rank`` the number of nonzero ones.  The transform matrices are only
    present when requested.
    """

    __slots__ = ("diag", "rank", "rows", "cols", "U", "Uinv", "V", "Vinv")

    def __init__(self, diag, rank, rows, cols, U, Uinv, V, Vinv):
        self.diag = diag
        self.rank = rank
        self.rows = rows
        self.cols = cols
        self.U = U
        self.Uinv = Uinv
        self.V = V
        self.Vinv = Vinv


def smith_normal_form(A, want_u=True, want_uinv=False, want_v=True, want_vinv=False):
    M = [list(map(int, row)) for row in A]
    m = len(M)
    n = len(M[0]) if M else 0
    U = identity_matrix(m) if (want_u or want_uinv) else None
    Uinv = identity_matrix(m) if want_uinv else None
    V = identity_matrix(n) if (want_v or want_vinv) else None
    Vinv = identity_matrix(n) if want_vinv else None

    def row_swap(i, j):
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if Uinv is not None:
            for r in Uinv:
                r[i], r[j] = r[j], r[i]

    def row_scale(i):
        M[i] = [-x for x in M[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]
        if Uinv is not None:
            for r in Uinv:
                r[i] = -r[i]

    def row_add(i, j, q):
        # row_i += q * row_j
        if q == 0:
            return
        Mi, Mj = M[i], M[j]
        for k in range(n):
            if Mj[k]:
                Mi[k] += q * Mj[k]
        if U is not None:
            Ui, Uj = U[i], U[j]
            for k in range(m):
                if Uj[k]:
                    Ui[k] += q * Uj[k]
        if Uinv is not None:
            for r in Uinv:
                if r[i]:
                    r[j] -= q * r[i]

    def col_swap(i, j):
        if i == j:
            return
        for r in M:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]
        if Vinv is not None:
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_scale(i):
        for r in M:
            r[i] = -r[i]
        if V is not None:
            for r in V:
                r[i] = -r[i]
        if Vinv is not None:
            Vinv[i] = [-x for x in Vinv[i]]

    def col_add(i, j, q):
        # col_i += q * col_j
        if q == 0:
            return
        for r in M:
            if r[j]:
                r[i] += q * r[j]
        if V is not None:
            for r in V:
                if r[j]:
                    r[i] += q * r[j]
        if Vinv is not None:
            Ri, Rj = Vinv[i], Vinv[j]
            for k in range(n):
                if Ri[k]:
                    Rj[k] -= q * Ri[k]

    t = 0
    limit = min(m, n)
    while t < limit:
        # locate a pivot of smallest magnitude in the trailing block
        pi = pj = -1
        best = None
        for i in range(t, m):
            Mi = M[i]
            for j in range(t, n):
                v = Mi[j]
                if v and (best is None or abs(v) < best):
                    best, pi, pj = abs(v), i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best is None:
            break
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            p = M[t][t]
            # make entries below divisible, shrinking the pivot on remainders
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    row_add(i, t, -q)
                    if M[i][t]:
                        row_swap(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    col_add(j, t, -q)
                    if M[t][j]:
                        col_swap(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # block is cleared; enforce divisibility of the remaining entries
            p = M[t][t]
            offender = None
            for i in range(t + 1, m):
                Mi = M[i]
                for j in range(t + 1, n):
                    if Mi[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if M[t][t] < 0:
            row_scale(t)
        t += 1

    diag = [M[i][i] if i < n else 0 for i in range(limit)]
    rank = sum(1 for d in diag if d)
    return SmithForm(diag, rank, m, n, U if want_u else None, Uinv, V if want_v else None, Vinv)


def kernel_basis(A):
    """Columns forming a basis of the integer kernel lattice of A.

    The basis is saturated: any integer vector in ker(A) is an integer
    combination of these columns, because they are columns of a unimodular
    matrix.
    """
    sf = smith_normal_form(A, want_u=False, want_v=True)
    n = sf.cols
    return [[sf.V[i][j] for j in range(sf.rank, n)] for i in range(n)]


def solve_integer(A, b):
    """One integer solution of A x = b, or None."""
    sf = smith_normal_form(A, want_u=True, want_v=True)
    c = mat_vec(sf.U, b)
    n = sf.cols
    y = [0] * n
    for i in range(sf.rows):
        s = sf.diag[i] if i < len(sf.diag) else 0
        if s:
            if c[i] % s:
                return None
            y[i] = c[i] // s
        elif c[i]:
            return None
    return mat_vec(sf.V, y)


def _modinv(a, k):
    a %= k
    g, x = _ext_gcd(a, k)
    if g != 1:
        raise ValueError("not invertible")
    return x % k


def _ext_gcd(a, b):
    x0, x1 = 1, 0
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
    return a, x0


def solve_mod(A, b, k):
    """One solution of A x = b (mod k), or None.  k >= 2, composite allowed."""
    sf = smith_normal_form(A, want_u=True, want_v=True)
    c = [v % k for v in mat_vec(sf.U, b)]
    n = sf.cols
    y = [0] * n
    for i in range(sf.rows):
        s = sf.diag[i] if i < len(sf.diag) else 0
        ci = c[i] if i < len(c) else 0
        if s == 0:
            if ci % k:
                return None
            continue
        g = gcd(s, k)
        if ci % g:
            return None
        kk = k // g
        if kk == 1:
            y[i] = 0
        else:
            y[i] = ((ci // g) * _modinv(s // g, kk)) % kk
    return [v % k for v in mat_vec(sf.V, y)]


class _EntryOverflow(Exception):
    pass


def smith_normal_form_np(A, want_u=False, want_uinv=False, want_v=True, want_vinv=True):
    """Numpy-backed Smith form for tall matrices with small entries.

    Same contract as smith_normal_form.  Entries are tracked in int64 with an
    overflow guard; if intermediate growth ever trips it, the computation is
    redone with exact Python integers.  The incidence-style differentials this
    package feeds in have unit pivots almost everywhere, so the guard is a
    safety net rather than an expected path.
    """
    import numpy as np

    try:
        return _snf_np_inner(np, A, want_u, want_uinv, want_v, want_vinv)
    except _EntryOverflow:
        return smith_normal_form(A, want_u=want_u, want_uinv=want_uinv,
                                 want_v=want_v, want_vinv=want_vinv)


_GUARD = 1 << 56


def _snf_np_inner(np, A, want_u, want_uinv, want_v, want_vinv):
    M = np.array(A, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("need a matrix")
    m, n = M.shape
    U = np.eye(m, dtype=np.int64) if (want_u or want_uinv) else None
    Uinv = np.eye(m, dtype=np.int64) if want_uinv else None
    V = np.eye(n, dtype=np.int64) if (want_v or want_vinv) else None
    Vinv = np.eye(n, dtype=np.int64) if want_vinv else None

    def guard():
        if abs(M).max(initial=0) > _GUARD:
            raise _EntryOverflow
        for X in (U, Uinv, V, Vinv):
            if X is not None and abs(X).max(initial=0) > _GUARD:
                raise _EntryOverflow

    def row_swap(i, j):
        if i == j:
            return
        M[[i, j]] = M[[j, i]]
        if U is not None:
            U[[i, j]] = U[[j, i]]
        if Uinv is not None:
            Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def col_swap(i, j):
        if i == j:
            return
        M[:, [i, j]] = M[:, [j, i]]
        if V is not None:
            V[:, [i, j]] = V[:, [j, i]]
        if Vinv is not None:
            Vinv[[i, j]] = Vinv[[j, i]]

    def row_axpy(i, j, q):
        # row_i += q * row_j
        M[i] += q * M[j]
        if U is not None:
            U[i] += q * U[j]
        if Uinv is not None:
            Uinv[:, j] -= q * Uinv[:, i]

    def col_axpy(i, j, q):
        # col_i += q * col_j
        M[:, i] += q * M[:, j]
        if V is not None:
            V[:, i] += q * V[:, j]
        if Vinv is not None:
            Vinv[j] -= q * Vinv[i]

    t = 0
    limit = min(m, n)
    while t < limit:
        sub = M[t:, t:]
        nz_r, nz_c = np.nonzero(sub)
        if len(nz_r) == 0:
            break
        vals = np.abs(sub[nz_r, nz_c])
        pick = int(np.argmin(vals))
        row_swap(t, t + int(nz_r[pick]))
        col_swap(t, t + int(nz_c[pick]))
        while True:
            p = int(M[t, t])
            if p == 0:
                raise _EntryOverflow  # cannot happen; bail out defensively
            col_below = M[t + 1:, t]
            if np.any(col_below % p):
                # a remainder will give a smaller pivot; do one exact pass then swap
                q = col_below // p
                if np.any(q):
                    M[t + 1:, :] -= q[:, None] * M[t, :][None, :]
                    if U is not None:
                        U[t + 1:, :] -= q[:, None] * U[t, :][None, :]
                    if Uinv is not None:
                        Uinv[:, t] += Uinv[:, t + 1:] @ q
                i = t + 1 + int(np.argmax(M[t + 1:, t] != 0))
                row_swap(t, i)
                guard()
                continue
            row_right = M[t, t + 1:]
            if np.any(row_right % p):
                q = row_right // p
                if np.any(q):
                    M[:, t + 1:] -= M[:, t][:, None] * q[None, :]
                    if V is not None:
                        V[:, t + 1:] -= V[:, t][:, None] * q[None, :]
                    if Vinv is not None:
                        Vinv[t] += q @ Vinv[t + 1:]
                j = t + 1 + int(np.argmax(M[t, t + 1:] != 0))
                col_swap(t, j)
                guard()
                continue
            # exact clears
            q = M[t + 1:, t] // p
            if np.any(q):
                M[t + 1:, :] -= q[:, None] * M[t, :][None, :]
                if U is not None:
                    U[t + 1:, :] -= q[:, None] * U[t, :][None, :]
                if Uinv is not None:
                    Uinv[:, t] += Uinv[:, t + 1:] @ q
            q = M[t, t + 1:] // p
            if np.any(q):
                M[:, t + 1:] -= M[:, t][:, None] * q[None, :]
                if V is not None:
                    V[:, t + 1:] -= V[:, t][:, None] * q[None, :]
                if Vinv is not None:
                    Vinv[t] += q @ Vinv[t + 1:]
            guard()
            rem = M[t + 1:, t + 1:] % p
            bad = np.nonzero(rem.any(axis=1))[0] if rem.size else []
            if len(bad) == 0:
                break
            row_axpy(t, t + 1 + int(bad[0]), 1)
            guard()
        if M[t, t] < 0:
            M[t] = -M[t]
            if U is not None:
                U[t] = -U[t]
            if Uinv is not None:
                Uinv[:, t] = -Uinv[:, t]
        t += 1

    diag = [int(M[i, i]) if i < n else 0 for i in range(limit)]
    rank = sum(1 for d in diag if d)

    def to_list(X):
        return None if X is None else [[int(v) for v in row] for row in X]

    return SmithForm(diag, rank, m, n,
                     to_list(U) if want_u else None, to_list(Uinv),
                     to_list(V) if want_v else None, to_list(Vinv))


def mat_mod(A, k):
    return [[v % k for v in row] for row in A]


def is_zero_matrix(A):
    return all(all(v == 0 for v in row) for row in A)
