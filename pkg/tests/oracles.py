"""Independent reference computations used to cross-check the library.

Everything here works on dense nested lists of Fractions and uses its own
elimination, so a bug in the library's sparse code paths cannot hide behind
the same bug in the oracle.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def sgn(k):
    return -1 if k % 2 else 1


def dense_table(alg):
    """``T[i][j][k]``: coefficient of ``e_k`` in ``[e_i, e_j]``."""
    n = alg.dim
    return [[[alg.table[i][j].get(k, 0) for k in range(n)] for j in range(n)] for i in range(n)]


def br(T, x, y):
    n = len(T)
    out = [0] * n
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            c = x[i] * y[j]
            for k in range(n):
                if T[i][j][k]:
                    out[k] += c * T[i][j][k]
    return out


def e(n, i):
    return [1 if k == i else 0 for k in range(n)]


def super_jacobi_ok(T, par):
    """Derivation form: ``[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]``."""
    n = len(T)
    for i, j in product(range(n), repeat=2):
        want = [-sgn(par[i] * par[j]) * v for v in T[j][i]]
        if T[i][j] != want:
            return False
        if any(T[i][j][k] and (par[i] + par[j] + par[k]) % 2 for k in range(n)):
            return False
    for i, j, k in product(range(n), repeat=3):
        lhs = br(T, e(n, i), T[j][k])
        a = br(T, T[i][j], e(n, k))
        b = br(T, e(n, j), T[i][k])
        s = sgn(par[i] * par[j])
        if any(lhs[r] != a[r] + s * b[r] for r in range(n)):
            return False
    return True


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` by plain Gauss-Jordan on dense rows."""
    A = [[Fraction(v) for v in r] for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(A)) if A[k][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for k in range(len(A)):
            if k != r and A[k][c] != 0:
                f = A[k][c]
                A[k] = [a - f * b for a, b in zip(A[k], A[r])]
        piv.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in enumerate(piv):
            x[c] = -A[row][f]
        basis.append(x)
    return basis


def rank(rows, ncols):
    return ncols - len(nullspace(rows, ncols))


def center_dim(T):
    """``dim {z : [z, e_j] = 0 for all j}`` from the dense table."""
    n = len(T)
    rows = [[T[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    return len(nullspace(rows, n)) if rows else n


# -- g(n) as actual matrices --------------------------------------------------


def gn_matrix(label, n):
    blk, i, j = label[0], int(label[1]) - 1, int(label[2]) - 1
    ro, co = {"a": (0, 0), "d": (n, n), "b": (0, n), "c": (n, 0)}[blk]
    M = [[0] * (2 * n) for _ in range(2 * n)]
    M[ro + i][co + j] = 1
    return M


def matmul(A, B):
    return [[sum(A[r][k] * B[k][c] for k in range(len(B))) for c in range(len(B[0]))] for r in range(len(A))]


def supercomm(A, pa, B, pb):
    AB, BA = matmul(A, B), matmul(B, A)
    s = sgn(pa * pb)
    return [[x - s * y for x, y in zip(r1, r2)] for r1, r2 in zip(AB, BA)]


def gn_table_matches(alg, n):
    """Recompute every bracket of g(n) as a supercommutator in gl(n|n)."""
    labels = alg.space.labels
    par = alg.space.parities
    mats = [gn_matrix(lab, n) for lab in labels]
    T = dense_table(alg)
    N = 2 * n
    for i, j in product(range(alg.dim), repeat=2):
        C = supercomm(mats[i], par[i], mats[j], par[j])
        S = [[sum(T[i][j][k] * mats[k][r][c] for k in range(alg.dim)) for c in range(N)] for r in range(N)]
        if C != S:
            return False
    return True


# -- W(n) as superderivations of the exterior algebra ---------------------------


def _wmul(I, J):
    """Product of exterior monomials as (sign, sorted tuple) or (0, None)."""
    if set(I) & set(J):
        return 0, None
    seq = list(I) + list(J)
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return sgn(inv), tuple(sorted(seq))


def _apply(D, pD, poly):
    """Apply the superderivation with generator images ``D`` to a polynomial dict."""
    out = {}
    for mon, c in poly.items():
        for t, g in enumerate(mon):
            s0 = sgn(pD * t)
            left, right = mon[:t], mon[t + 1:]
            for img, v in D.get(g, {}).items():
                s1, m1 = _wmul(left, img)
                if not s1:
                    continue
                s2, m2 = _wmul(m1, right)
                if not s2:
                    continue
                out[m2] = out.get(m2, 0) + c * v * s0 * s1 * s2
    return {m: v for m, v in out.items() if v}


def cartan_table_matches(alg, n):
    """Check ``[xi^I d_j, xi^J d_k]`` by evaluating the supercommutator on generators."""
    labels = alg.space.labels
    par = alg.space.parities

    def parse(lab):
        head, j = lab.split("d")
        I = () if head == "1" else tuple(int(t) - 1 for t in head.split("x")[1:])
        return {int(j) - 1: {I: 1}}

    ders = [parse(lab) for lab in labels]
    T = dense_table(alg)
    for a, b in product(range(alg.dim), repeat=2):
        for g in range(n):
            x = {(g,): 1}
            u = _apply(ders[a], par[a], _apply(ders[b], par[b], x))
            v = _apply(ders[b], par[b], _apply(ders[a], par[a], x))
            s = sgn(par[a] * par[b])
            lhs = dict(u)
            for m, c in v.items():
                lhs[m] = lhs.get(m, 0) - s * c
            lhs = {m: c for m, c in lhs.items() if c}
            rhs = {}
            for k in range(alg.dim):
                if T[a][b][k]:
                    for m, c in ders[k].get(g, {}).items():
                        rhs[m] = rhs.get(m, 0) + T[a][b][k] * c
            rhs = {m: c for m, c in rhs.items() if c}
            if lhs != rhs:
                return False
    return True


# -- Chevalley-Eilenberg differential in low degree ----------------------------


def delta1(T, f):
    """``(df)(x, y) = -f([x, y])``."""
    n = len(T)
    return [[-sum(T[x][y][k] * f[k] for k in range(n)) for y in range(n)] for x in range(n)]


def delta2(T, par, phi):
    """``-phi([x,y],z) + (-1)^{|y||z|} phi([x,z],y) - (-1)^{|x|(|y|+|z|)} phi([y,z],x)``."""
    n = len(T)

    def ph(v, z):
        return sum(v[k] * phi[k][z] for k in range(n) if v[k])

    out = [[[0] * n for _ in range(n)] for _ in range(n)]
    for x, y, z in product(range(n), repeat=3):
        out[x][y][z] = (
            -ph(T[x][y], z)
            + sgn(par[y] * par[z]) * ph(T[x][z], y)
            - sgn(par[x] * (par[y] + par[z])) * ph(T[y][z], x)
        )
    return out


# -- invariant bilinear forms, no symmetry assumed -----------------------------


def all_invariant_forms(alg):
    """Basis of every bilinear form with ``B([x,y],z) = B(x,[y,z])``.

    No parity or symmetry constraint is imposed, so the result bounds the
    space of invariant scalar products from above.
    """
    n = alg.dim
    T = dense_table(alg)
    rows = set()
    for x, y, z in product(range(n), repeat=3):
        row = [0] * (n * n)
        for k in range(n):
            if T[x][y][k]:
                row[k * n + z] += T[x][y][k]
            if T[y][z][k]:
                row[x * n + k] -= T[y][z][k]
        if any(row):
            rows.add(tuple(row))
    rows = sorted(rows, key=lambda r: sum(1 for v in r if v))
    return [[[v[i * n + j] for j in range(n)] for i in range(n)] for v in nullspace(rows, n * n)]


def det(M):
    A = [[Fraction(v) for v in r] for r in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return d
