"""Scalar Chevalley-Eilenberg cochains (trivial coefficients) and dual-valued
2-cochains ``w: g x g -> g*``.

A scalar k-cochain is super-antisymmetric:
``c(.., a, b, ..) = -(-1)^{|a||b|} c(.., b, a, ..)``.  It is stored on
non-decreasing index tuples; a repeated even index forces the value 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Mapping

from . import linalg
from .core import Report, SuperAlgebra, sign
from .scalars import norm

__all__ = [
    "CoboundaryResult",
    "Cochain",
    "DualCochain",
    "SPhiResult",
    "ce_differential",
    "coadjoint_action",
    "cochain_keys",
    "cocycle_space",
    "dual_cocycle_witness",
    "hat_correspondence",
    "is_coboundary_3",
    "is_cocycle",
    "is_dual_cocycle",
    "is_supercyclic",
    "s_phi_isometry",
    "supercyclic_cocycle_space",
    "unhat",
]


def _canon(parities, idx):
    """Sort ``idx`` into canonical order; return ``(sign, key)`` or ``(0, None)``."""
    idx = list(idx)
    s = 1
    n = len(idx)
    for a in range(n):
        for b in range(n - 1 - a):
            x, y = idx[b], idx[b + 1]
            if x > y:
                idx[b], idx[b + 1] = y, x
                s = -s * sign(parities[x] * parities[y])
    for a in range(n - 1):
        if idx[a] == idx[a + 1] and parities[idx[a]] == 0:
            return 0, None
    return s, tuple(idx)


def cochain_keys(alg: SuperAlgebra, k: int, even: bool = True) -> list[tuple]:
    """Canonical index tuples of degree ``k`` (only parity-even ones by default)."""
    p = alg.space.parities
    out = []
    for key in combinations_with_replacement(range(alg.dim), k):
        if any(key[a] == key[a + 1] and p[key[a]] == 0 for a in range(k - 1)):
            continue
        if even and sum(p[i] for i in key) % 2:
            continue
        out.append(key)
    return out


@dataclass(frozen=True)
class Cochain:
    """Scalar ``degree``-cochain on ``alg`` with trivial coefficients."""

    alg: SuperAlgebra
    degree: int
    values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        p = self.alg.space.parities
        clean = {}
        for key, v in dict(self.values).items():
            if len(key) != self.degree:
                raise ValueError(f"key {key} has wrong length for degree {self.degree}")
            s, ck = _canon(p, key)
            if s == 0:
                if v != 0:
                    raise ValueError(f"value at {key} must vanish (repeated even index)")
                continue
            if ck in clean and ck != tuple(key):
                raise ValueError(f"duplicate entries for {ck}")
            val = norm(s * v)
            if val != 0:
                clean[ck] = val
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    def __call__(self, *idx):
        s, key = _canon(self.alg.space.parities, idx)
        if s == 0:
            return 0
        return norm(s * self.values.get(key, 0))

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.alg == other.alg and self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, tuple(self.values.items())))

    def is_zero(self) -> bool:
        return not self.values

    def is_even(self) -> bool:
        p = self.alg.space.parities
        return all(sum(p[i] for i in k) % 2 == 0 for k in self.values)

    def __add__(self, other: "Cochain") -> "Cochain":
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, 0) + v
        return Cochain(self.alg, self.degree, vals)

    def __neg__(self) -> "Cochain":
        return Cochain(self.alg, self.degree, {k: -v for k, v in self.values.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scaled(self, c) -> "Cochain":
        return Cochain(self.alg, self.degree, {k: c * v for k, v in self.values.items()})

    def dense(self) -> tuple:
        """Full tensor (degree <= 3 only)."""
        n = self.alg.dim
        if self.degree == 1:
            return tuple(self(i) for i in range(n))
        if self.degree == 2:
            return tuple(tuple(self(i, j) for j in range(n)) for i in range(n))
        if self.degree == 3:
            return tuple(
                tuple(tuple(self(i, j, k) for k in range(n)) for j in range(n)) for i in range(n)
            )
        raise ValueError("dense form only for degree 1..3")

    @classmethod
    def zero(cls, alg: SuperAlgebra, degree: int) -> "Cochain":
        return cls(alg, degree, {})

    @classmethod
    def from_dense(cls, alg: SuperAlgebra, tensor) -> "Cochain":
        """Read a dense 2- or 3-tensor, checking super-antisymmetry."""
        n = alg.dim
        if n and isinstance(tensor[0][0], (tuple, list)):
            degree = 3
            get = lambda key: tensor[key[0]][key[1]][key[2]]  # noqa: E731
        else:
            degree = 2
            get = lambda key: tensor[key[0]][key[1]]  # noqa: E731
        keys = cochain_keys(alg, degree, even=False)
        c = cls(alg, degree, {k: get(k) for k in keys})
        for key in _all_tuples(n, degree):
            if c(*key) != get(key):
                raise ValueError(f"tensor is not super-antisymmetric at {key}")
        return c


def _all_tuples(n, k):
    if k == 0:
        yield ()
        return
    for rest in _all_tuples(n, k - 1):
        for i in range(n):
            yield rest + (i,)


@lru_cache(maxsize=64)
def _delta_rows(alg: SuperAlgebra, k: int) -> dict:
    """Sparse matrix of ``delta: C^k -> C^{k+1}`` on canonical keys (even part)."""
    p = alg.space.parities
    T = alg.table
    rows = {}
    for key in cochain_keys(alg, k + 1):
        row: dict = {}
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                xi, xj = key[i], key[j]
                eps = sign(p[xi] * sum(p[key[l]] for l in range(i)))
                eps *= sign(p[xj] * sum(p[key[l]] for l in range(j) if l != i))
                s0 = sign(i + j) * eps
                rest = tuple(key[l] for l in range(k + 1) if l not in (i, j))
                for m, v in T[xi][xj].items():
                    s, ck = _canon(p, (m,) + rest)
                    if s:
                        row[ck] = row.get(ck, 0) + s0 * s * v
        row = {c: norm(v) for c, v in row.items() if v != 0}
        if row:
            rows[key] = row
    return rows


def ce_differential(c: Cochain) -> Cochain:
    """``(dc)(x_0..x_k) = sum_{i<j} (-1)^{i+j} eps_ij c([x_i,x_j], x_0..^i..^j..x_k)``.

    ``eps_ij`` is the Koszul sign of moving ``x_i`` and ``x_j`` to the front.
    """
    if not c.is_even():
        raise ValueError("only even cochains are supported")
    if c.degree > 3:
        raise ValueError("cochains of degree > 3 are not supported")
    rows = _delta_rows(c.alg, c.degree)
    vals = {}
    for key, row in rows.items():
        tot = sum((v * c.values.get(col, 0) for col, v in row.items()), 0)
        if tot != 0:
            vals[key] = tot
    return Cochain(c.alg, c.degree + 1, vals)


def is_cocycle(c: Cochain) -> bool:
    return ce_differential(c).is_zero()


def cocycle_space(alg: SuperAlgebra, k: int) -> list[Cochain]:
    """Basis of even scalar k-cocycles."""
    cols = cochain_keys(alg, k)
    index = {key: a for a, key in enumerate(cols)}
    rows = [{index[c]: v for c, v in row.items()} for row in _delta_rows(alg, k).values()]
    return [
        Cochain(alg, k, {cols[a]: v for a, v in enumerate(vec) if v != 0})
        for vec in linalg.kernel(rows, len(cols))
    ]


@dataclass
class CoboundaryResult:
    is_coboundary: bool
    phi: Cochain | None = None

    def __bool__(self):
        return self.is_coboundary


def is_coboundary_3(w_hat: Cochain) -> CoboundaryResult:
    """Solve ``d(phi) = w_hat`` for an even 2-cochain ``phi``."""
    if w_hat.degree != 3:
        raise ValueError("expected a 3-cochain")
    alg = w_hat.alg
    cols = cochain_keys(alg, 2)
    index = {key: a for a, key in enumerate(cols)}
    rows_map = _delta_rows(alg, 2)
    keys = cochain_keys(alg, 3)
    if any(k not in set(keys) for k in w_hat.values):
        return CoboundaryResult(False)
    rows = [{index[c]: v for c, v in rows_map.get(key, {}).items()} for key in keys]
    rhs = [w_hat.values.get(key, 0) for key in keys]
    sol = linalg.solve(rows, rhs, len(cols))
    if sol is None:
        return CoboundaryResult(False)
    return CoboundaryResult(True, Cochain(alg, 2, {cols[a]: v for a, v in enumerate(sol) if v != 0}))


# -- dual-valued 2-cochains ----------------------------------------------------------


@dataclass(frozen=True)
class DualCochain:
    """``tensor[i][j][k] = w(e_i, e_j)(e_k)``."""

    alg: SuperAlgebra
    tensor: tuple

    def __post_init__(self):
        n = self.alg.dim
        t = tuple(tuple(tuple(norm(v) for v in r) for r in plane) for plane in self.tensor)
        if len(t) != n or any(len(r) != n or any(len(v) != n for v in r) for r in t):
            raise ValueError(f"tensor must have shape ({n}, {n}, {n})")
        object.__setattr__(self, "tensor", t)

    @classmethod
    def zero(cls, alg: SuperAlgebra) -> "DualCochain":
        n = alg.dim
        return cls(alg, tuple(tuple((0,) * n for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_entries(cls, alg: SuperAlgebra, entries: Mapping) -> "DualCochain":
        """Build from ``{(i, j, k): value}``, filling the super-antisymmetric partner."""
        n = alg.dim
        p = alg.space.parities
        t = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), v in entries.items():
            t[i][j][k] = v
            if i != j:
                t[j][i][k] = -sign(p[i] * p[j]) * v
        return cls(alg, t)

    def __call__(self, i, j, k):
        return self.tensor[i][j][k]

    def is_zero(self) -> bool:
        return all(v == 0 for plane in self.tensor for r in plane for v in r)

    def even_witness(self):
        p = self.alg.space.parities
        for i, plane in enumerate(self.tensor):
            for j, r in enumerate(plane):
                for k, v in enumerate(r):
                    if v != 0 and (p[i] + p[j] + p[k]) % 2:
                        return (i, j, k)
        return None

    def antisymmetry_witness(self):
        p = self.alg.space.parities
        t = self.tensor
        n = self.alg.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[i][j][k] != -sign(p[i] * p[j]) * t[j][i][k]:
                        return (i, j, k)
        return None

    def __add__(self, other: "DualCochain") -> "DualCochain":
        return DualCochain(
            self.alg,
            tuple(
                tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2))
                for p1, p2 in zip(self.tensor, other.tensor)
            ),
        )

    def scaled(self, c) -> "DualCochain":
        return DualCochain(
            self.alg, tuple(tuple(tuple(c * a for a in r) for r in plane) for plane in self.tensor)
        )

    def __sub__(self, other: "DualCochain") -> "DualCochain":
        return self + other.scaled(-1)


def supercyclic_witness(w: DualCochain):
    p = w.alg.space.parities
    t = w.tensor
    n = w.alg.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if t[i][j][k] != sign((p[j] + p[k]) * p[i]) * t[j][k][i]:
                    return (i, j, k)
    return None


def is_supercyclic(w: DualCochain) -> bool:
    """``w(A,B)(C) = (-1)^{(|B|+|C|)|A|} w(B,C)(A)`` on all basis triples."""
    return supercyclic_witness(w) is None


def coadjoint_action(alg: SuperAlgebra, a: int, F, pF: int) -> tuple:
    """``(e_a . F)(e_d) = -(-1)^{|a||F|} F([e_a, e_d])`` for ``F`` given by coordinates."""
    n = alg.dim
    s = -sign(alg.parity(a) * pF)
    out = []
    for d in range(n):
        tot = sum((v * F[m] for m, v in alg.table[a][d].items()), 0)
        out.append(norm(s * tot))
    return tuple(out)


def _dual_cocycle_value(alg, t, a, b, c, d):
    """Cyclic sum of ``A.w(B,C) + w(A,[B,C])`` evaluated at ``e_d``."""
    p = alg.space.parities
    T = alg.table
    tot = 0
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        s = sign(p[z] * p[x])
        # (e_x . w(e_y, e_z))(e_d)
        pF = (p[y] + p[z]) % 2
        inner = sum((v * t[y][z][m] for m, v in T[x][d].items()), 0)
        term = -sign(p[x] * pF) * inner
        term += sum((v * t[x][m][d] for m, v in T[y][z].items()), 0)
        tot += s * term
    return norm(tot)


def dual_cocycle_witness(w: DualCochain):
    n = w.alg.dim
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if _dual_cocycle_value(w.alg, w.tensor, a, b, c, d) != 0:
                        return (a, b, c, d)
    return None


def is_dual_cocycle(w: DualCochain) -> bool:
    """2-cocycle condition for ``w`` with values in the coadjoint module."""
    return dual_cocycle_witness(w) is None


def supercyclic_cocycle_space(alg: SuperAlgebra) -> list[DualCochain]:
    """Basis of even supercyclic dual-valued 2-cocycles, from their linear system."""
    n = alg.dim
    p = alg.space.parities
    var = {}
    for i in range(n):
        for j in range(i, n):
            if i == j and p[i] == 0:
                continue
            for k in range(n):
                if (p[i] + p[j] + p[k]) % 2 == 0:
                    var[(i, j, k)] = len(var)

    def expr(i, j, k):
        if (p[i] + p[j] + p[k]) % 2 or (i == j and p[i] == 0):
            return {}
        if i <= j:
            return {var[(i, j, k)]: 1}
        return {var[(j, i, k)]: -sign(p[i] * p[j])}

    e = linalg.Echelon(len(var))

    def add(row):
        row = {x: norm(v) for x, v in row.items() if v != 0}
        if row:
            e.add(row)

    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = dict(expr(i, j, k))
                s = sign((p[j] + p[k]) * p[i])
                for x, v in expr(j, k, i).items():
                    row[x] = row.get(x, 0) - s * v
                add(row)
    T = alg.table
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if (p[a] + p[b] + p[c] + p[d]) % 2:
                        continue
                    row: dict = {}
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        s = sign(p[z] * p[x])
                        pF = (p[y] + p[z]) % 2
                        s1 = -s * sign(p[x] * pF)
                        for m, v in T[x][d].items():
                            for var_, cv in expr(y, z, m).items():
                                row[var_] = row.get(var_, 0) + s1 * v * cv
                        for m, v in T[y][z].items():
                            for var_, cv in expr(x, m, d).items():
                                row[var_] = row.get(var_, 0) + s * v * cv
                    add(row)
    out = []
    for sol in e.kernel():
        entries = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    val = sum((cv * sol[x] for x, cv in expr(i, j, k).items()), 0)
                    if val != 0:
                        entries[(i, j, k)] = val
        t = [[[entries.get((i, j, k), 0) for k in range(n)] for j in range(n)] for i in range(n)]
        out.append(DualCochain(alg, t))
    return out


def hat_correspondence(w: DualCochain) -> Cochain:
    """``w_hat(X, Y, Z) = w(X, Y)(Z)`` for a supercyclic even 2-cocycle ``w``."""
    if w.even_witness() is not None or w.antisymmetry_witness() is not None:
        raise ValueError("w must be even and super-antisymmetric")
    wit = supercyclic_witness(w)
    if wit is not None:
        raise ValueError(f"w is not supercyclic (witness {wit})")
    wit = dual_cocycle_witness(w)
    if wit is not None:
        raise ValueError(f"w is not a cocycle (witness {wit})")
    n = w.alg.dim
    vals = {key: w.tensor[key[0]][key[1]][key[2]] for key in cochain_keys(w.alg, 3)}
    c = Cochain(w.alg, 3, vals)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c(i, j, k) != w.tensor[i][j][k]:
                    raise ValueError(f"w_hat is not super-antisymmetric at {(i, j, k)}")
    return c


def unhat(w_hat: Cochain) -> DualCochain:
    """Inverse of :func:`hat_correspondence` on even scalar 3-cocycles."""
    if w_hat.degree != 3 or not w_hat.is_even():
        raise ValueError("expected an even 3-cochain")
    if not is_cocycle(w_hat):
        raise ValueError("w_hat is not a cocycle")
    n = w_hat.alg.dim
    t = tuple(
        tuple(tuple(w_hat(i, j, k) for k in range(n)) for j in range(n)) for i in range(n)
    )
    return DualCochain(w_hat.alg, t)


# -- S_phi ------------------------------------------------------------------------------


@dataclass
class SPhiResult:
    is_isometry: bool
    isometry: object | None
    report: Report

    def __bool__(self):
        return self.is_isometry


def s_phi_isometry(g2: SuperAlgebra, w1: DualCochain, w2: DualCochain, phi: Cochain) -> SPhiResult:
    """Build ``S_phi(X + F) = X + phi(X, .) + F`` from ``T*_{w1}`` to ``T*_{w2}`` and check it."""
    from .core import LinearMap
    from .extensions import tstar_extension
    from .quadratic import verify_isometry

    if phi.degree != 2 or not phi.is_even():
        raise ValueError("phi must be an even 2-cochain")
    src = tstar_extension(g2, w1)
    dst = tstar_extension(g2, w2)
    n = g2.dim
    lay = src.blocks
    N = src.dim
    M = [[0] * N for _ in range(N)]
    for a in range(n):
        M[lay["g2"][a]][lay["g2"][a]] = 1
        M[lay["dual"][a]][lay["dual"][a]] = 1
        for k in range(n):
            v = phi(a, k)
            if v != 0:
                M[lay["dual"][k]][lay["g2"][a]] = v
    S = LinearMap(src.space, dst.space, tuple(tuple(r) for r in M), 0)
    report = verify_isometry(S, src, dst)
    return SPhiResult(report.ok, S if report.ok else None, report)
