"""Extensions: generalized semidirect products, generalized double
extensions, classical double extensions, T*-extensions and extensions by
the one-dimensional odd algebra.

Output basis.  The components ``g2, g1, g2*`` are laid out in this order
inside each parity block (all even vectors first, then all odd ones), so
the result is again a :class:`SuperSpace`.  ``QuadraticSuperAlgebra.blocks``
maps ``"g2"``, ``"g1"`` and ``"dual"`` to the global index of every local
basis vector.  The dual basis satisfies ``e_i*(e_j) = delta_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .cohomology import DualCochain, coadjoint_action, dual_cocycle_witness, supercyclic_witness
from .core import (
    LinearMap,
    Report,
    SuperAlgebra,
    SuperSpace,
    _leibniz_witness,
    is_zero,
    sign,
    supercommutator,
    unit,
    validate_superalgebra,
)
from .quadratic import (
    GramForm,
    QuadraticSuperAlgebra,
    _invariance_witness,
    antisymmetry_witness,
    validate_quadratic,
)
from .scalars import norm

__all__ = [
    "ContextError",
    "ExtensionContext",
    "SemidirectData",
    "classical_double_extension",
    "derive_Phi",
    "derive_chi",
    "generalized_double_extension",
    "layout",
    "odd_line_context",
    "odd_line_extension",
    "semidirect_product",
    "tstar_extension",
    "validate_context",
    "validate_semidirect",
]


class ContextError(ValueError):
    """Invalid extension data; ``report`` lists the failed checks."""

    def __init__(self, message: str, report: Report | None = None):
        self.report = report
        if report is not None:
            fails = "; ".join(c.line() for c in report.failures())
            message = f"{message}: {fails}" if fails else message
        super().__init__(message)


def layout(parts):
    """Lay out named components inside parity blocks.

    ``parts`` is a list of ``(name, SuperSpace, labels)``.  Returns the
    combined :class:`SuperSpace` and ``{name: [global index per local index]}``.
    """
    index = {name: [None] * sp.dim for name, sp, _ in parts}
    labels = []
    pos = 0
    for parity in (0, 1):
        for name, sp, labs in parts:
            for i in range(sp.dim):
                if sp.parity(i) == parity:
                    index[name][i] = pos
                    labels.append(labs[i])
                    pos += 1
    even = sum(sp.even_dim for _, sp, _ in parts)
    if len(set(labels)) != len(labels):
        labels = [f"{name}.{l}" for parity in (0, 1) for name, sp, labs in parts
                  for i, l in enumerate(labs) if sp.parity(i) == parity]
    return SuperSpace(even, pos - even, tuple(labels)), index


def _dual_labels(space: SuperSpace):
    return tuple(f"{l}*" for l in space.labels)


def _as_maps(space_of_algebra: SuperAlgebra, target: SuperSpace, maps) -> tuple:
    out = []
    for i, m in enumerate(maps):
        if not isinstance(m, LinearMap):
            m = LinearMap(target, target, m, space_of_algebra.parity(i))
        out.append(m)
    return tuple(out)


def _col(M, j):
    return tuple(row[j] for row in M)


# -- generalized semidirect product --------------------------------------------------


@dataclass(frozen=True)
class SemidirectData:
    """``F[i]`` is the derivation of ``H`` attached to ``e_i`` of ``g``;
    ``L[i][j]`` is a coordinate vector of ``H``."""

    g: SuperAlgebra
    H: SuperAlgebra
    F: tuple
    L: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "F", _as_maps(self.g, self.H.space, self.F))
        n, m = self.g.dim, self.H.dim
        L = self.L
        if L is None:
            L = tuple(tuple((0,) * m for _ in range(n)) for _ in range(n))
        L = tuple(tuple(tuple(norm(v) for v in vec) for vec in row) for row in L)
        if len(L) != n or any(len(r) != n or any(len(v) != m for v in r) for r in L):
            raise ValueError(f"L must have shape ({n}, {n}, {m})")
        object.__setattr__(self, "L", L)


def validate_semidirect(data: SemidirectData) -> Report:
    g, H = data.g, data.H
    n = g.dim
    pg = g.space.parities
    pH = H.space.parities
    rep = Report("semidirect data")
    rep.add("g-superalgebra", validate_superalgebra(g).ok)
    rep.add("H-superalgebra", validate_superalgebra(H).ok)
    bad = next((i for i, f in enumerate(data.F) if _leibniz_witness(H, f) is not None), None)
    rep.add("F-derivations", bad is None, None if bad is None else (bad,))
    L = data.L
    bad = None
    for i in range(n):
        for j in range(n):
            vec = L[i][j]
            if any(v != 0 and pH[k] != (pg[i] + pg[j]) % 2 for k, v in enumerate(vec)):
                bad = bad or (i, j)
            if any(a != -sign(pg[i] * pg[j]) * b for a, b in zip(vec, L[j][i])):
                bad = bad or (i, j)
    rep.add("L-even-superantisymmetric", bad is None, bad)
    mats = [f.matrix for f in data.F]
    witness = None
    for i in range(n):
        for j in range(n):
            lhs = supercommutator(mats[i], pg[i], mats[j], pg[j])
            for k, v in g.table[i][j].items():
                lhs = tuple(tuple(a - v * b for a, b in zip(r1, r2)) for r1, r2 in zip(lhs, mats[k]))
            ad = _adjoint_of_vector(H, L[i][j])
            if any(norm(a) != b for r1, r2 in zip(lhs, ad) for a, b in zip(r1, r2)):
                witness = (i, j)
                break
        if witness:
            break
    rep.add("twisted-morphism", witness is None, witness)
    witness = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                tot = [0] * H.dim
                for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                    s = sign(pg[x] * pg[z])
                    t1 = linalg.matvec(mats[x], L[y][z])
                    t2 = [0] * H.dim
                    for m, v in g.table[x][y].items():
                        t2 = [a + v * b for a, b in zip(t2, L[m][z])]
                    tot = [a + s * (b - c) for a, b, c in zip(tot, t1, t2)]
                if any(norm(a) != 0 for a in tot):
                    witness = (i, j, k)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("cyclic", witness is None, witness)
    return rep


def _adjoint_of_vector(alg: SuperAlgebra, v) -> tuple:
    n = alg.dim
    cols = [alg.bracket(v, unit(n, j)) for j in range(n)]
    return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))


def semidirect_product(data: SemidirectData) -> SuperAlgebra:
    """``[X+h, Y+l] = [X,Y] + F(X)l - (-1)^{|X||Y|}F(Y)h + L(X,Y) + [h,l]`` on ``g + H``."""
    rep = validate_semidirect(data)
    if not rep.ok:
        raise ContextError("invalid semidirect data", rep)
    g, H = data.g, data.H
    space, idx = layout([("g", g.space, g.space.labels), ("H", H.space, H.space.labels)])
    pg, pH = g.space.parities, H.space.parities
    br: dict = {}

    def put(I, J, k_global, v):
        if v != 0:
            d = br.setdefault((I, J), {})
            d[k_global] = d.get(k_global, 0) + v

    G, Hh = idx["g"], idx["H"]
    for i in range(g.dim):
        for j in range(g.dim):
            for k, v in g.table[i][j].items():
                put(G[i], G[j], G[k], v)
            for k, v in enumerate(data.L[i][j]):
                put(G[i], G[j], Hh[k], v)
        for l in range(H.dim):
            col = _col(data.F[i].matrix, l)
            s = -sign(pg[i] * pH[l])
            for k, v in enumerate(col):
                put(G[i], Hh[l], Hh[k], v)
                put(Hh[l], G[i], Hh[k], s * v)
    for h in range(H.dim):
        for l in range(H.dim):
            for k, v in H.table[h][l].items():
                put(Hh[h], Hh[l], Hh[k], v)
    return SuperAlgebra.from_brackets(space, br, complete=False)


# -- contexts ------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionContext:
    """Data ``(g1, B1, g2, phi, psi, w, gamma)`` of a generalized double extension.

    ``phi[a]`` acts on ``g1`` for the basis vector ``e_a`` of ``g2``;
    ``psi[a][b]`` is a coordinate vector of ``g1``; ``w`` is a
    :class:`DualCochain` on ``g2``; ``gamma`` an optional form on ``g2``.
    """

    g1: SuperAlgebra
    B1: GramForm
    g2: SuperAlgebra
    phi: tuple = None
    psi: tuple = None
    w: DualCochain = None
    gamma: GramForm | None = None

    def __post_init__(self):
        n1, n2 = self.g1.dim, self.g2.dim
        if self.B1.space.dim != n1:
            raise ValueError("B1 does not match g1")
        phi = self.phi
        if phi is None:
            phi = tuple(linalg.zeros(n1, n1) for _ in range(n2))
        if len(phi) != n2:
            raise ValueError("phi needs one map per basis vector of g2")
        object.__setattr__(self, "phi", _as_maps(self.g2, self.g1.space, phi))
        psi = self.psi
        if psi is None:
            psi = tuple(tuple((0,) * n1 for _ in range(n2)) for _ in range(n2))
        psi = tuple(tuple(tuple(norm(v) for v in vec) for vec in row) for row in psi)
        if len(psi) != n2 or any(len(r) != n2 or any(len(v) != n1 for v in r) for r in psi):
            raise ValueError(f"psi must have shape ({n2}, {n2}, {n1})")
        object.__setattr__(self, "psi", psi)
        w = self.w
        if w is None:
            w = DualCochain.zero(self.g2)
        elif not isinstance(w, DualCochain):
            w = DualCochain(self.g2, w)
        object.__setattr__(self, "w", w)
        if self.gamma is not None and self.gamma.space.dim != n2:
            raise ValueError("gamma does not match g2")


def derive_chi(ctx: ExtensionContext) -> tuple:
    """``chi[a][x][b] = chi(e_a, e_x)(e_b) = -(-1)^{|x||b|} B1(psi(a, b), e_x)``."""
    n1, n2 = ctx.g1.dim, ctx.g2.dim
    p1, p2 = ctx.g1.space.parities, ctx.g2.space.parities
    G = ctx.B1.matrix
    return tuple(
        tuple(
            tuple(
                norm(-sign(p1[x] * p2[b]) * sum((v * G[k][x] for k, v in enumerate(ctx.psi[a][b]) if v), 0))
                for b in range(n2)
            )
            for x in range(n1)
        )
        for a in range(n2)
    )


def derive_Phi(ctx: ExtensionContext) -> tuple:
    """``Phi[x][y][a] = Phi(e_x, e_y)(e_a) = (-1)^{|a|(|x|+|y|)} B1(phi(a) e_x, e_y)``."""
    n1, n2 = ctx.g1.dim, ctx.g2.dim
    p1, p2 = ctx.g1.space.parities, ctx.g2.space.parities
    G = ctx.B1.matrix
    out = []
    for x in range(n1):
        plane = []
        for y in range(n1):
            row = []
            for a in range(n2):
                col = _col(ctx.phi[a].matrix, x)
                val = sum((v * G[k][y] for k, v in enumerate(col) if v), 0)
                row.append(norm(sign(p2[a] * (p1[x] + p1[y])) * val))
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


def _first(gen):
    return next(gen, None)


def validate_context(ctx: ExtensionContext, consequences: bool = True) -> Report:
    """Check every defining condition of a context, with witnesses."""
    g1, g2, B1 = ctx.g1, ctx.g2, ctx.B1
    n1, n2 = g1.dim, g2.dim
    p1, p2 = g1.space.parities, g2.space.parities
    rep = Report("extension context")
    rep.add("g1-superalgebra", validate_superalgebra(g1).ok)
    rep.add("B1-quadratic", validate_quadratic(g1, B1).ok)
    rep.add("g2-superalgebra", validate_superalgebra(g2).ok)

    bad = _first(
        (a,) for a in range(n2)
        if _leibniz_witness(g1, ctx.phi[a]) is not None or antisymmetry_witness(B1, ctx.phi[a]) is not None
    )
    rep.add("phi-antisymmetric-derivations", bad is None, bad)

    psi = ctx.psi
    bad = _first(
        (a, b) for a in range(n2) for b in range(n2)
        if any(v != 0 and p1[k] != (p2[a] + p2[b]) % 2 for k, v in enumerate(psi[a][b]))
        or any(x != -sign(p2[a] * p2[b]) * y for x, y in zip(psi[a][b], psi[b][a]))
    )
    rep.add("psi-even-superantisymmetric", bad is None, bad)
    w = ctx.w
    bad = w.even_witness() or w.antisymmetry_witness()
    rep.add("w-even-superantisymmetric", bad is None, bad)

    mats = [f.matrix for f in ctx.phi]
    witness = None
    for a in range(n2):
        for b in range(n2):
            lhs = supercommutator(mats[a], p2[a], mats[b], p2[b])
            for m, v in g2.table[a][b].items():
                lhs = tuple(tuple(x - v * y for x, y in zip(r1, r2)) for r1, r2 in zip(lhs, mats[m]))
            ad = _adjoint_of_vector(g1, psi[a][b])
            if any(norm(x) != y for r1, r2 in zip(lhs, ad) for x, y in zip(r1, r2)):
                witness = (a, b)
                break
        if witness:
            break
    rep.add("twisted-morphism", witness is None, witness)

    def psi_cyclic(a, b, c):
        tot = [0] * n1
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            s = sign(p2[z] * p2[x])
            t1 = linalg.matvec(mats[x], psi[y][z])
            t2 = [0] * n1
            for m, v in g2.table[x][y].items():
                t2 = [q + v * r for q, r in zip(t2, psi[m][z])]
            tot = [q + s * (r - u) for q, r, u in zip(tot, t1, t2)]
        return tuple(norm(q) for q in tot)

    triples = [(a, b, c) for a in range(n2) for b in range(n2) for c in range(n2)]
    cyc = {t: psi_cyclic(*t) for t in triples}
    witness = _first(t for t in triples if not is_zero(_ad_apply(g1, cyc[t])))
    rep.add("psi-cyclic-ad", witness is None, witness)
    witness = _first(t for t in triples if not is_zero(cyc[t]))
    rep.add("psi-cyclic", witness is None, witness)

    chi = derive_chi(ctx)
    witness = None
    for a, b, c in triples:
        for d in range(n2):
            if _twisted_cocycle_value(ctx, chi, a, b, c, d) != 0:
                witness = (a, b, c, d)
                break
        if witness:
            break
    rep.add("twisted-cocycle", witness is None, witness)
    wit = supercyclic_witness(w)
    rep.add("w-supercyclic", wit is None, wit)

    if ctx.gamma is not None:
        gm = ctx.gamma
        ok = gm.is_even() and gm.is_supersymmetric()
        wit = _invariance_witness(g2, gm)
        rep.add("gamma-invariant-supersymmetric", ok and wit is None, wit)

    if consequences:
        _consequence_checks(ctx, chi, rep)
    return rep


def _ad_apply(alg: SuperAlgebra, v) -> tuple:
    """Flattened matrix of ``ad(v)``; zero iff ``v`` is central."""
    n = alg.dim
    return tuple(x for j in range(n) for x in alg.bracket(v, unit(n, j)))


def _twisted_cocycle_value(ctx, chi, a, b, c, d):
    """Cyclic sum of ``A.w(B,C) + w(A,[B,C]) + chi(A, psi(B,C))`` at ``e_d``."""
    g2 = ctx.g2
    p2 = g2.space.parities
    t = ctx.w.tensor
    T = g2.table
    tot = 0
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        s = sign(p2[z] * p2[x])
        pF = (p2[y] + p2[z]) % 2
        term = -sign(p2[x] * pF) * sum((v * t[y][z][m] for m, v in T[x][d].items()), 0)
        term += sum((v * t[x][m][d] for m, v in T[y][z].items()), 0)
        term += sum((v * chi[x][k][d] for k, v in enumerate(ctx.psi[y][z]) if v), 0)
        tot += s * term
    return norm(tot)


def _consequence_checks(ctx, chi, rep: Report) -> None:
    """Identities that follow from the defining ones (reported, not required upstream)."""
    g1, g2 = ctx.g1, ctx.g2
    n1, n2 = g1.dim, g2.dim
    p1, p2 = g1.space.parities, g2.space.parities
    Phi = derive_Phi(ctx)
    mats = [f.matrix for f in ctx.phi]

    def phi_apply(a, x):
        return _col(mats[a], x)

    def Phi_vec(u, y):  # Phi(u, e_y) for a vector u of g1
        return tuple(norm(sum((v * Phi[k][y][d] for k, v in enumerate(u) if v), 0)) for d in range(n2))

    def Phi_vec2(x, u):
        return tuple(norm(sum((v * Phi[x][k][d] for k, v in enumerate(u) if v), 0)) for d in range(n2))

    def chi_vec(a, u):
        return tuple(norm(sum((v * chi[a][k][d] for k, v in enumerate(u) if v), 0)) for d in range(n2))

    # Phi(phi(A)X,Y) + (-1)^{|A||X|} Phi(X,phi(A)Y) - A.Phi(X,Y) - chi(A,[X,Y]) = 0
    witness = None
    for a in range(n2):
        for x in range(n1):
            for y in range(n1):
                t1 = Phi_vec(phi_apply(a, x), y)
                t2 = Phi_vec2(x, phi_apply(a, y))
                t3 = coadjoint_action(g2, a, Phi[x][y], (p1[x] + p1[y]) % 2)
                t4 = chi_vec(a, g1.bracket(unit(n1, x), unit(n1, y)))
                s = sign(p2[a] * p1[x])
                if any(norm(q + s * r - u - v) != 0 for q, r, u, v in zip(t1, t2, t3, t4)):
                    witness = (a, x, y)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("Phi-phi-chi-identity", witness is None, witness)

    # chi([A,B],X) - chi(A,phi(B)X) + (-1)^{|A||B|} chi(B,phi(A)X)
    #   - A.chi(B,X) + (-1)^{|A||B|} B.chi(A,X) + Phi(psi(A,B),X) = 0
    witness = None
    for a in range(n2):
        for b in range(n2):
            s = sign(p2[a] * p2[b])
            ab = g2.table[a][b]
            for x in range(n1):
                t1 = [0] * n2
                for m, v in ab.items():
                    t1 = [q + v * r for q, r in zip(t1, chi[m][x])]
                t2 = chi_vec(a, phi_apply(b, x))
                t3 = chi_vec(b, phi_apply(a, x))
                t4 = coadjoint_action(g2, a, chi[b][x], (p2[b] + p1[x]) % 2)
                t5 = coadjoint_action(g2, b, chi[a][x], (p2[a] + p1[x]) % 2)
                t6 = Phi_vec(ctx.psi[a][b], x)
                if any(
                    norm(q1 - q2 + s * q3 - q4 + s * q5 + q6) != 0
                    for q1, q2, q3, q4, q5, q6 in zip(t1, t2, t3, t4, t5, t6)
                ):
                    witness = (a, b, x)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("chi-identity", witness is None, witness)

    # sum_cyclic (-1)^{|X||Z|} Phi(X,[Y,Z]) = 0
    witness = None
    for x in range(n1):
        for y in range(n1):
            for z in range(n1):
                tot = [0] * n2
                for u, v, q in ((x, y, z), (y, z, x), (z, x, y)):
                    s = sign(p1[u] * p1[q])
                    term = Phi_vec2(u, g1.bracket(unit(n1, v), unit(n1, q)))
                    tot = [r + s * t for r, t in zip(tot, term)]
                if any(norm(r) != 0 for r in tot):
                    witness = (x, y, z)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("Phi-cocycle", witness is None, witness)


# -- generalized double extension ----------------------------------------------------


def _extension_space(g2: SuperAlgebra, g1: SuperAlgebra):
    return layout(
        [
            ("g2", g2.space, g2.space.labels),
            ("g1", g1.space, g1.space.labels),
            ("dual", g2.space, _dual_labels(g2.space)),
        ]
    )


def generalized_double_extension(ctx: ExtensionContext) -> QuadraticSuperAlgebra:
    """Quadratic algebra on ``g2 + g1 + g2*`` built from a valid context."""
    rep = validate_context(ctx, consequences=False)
    if not rep.ok:
        raise ContextError("context invalid", rep)
    g1, g2 = ctx.g1, ctx.g2
    n1, n2 = g1.dim, g2.dim
    p1, p2 = g1.space.parities, g2.space.parities
    space, idx = _extension_space(g2, g1)
    A, X, D = idx["g2"], idx["g1"], idx["dual"]
    chi = derive_chi(ctx)
    Phi = derive_Phi(ctx)
    w = ctx.w.tensor
    br: dict = {}

    def put(I, J, K, v):
        if v != 0:
            d = br.setdefault((I, J), {})
            d[K] = d.get(K, 0) + v

    for a in range(n2):
        for b in range(n2):
            for m, v in g2.table[a][b].items():
                put(A[a], A[b], A[m], v)
            for k, v in enumerate(ctx.psi[a][b]):
                put(A[a], A[b], X[k], v)
            for d in range(n2):
                put(A[a], A[b], D[d], w[a][b][d])
        for y in range(n1):
            s = -sign(p2[a] * p1[y])
            for k, v in enumerate(_col(ctx.phi[a].matrix, y)):
                put(A[a], X[y], X[k], v)
                put(X[y], A[a], X[k], s * v)
            for d in range(n2):
                put(A[a], X[y], D[d], chi[a][y][d])
                put(X[y], A[a], D[d], s * chi[a][y][d])
        for h in range(n2):
            # e_a . e_h* evaluated at e_d is -(-1)^{|a||h|} e_h*([e_a, e_d])
            s = -sign(p2[a] * p2[h])
            for d in range(n2):
                v = g2.table[a][d].get(h, 0)
                if v:
                    put(A[a], D[h], D[d], s * v)
                    put(D[h], A[a], D[d], s * s * v)
    for x in range(n1):
        for y in range(n1):
            for k, v in g1.table[x][y].items():
                put(X[x], X[y], X[k], v)
            for d in range(n2):
                put(X[x], X[y], D[d], Phi[x][y][d])
    alg = SuperAlgebra.from_brackets(space, br, complete=False)

    N = space.dim
    G = [[0] * N for _ in range(N)]
    for x in range(n1):
        for y in range(n1):
            G[X[x]][X[y]] = ctx.B1.matrix[x][y]
    for a in range(n2):
        G[D[a]][A[a]] = 1
        G[A[a]][D[a]] = sign(p2[a])
        if ctx.gamma is not None:
            for b in range(n2):
                G[A[a]][A[b]] = ctx.gamma.matrix[a][b]
    form = GramForm(space, tuple(tuple(r) for r in G))
    return QuadraticSuperAlgebra(alg, form, blocks=idx)


# -- classical double extension ------------------------------------------------------


def classical_double_extension(
    g1: SuperAlgebra, B1: GramForm, g2: SuperAlgebra, phi, gamma: GramForm | None = None
) -> QuadraticSuperAlgebra:
    """Double extension of ``(g1, B1)`` by ``g2`` through a morphism ``phi`` into
    the antisymmetric superderivations of ``g1``."""
    n1, n2 = g1.dim, g2.dim
    p1, p2 = g1.space.parities, g2.space.parities
    phi = _as_maps(g2, g1.space, phi)
    rep = Report("classical double extension data")
    rep.add("B1-quadratic", validate_quadratic(g1, B1).ok)
    rep.add("g2-superalgebra", validate_superalgebra(g2).ok)
    bad = _first((a,) for a in range(n2) if _leibniz_witness(g1, phi[a]) is not None)
    rep.add("phi-derivations", bad is None, bad)
    bad = _first((a,) for a in range(n2) if antisymmetry_witness(B1, phi[a]) is not None)
    rep.add("phi-antisymmetric", bad is None, bad)
    mats = [f.matrix for f in phi]
    witness = None
    for a in range(n2):
        for b in range(n2):
            lhs = supercommutator(mats[a], p2[a], mats[b], p2[b])
            rhs = linalg.zeros(n1, n1)
            for m, v in g2.table[a][b].items():
                rhs = tuple(tuple(x + v * y for x, y in zip(r1, r2)) for r1, r2 in zip(rhs, mats[m]))
            if lhs != tuple(tuple(norm(x) for x in r) for r in rhs):
                witness = (a, b)
                break
        if witness:
            break
    rep.add("phi-morphism", witness is None, witness)
    if gamma is not None:
        ok = gamma.is_even() and gamma.is_supersymmetric() and _invariance_witness(g2, gamma) is None
        rep.add("gamma-invariant-supersymmetric", ok)
    if not rep.ok:
        raise ContextError("invalid double extension data", rep)

    space, idx = _extension_space(g2, g1)
    A, X, D = idx["g2"], idx["g1"], idx["dual"]
    G1 = B1.matrix
    br: dict = {}

    def put(I, J, K, v):
        if v != 0:
            d = br.setdefault((I, J), {})
            d[K] = d.get(K, 0) + v

    # [X2, Y2] and the coadjoint action pi(X2) g - (-1)^{|X||Y|} pi(Y2) f
    for a in range(n2):
        for b in range(n2):
            for m, v in g2.table[a][b].items():
                put(A[a], A[b], A[m], v)
        for h in range(n2):
            for d in range(n2):
                v = g2.table[a][d].get(h, 0)
                if v:
                    val = -sign(p2[a] * p2[h]) * v
                    put(A[a], D[h], D[d], val)
                    put(D[h], A[a], D[d], -sign(p2[a] * p2[h]) * val)
    # phi(X2) Y1 - (-1)^{|X||Y|} phi(Y2) X1
    for a in range(n2):
        for y in range(n1):
            for k in range(n1):
                v = mats[a][k][y]
                if v:
                    put(A[a], X[y], X[k], v)
                    put(X[y], A[a], X[k], -sign(p2[a] * p1[y]) * v)
    # [X1, Y1] + (X1, Y1 -> (Z -> (-1)^{(|X|+|Y|)|Z|} B1(phi(Z) X1, Y1)))
    for x in range(n1):
        for y in range(n1):
            for k, v in g1.table[x][y].items():
                put(X[x], X[y], X[k], v)
            for c in range(n2):
                val = sum((mats[c][k][x] * G1[k][y] for k in range(n1) if mats[c][k][x]), 0)
                put(X[x], X[y], D[c], sign((p1[x] + p1[y]) * p2[c]) * val)
    alg = SuperAlgebra.from_brackets(space, br, complete=False)
    N = space.dim
    T = [[0] * N for _ in range(N)]
    for x in range(n1):
        for y in range(n1):
            T[X[x]][X[y]] = G1[x][y]
    for a in range(n2):
        T[D[a]][A[a]] = 1  # f(Y2)
        T[A[a]][D[a]] = sign(p2[a] * p2[a])  # (-1)^{|X||Y|} g(X2)
        if gamma is not None:
            for b in range(n2):
                T[A[a]][A[b]] = gamma.matrix[a][b]
    return QuadraticSuperAlgebra(alg, GramForm(space, tuple(tuple(r) for r in T)), blocks=idx)


# -- T*-extension ----------------------------------------------------------------------


def tstar_extension(g2: SuperAlgebra, w=None) -> QuadraticSuperAlgebra:
    """``T*_w g2`` with bracket ``[X,Y] + w(X,Y) + pi(X)H - (-1)^{|X||Y|} pi(Y)F``
    and the canonical pairing ``F(Y) + (-1)^{|X||Y|} H(X)``."""
    n = g2.dim
    p = g2.space.parities
    if w is None:
        w = DualCochain.zero(g2)
    elif not isinstance(w, DualCochain):
        w = DualCochain(g2, w)
    if not validate_superalgebra(g2).ok:
        raise ContextError("g2 is not a Lie superalgebra", validate_superalgebra(g2))
    bad = w.even_witness()
    if bad:
        raise ContextError(f"w is not even (witness {bad})")
    bad = w.antisymmetry_witness()
    if bad:
        raise ContextError(f"w is not super-antisymmetric (witness {bad})")
    space, idx = layout([("g2", g2.space, g2.space.labels), ("dual", g2.space, _dual_labels(g2.space))])
    A, D = idx["g2"], idx["dual"]
    br: dict = {}

    def put(I, J, K, v):
        if v != 0:
            d = br.setdefault((I, J), {})
            d[K] = d.get(K, 0) + v

    for a in range(n):
        for b in range(n):
            for m, v in g2.table[a][b].items():
                put(A[a], A[b], A[m], v)
            for d in range(n):
                put(A[a], A[b], D[d], w.tensor[a][b][d])
        for h in range(n):
            F = tuple(1 if k == h else 0 for k in range(n))
            img = coadjoint_action(g2, a, F, p[h])
            for d, v in enumerate(img):
                put(A[a], D[h], D[d], v)
                put(D[h], A[a], D[d], -sign(p[a] * p[h]) * v)
    alg = SuperAlgebra.from_brackets(space, br, complete=False)
    N = space.dim
    G = [[0] * N for _ in range(N)]
    for a in range(n):
        G[D[a]][A[a]] = 1
        G[A[a]][D[a]] = sign(p[a])
    out = QuadraticSuperAlgebra(alg, GramForm(space, tuple(tuple(r) for r in G)), blocks={**idx, "g1": []})
    jac = validate_superalgebra(alg)
    if not jac.ok:
        wit = dual_cocycle_witness(w)
        raise ContextError(f"w is not a cocycle (witness {wit})", jac)
    wit = supercyclic_witness(w)
    if wit is not None:
        inv = validate_quadratic(alg, out.form)
        raise ContextError(f"w is not supercyclic (witness {wit}), so B is not invariant", inv)
    return out


# -- one-dimensional odd extension ---------------------------------------------------


def _odd_line_report(g1: SuperAlgebra, B1: GramForm, D: LinearMap, X0) -> Report:
    rep = Report("odd line data")
    rep.add("B1-quadratic", validate_quadratic(g1, B1).ok)
    rep.add("D-odd", D.parity == 1)
    rep.add("D-derivation", _leibniz_witness(g1, D) is None, _leibniz_witness(g1, D))
    rep.add("D-antisymmetric", antisymmetry_witness(B1, D) is None, antisymmetry_witness(B1, D))
    rep.add("X0-even", all(v == 0 for k, v in enumerate(X0) if g1.parity(k) == 1))
    rep.add("D(X0)=0", is_zero(D(X0)))
    rep.add("B1(X0,X0)=0", B1(X0, X0) == 0)
    D2 = linalg.matmul(D.matrix, D.matrix)
    half_ad = tuple(tuple(Fraction(v, 1) / 2 for v in r) for r in _adjoint_of_vector(g1, X0))
    rep.add("D^2=ad(X0)/2", D2 == tuple(tuple(norm(v) for v in r) for r in half_ad))
    return rep


def odd_line_context(g1: SuperAlgebra, B1: GramForm, D, X0) -> ExtensionContext:
    """Context over the one-dimensional odd algebra: ``phi(e) = D``, ``psi(e,e) = X0``, ``w = 0``."""
    if not isinstance(D, LinearMap):
        D = LinearMap(g1.space, g1.space, D, 1)
    N = SuperAlgebra.from_brackets(SuperSpace(0, 1, ("e",)), {}, name="N")
    return ExtensionContext(g1, B1, N, (D,), ((tuple(X0),),), None)


def odd_line_extension(g1: SuperAlgebra, B1: GramForm, D, X0) -> QuadraticSuperAlgebra:
    """Extension by one odd line ``e`` (and ``e*``) with
    ``[e,e] = X0``, ``[e,X] = D(X) - B1(X,X0) e*``, ``[X,Y] = [X,Y]_1 - B1(D(X),Y) e*``."""
    if not isinstance(D, LinearMap):
        D = LinearMap(g1.space, g1.space, D, 1)
    X0 = tuple(norm(v) for v in X0)
    rep = _odd_line_report(g1, B1, D, X0)
    if not rep.ok:
        raise ContextError("invalid odd line data", rep)
    n1 = g1.dim
    line = SuperSpace(0, 1, ("e",))
    space, idx = layout(
        [("g2", line, ("e",)), ("g1", g1.space, g1.space.labels), ("dual", line, ("e*",))]
    )
    e, X, es = idx["g2"][0], idx["g1"], idx["dual"][0]
    br: dict = {}

    def put(I, J, K, v):
        if v != 0:
            d = br.setdefault((I, J), {})
            d[K] = d.get(K, 0) + v

    for k, v in enumerate(X0):
        put(e, e, X[k], v)
    for x in range(n1):
        s = -sign(g1.parity(x))
        for k, v in enumerate(_col(D.matrix, x)):
            put(e, X[x], X[k], v)
            put(X[x], e, X[k], s * v)
        val = -B1(unit(n1, x), X0)
        put(e, X[x], es, val)
        put(X[x], e, es, s * val)
        for y in range(n1):
            for k, v in g1.table[x][y].items():
                put(X[x], X[y], X[k], v)
            put(X[x], X[y], es, -B1(_col(D.matrix, x), unit(n1, y)))
    alg = SuperAlgebra.from_brackets(space, br, complete=False)
    N = space.dim
    G = [[0] * N for _ in range(N)]
    for x in range(n1):
        for y in range(n1):
            G[X[x]][X[y]] = B1.matrix[x][y]
    G[es][e] = 1
    G[e][es] = -1
    return QuadraticSuperAlgebra(alg, GramForm(space, tuple(tuple(r) for r in G)), blocks=idx)
