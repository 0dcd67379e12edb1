"""Inverse constructions: contexts from isotropic ideals, orthogonal splittings,
isotropic submodules and the solvable-to-T* pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cohomology import DualCochain
from .core import (
    LinearMap,
    Report,
    Representation,
    SuperAlgebra,
    SuperSpace,
    Subspace,
    adjoint_representation,
    bracket_span,
    center,
    derived_and_central_series,
    homogeneous_parity,
    ideal_generated_by,
    is_graded_ideal,
    is_zero,
    sign,
    unit,
    vadd,
    vscale,
    vsub,
)
from .extensions import (
    ExtensionContext,
    generalized_double_extension,
    tstar_extension,
    validate_context,
)
from .quadratic import (
    GramForm,
    QuadraticSuperAlgebra,
    is_isotropic,
    orthogonal_complement,
    restrict_form,
    subspace_space,
    verify_isometry,
)
from .scalars import _rational_sqrt, active_extension, is_rational, norm, operation_session, sqrt

__all__ = [
    "DecompositionResult",
    "DufloFiltration",
    "IsotropicSubmoduleResult",
    "LineDescent",
    "OddEmbedding",
    "SumDecomposition",
    "TStarPresentation",
    "central_isotropic_descent",
    "duflo_filtration",
    "extension_context_from_isotropic_ideal",
    "isotropic_submodule",
    "maximal_isotropic_submodule",
    "one_dimensional_module_report",
    "orthogonal_sum_decomposition",
    "simple_submodule",
    "solvable_to_tstar",
    "sub_quadratic",
    "verify_isometry",
]


class SimpleSubmoduleError(ArithmeticError):
    pass


# -- small helpers ---------------------------------------------------------------------


class _Basis:
    """Coordinates with respect to an explicit list of independent vectors."""

    def __init__(self, vectors, n):
        self.vectors = [tuple(v) for v in vectors]
        self.n = n
        m = len(self.vectors)
        if m:
            cols = tuple(tuple(v[r] for v in self.vectors) for r in range(n))
            if linalg.rank(cols, m) != m:
                raise ValueError("vectors are linearly dependent")
            self._cols = cols
        else:
            self._cols = ()

    def coords(self, x) -> tuple:
        m = len(self.vectors)
        if m == 0:
            if not is_zero(x):
                raise ValueError("vector is not in the span")
            return ()
        c = linalg.solve(self._cols, tuple(x), m)
        if c is None:
            raise ValueError("vector is not in the span")
        return tuple(norm(v) for v in c)


def _labels_for(space: SuperSpace, vectors, prefix: str) -> tuple:
    out = []
    for k, v in enumerate(vectors):
        nz = [i for i, a in enumerate(v) if a != 0]
        if len(nz) == 1 and v[nz[0]] == 1:
            out.append(space.labels[nz[0]])
        else:
            out.append(f"{prefix}{k}")
    if len(set(out)) != len(out):
        out = [f"{prefix}{k}" for k in range(len(vectors))]
    return tuple(out)


def _algebra_on(alg: SuperAlgebra, basis, coords, space: SuperSpace, name="") -> SuperAlgebra:
    """Structure constants on ``basis`` where ``coords`` projects brackets back onto it."""
    br = {}
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            c = coords(alg.bracket(u, v))
            if not is_zero(c):
                br[(i, j)] = c
    return SuperAlgebra.from_brackets(space, br, name=name, complete=False)


def sub_quadratic(g: QuadraticSuperAlgebra, J: Subspace, name: str = "") -> QuadraticSuperAlgebra:
    """The non-degenerate graded ideal ``J`` as a quadratic algebra on its echelon basis."""
    basis = J.generators
    space = subspace_space(J, _labels_for(g.space, basis, "u"))
    alg = _algebra_on(g.alg, basis, J.coordinates, space, name)
    return QuadraticSuperAlgebra(alg, restrict_form(g.form, basis, space))


def _restricted_ops(ops, W: Subspace):
    """Matrices of the operators restricted to the stable subspace ``W`` (echelon basis)."""
    out = []
    for M in ops:
        cols = [W.coordinates(linalg.matvec(M, w)) for w in W.generators]
        out.append(tuple(tuple(c[r] for c in cols) for r in range(W.dim)))
    return out


def _is_stable(ops, W: Subspace) -> bool:
    return all(W.contains(linalg.matvec(M, w)) for M in ops for w in W.generators)


def _generated_submodule(ops, vectors, space: SuperSpace) -> Subspace:
    S = Subspace.span(space, vectors)
    while True:
        T = Subspace.span(space, S.generators + tuple(linalg.matvec(M, w) for M in ops for w in S.generators))
        if T.dim == S.dim:
            return S
        S = T


def _homogeneous_parts(space: SuperSpace, v):
    e = space.even_dim
    ev = tuple(a if i < e else 0 for i, a in enumerate(v))
    od = tuple(a if i >= e else 0 for i, a in enumerate(v))
    return [x for x in (ev, od) if not is_zero(x)]


# -- Theorem conv: context from an isotropic ideal ------------------------------------


@dataclass
class DecompositionResult:
    context: ExtensionContext
    V: Subspace
    A: Subspace
    K: LinearMap
    nabla: LinearMap
    Pi: LinearMap
    extension: QuadraticSuperAlgebra
    report: Report

    @property
    def ok(self) -> bool:
        return self.report.ok


def extension_context_from_isotropic_ideal(
    g: QuadraticSuperAlgebra, I: Subspace, A: Subspace | None = None, V0: Subspace | None = None
) -> DecompositionResult:
    """Present ``g`` as a generalized double extension over the isotropic ideal ``I``.

    ``A`` (a graded complement of ``I`` in ``I^perp``) and ``V0`` (a graded
    complement of ``I^perp`` inside ``A^perp``) may be supplied; ``V0`` is
    made isotropic by the Lagrangian correction.
    """
    alg, B = g.alg, g.form
    n = alg.dim
    if I.ambient != alg.space:
        raise ValueError("I does not live in the algebra")
    if not I.is_graded():
        raise ValueError("I is not graded")
    if not is_graded_ideal(alg, I):
        raise ValueError("I is not an ideal")
    if not is_isotropic(B, I):
        raise ValueError("I is not isotropic")
    Iperp = orthogonal_complement(B, I)
    if A is None:
        A = I.complement_in(Iperp)
    elif not (A.is_graded() and A <= Iperp and (A & I).dim == 0 and A.dim + I.dim == Iperp.dim):
        raise ValueError("A is not a graded complement of I in I^perp")
    Aperp = orthogonal_complement(B, A)
    if V0 is None:
        V0 = I.complement_in(Aperp)
    elif not (V0.is_graded() and V0 <= Aperp and (V0 & Iperp).dim == 0 and V0.dim == I.dim):
        raise ValueError("V0 is not a graded complement of I^perp inside A^perp")

    iotas = I.generators
    vs = list(V0.generators)
    m = len(vs)

    def dual_partners(vs):
        P = tuple(tuple(B(i, v) for v in vs) for i in iotas)
        Q = linalg.inverse(P) if m else ()
        return [lincomb_rows(Q[b], iotas, n) for b in range(m)]

    partners = dual_partners(vs)
    half = Fraction(1, 2)
    corrected = []
    for v in vs:
        x = v
        for c, vc in enumerate(vs):
            s = B(v, vc)
            if s != 0:
                x = vsub(x, vscale(half * s, partners[c]))
        corrected.append(x)
    V = Subspace.span(alg.space, corrected)
    vbasis = V.generators
    partners = dual_partners(vbasis)
    abasis = A.generators
    full = _Basis(list(vbasis) + list(abasis) + partners, n)
    nA = len(abasis)

    def split(x):
        c = full.coords(x)
        return c[:m], c[m:m + nA], c[m + nA:]

    # g2 and g1
    g2_space = subspace_space(V, _labels_for(alg.space, vbasis, "v"))
    g1_space = subspace_space(A, _labels_for(alg.space, abasis, "a"))
    g2 = _algebra_on(alg, vbasis, lambda x: split(x)[0], g2_space, "g2")
    g1 = _algebra_on(alg, abasis, lambda x: split(x)[1], g1_space, "g1")
    B1 = restrict_form(B, abasis, g1_space)
    phi = []
    for a, v in enumerate(vbasis):
        cols = [split(alg.bracket(v, u))[1] for u in abasis]
        phi.append(tuple(tuple(c[r] for c in cols) for r in range(nA)))
    psi = tuple(tuple(split(alg.bracket(u, v))[1] for v in vbasis) for u in vbasis)
    w = DualCochain(
        g2,
        tuple(tuple(tuple(B(alg.bracket(u, v), z) for z in vbasis) for v in vbasis) for u in vbasis),
    )
    ctx = ExtensionContext(g1, B1, g2, tuple(phi), psi, w)

    report = Report("isotropic ideal decomposition")
    report.add("V-isotropic", is_isotropic(B, V))
    report.add("g = I^perp + V", (Iperp + V).dim == n and (Iperp & V).dim == 0)
    report.add("I^perp = A + I", (A + I) == Iperp and (A & I).dim == 0)
    report.extend(validate_context(ctx), "context: ")
    ext = generalized_double_extension(ctx)
    blocks = ext.blocks
    N = ext.dim
    cols = []
    for j in range(n):
        a_, b_, c_ = split(unit(n, j))
        col = [0] * N
        for k, val in enumerate(a_):
            col[blocks["g2"][k]] = val
        for k, val in enumerate(b_):
            col[blocks["g1"][k]] = val
        for k, val in enumerate(c_):
            col[blocks["dual"][k]] = val
        cols.append(col)
    Pi = LinearMap(alg.space, ext.space, tuple(tuple(cols[j][r] for j in range(n)) for r in range(N)), 0)
    report.extend(verify_isometry(Pi, g, ext), "isometry: ")
    K = LinearMap(g2_space, g2_space, linalg.identity(m), 0)
    I_space = subspace_space(I)
    dual_space = SuperSpace(g2_space.even_dim, g2_space.odd_dim, tuple(f"{l}*" for l in g2_space.labels))
    nabla = LinearMap(I_space, dual_space, tuple(tuple(B(i, v) for i in iotas) for v in vbasis), 0)
    return DecompositionResult(ctx, V, A, K, nabla, Pi, ext, report)


def lincomb_rows(coeffs, vectors, n):
    out = (0,) * n
    for c, v in zip(coeffs, vectors):
        if c != 0:
            out = vadd(out, vscale(c, v))
    return out


# -- orthogonal sums --------------------------------------------------------------------


def _orthogonal_pieces(B: GramForm, S: Subspace) -> list[Subspace]:
    """Split a non-degenerate graded subspace into orthogonal even lines and odd planes."""
    pieces = []
    cur = S
    while cur.dim:
        gens = cur.generators
        piece = None
        for u in gens:
            if homogeneous_parity(S.ambient, u) == 0 and B(u, u) != 0:
                piece = Subspace.span(S.ambient, [u])
                break
        if piece is None:
            for u in gens:
                for v in gens:
                    pu = homogeneous_parity(S.ambient, u)
                    if pu != homogeneous_parity(S.ambient, v) or B(u, v) == 0:
                        continue
                    if pu == 0:
                        piece = Subspace.span(S.ambient, [vadd(u, v)])
                    else:
                        piece = Subspace.span(S.ambient, [u, v])
                    break
                if piece:
                    break
        if piece is None:
            break
        pieces.append(piece)
        cur = cur & orthogonal_complement(B, piece)
    return pieces


def _nondegenerate(B: GramForm, S: Subspace) -> bool:
    if S.dim == 0:
        return False
    G = tuple(tuple(B(u, v) for v in S.generators) for u in S.generators)
    return linalg.det(G) != 0


@dataclass
class SumDecomposition:
    factors: list
    ideals: list
    report: Report

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, k):
        return self.factors[k]


def _split_candidates(g: QuadraticSuperAlgebra, J: Subspace):
    """Candidate ideals of ``g`` contained in ``J``."""
    alg, B = g.alg, g.form
    z = center(alg) & J
    rad = z & orthogonal_complement(B, z)
    nd = rad.complement_in(z)
    yield from _orthogonal_pieces(B, nd)
    yield nd
    series = derived_and_central_series(alg)
    for S in (series.derived[-1:] + series.lower_central[-1:]):
        yield S & J
    for v in J.generators:
        yield ideal_generated_by(alg, [v])


def orthogonal_sum_decomposition(g: QuadraticSuperAlgebra) -> SumDecomposition:
    """Greedy splitting into pairwise orthogonal non-degenerate graded ideals.

    Every split is verified exactly; minimality of the factors is best-effort.
    """
    alg, B = g.alg, g.form
    done = []
    todo = [Subspace.full(alg.space)]
    while todo:
        J = todo.pop()
        part = None
        for cand in _split_candidates(g, J):
            if 0 < cand.dim < J.dim and cand.is_graded() and is_graded_ideal(alg, cand) and _nondegenerate(B, cand):
                part = cand
                break
        if part is None:
            done.append(J)
            continue
        rest = J & orthogonal_complement(B, part)
        todo.extend([rest, part])
    done.sort(key=lambda S: (S.pivots, S.dim))
    report = Report("orthogonal sum")
    report.add("ideals", all(S.is_graded() and is_graded_ideal(alg, S) for S in done))
    report.add("non-degenerate", all(_nondegenerate(B, S) for S in done))
    orth = all(B(u, v) == 0 for a, S in enumerate(done) for T in done[a + 1:] for u in S.generators for v in T.generators)
    report.add("pairwise-orthogonal", orth)
    total = Subspace.span(alg.space, [v for S in done for v in S.generators])
    report.add("direct-sum", total.dim == alg.dim and sum(S.dim for S in done) == alg.dim)
    report.add("minimality", True, None, "best-effort: no candidate ideal splits any factor further")
    factors = [sub_quadratic(g, S, f"{alg.name}[{k}]") for k, S in enumerate(done)]
    return SumDecomposition(factors, done, report)


# -- central isotropic lines ------------------------------------------------------------


@dataclass
class LineDescent:
    kind: str  # "odd" or "even"
    X: tuple
    I: Subspace
    decomposition: DecompositionResult
    data: dict = field(default_factory=dict)


def _isotropic_even_vector(B: GramForm, S: Subspace):
    """An isotropic even vector of ``S`` over the active field, or None (best-effort)."""
    evens = [u for u in S.generators if homogeneous_parity(S.ambient, u) == 0]
    for u in evens:
        if B(u, u) == 0:
            return u
    # diagonalize and look for a pair of lines with -a/b a square
    diag = []
    cur = Subspace.span(S.ambient, evens)
    for piece in _orthogonal_pieces(B, cur):
        diag.append(piece.generators[0])
    rad = cur & orthogonal_complement(B, cur)
    if rad.dim:
        return rad.generators[0]
    d = active_extension()
    for a_i, x in enumerate(diag):
        for y in diag[a_i + 1:]:
            q = -Fraction(B(x, x)) / Fraction(B(y, y))
            t = _rational_sqrt(q)
            if t is None and d is not None and _rational_sqrt(q / d) is not None:
                t = sqrt(q)
            if t is not None:
                return vadd(x, vscale(t, y))
    return None


def central_isotropic_descent(g: QuadraticSuperAlgebra) -> LineDescent | None:
    """Extract a one-dimensional context over a homogeneous central isotropic line."""
    alg, B = g.alg, g.form
    z = center(alg)
    odd = [u for u in z.generators if homogeneous_parity(alg.space, u) == 1]
    if odd:
        X, kind = odd[0], "odd"
    else:
        X = _isotropic_even_vector(B, z)
        if X is None:
            return None
        kind = "even"
    I = Subspace.span(alg.space, [X])
    res = extension_context_from_isotropic_ideal(g, I)
    ctx = res.context
    if kind == "odd":
        data = {"D": ctx.phi[0], "X0": ctx.psi[0][0], "g1": ctx.g1, "B1": ctx.B1}
    else:
        data = {"phi": ctx.phi, "psi": ctx.psi[0][0], "g1": ctx.g1, "B1": ctx.B1}
    return LineDescent(kind, X, I, res, data)


# -- isotropic submodules --------------------------------------------------------------


def simple_submodule(ops, W: Subspace) -> Subspace:
    """A minimal nonzero stable subspace of the stable graded subspace ``W``.

    Uses common kernels (enough for nilpotent actions) and rational eigenvectors
    of the even operators; fails loudly when neither certifies a submodule.
    """
    space = W.ambient
    if W.dim == 0:
        raise ValueError("the zero module has no simple submodule")
    kernel_eqs = []
    for M in ops:
        for w_row in range(space.dim):
            kernel_eqs.append(tuple(M[w_row]))
    K = W & Subspace.span(space, linalg.kernel(kernel_eqs, space.dim)) if ops else W
    if K.dim:
        v = next(v for g_ in K.generators for v in _homogeneous_parts(space, g_))
        return Subspace.span(space, [v])
    if W.dim == 1:
        return W
    import sympy

    for M in ops:
        R = _restricted_ops([M], W)[0]
        lam = sympy.symbols("lam")
        charpoly = sympy.Matrix(R).charpoly(lam).as_expr()
        for root in sympy.roots(sympy.Poly(charpoly, lam), filter="Q"):
            r = Fraction(int(sympy.numer(root)), int(sympy.denom(root)))
            shifted = [tuple(M[i][j] - (r if i == j else 0) for j in range(space.dim)) for i in range(space.dim)]
            E = W & Subspace.span(space, linalg.kernel(shifted, space.dim))
            for g_ in E.generators:
                for v in _homogeneous_parts(space, g_):
                    S = _generated_submodule(ops, [v], space)
                    if S.dim < W.dim:
                        return simple_submodule(ops, S)
    raise SimpleSubmoduleError("simple submodule not computable over Q")


def _verify_isotropic_submodule(ops, G: GramForm, W: Subspace) -> Report:
    rep = Report("isotropic submodule")
    rep.add("nonzero", W.dim > 0)
    rep.add("graded", W.is_graded())
    rep.add("isotropic", is_isotropic(G, W))
    rep.add("stable", _is_stable(ops, W))
    return rep


def _cdl(ops, G: GramForm, W: Subspace) -> Subspace:
    """Nonzero isotropic stable subspace of the non-degenerate stable ``W`` (dim >= 2)."""
    space = W.ambient
    M = simple_submodule(ops, W)
    if is_isotropic(G, M):
        return M
    if M.dim != 1 or not all(is_zero(linalg.matvec(A, M.generators[0])) for A in ops):
        raise SimpleSubmoduleError("non-isotropic simple submodule is not a trivial line")
    rest = W & orthogonal_complement(G, M)
    if rest.dim >= 2:
        return _cdl(ops, G, rest)
    # two orthogonal trivial even lines
    x = M.generators[0]
    y = rest.generators[0]
    if not all(is_zero(linalg.matvec(A, y)) for A in ops):
        raise SimpleSubmoduleError("complementary line is not trivial")
    a, b = G(x, x), G(y, y)
    if not (is_rational(a) and is_rational(b)):
        raise SimpleSubmoduleError("trivial lines with irrational norms are not supported")
    t = sqrt(-Fraction(a) / Fraction(b))
    return Subspace.span(space, [vadd(x, vscale(t, y))])


def isotropic_submodule(L: SuperAlgebra, rep: Representation, B: GramForm) -> Subspace:
    """Nonzero isotropic stable graded subspace of a module with invariant form."""
    if rep.module_space.dim < 2:
        raise ValueError("module must have dimension >= 2")
    if not derived_and_central_series(L).is_solvable:
        raise ValueError("acting algebra is not solvable")
    ops = rep.matrices
    with operation_session():
        W = _cdl(ops, B, Subspace.full(rep.module_space))
    check = _verify_isotropic_submodule(ops, B, W)
    if not check.ok:
        raise AssertionError(str(check))
    return W


def one_dimensional_module_report(L: SuperAlgebra, rep: Representation, B: GramForm) -> Report:
    """Certify that a 1-dim module with invariant non-degenerate form is trivial.

    Each basis element acts by a scalar c; invariance forces 2 c B(v, v) = 0, so
    c = 0 once B(v, v) != 0.  The scalar is solved from the invariance equation
    and compared with the actual action.
    """
    space = rep.module_space
    rep_ = Report("one-dimensional module")
    rep_.add("dim 1", space.dim == 1)
    if space.dim != 1:
        return rep_
    b = B.matrix[0][0]
    rep_.add("non-degenerate", b != 0)
    rep_.add("invariant", osp_witness(rep.matrices, L.space.parities, B) is None)
    forced = [0 if b != 0 else None for _ in rep.matrices]
    actual = [M[0][0] for M in rep.matrices]
    rep_.add("character forced to 0", all(f == 0 for f in forced))
    rep_.add("trivial action", actual == forced)
    return rep_


@dataclass
class IsotropicSubmoduleResult:
    W: Subspace
    chain: list
    report: Report


def osp_witness(ops, parities, B: GramForm):
    """First ``(op, u, v)`` with ``B(f u, v) != -(-1)^{|f||u|} B(u, f v)``."""
    n = B.space.dim
    for k, M in enumerate(ops):
        for u in range(n):
            fu = tuple(M[r][u] for r in range(n))
            for v in range(n):
                fv = tuple(M[r][v] for r in range(n))
                lhs = B(fu, unit(n, v))
                rhs = -sign(parities[k] * B.space.parity(u)) * B(unit(n, u), fv)
                if norm(lhs - rhs) != 0:
                    return (k, u, v)
    return None


def _quotient_module(ops, G: GramForm, W: Subspace):
    """Operators and form on ``W^perp / W`` with the complement basis."""
    Wp = orthogonal_complement(G, W)
    Q = W.complement_in(Wp)
    qspace = subspace_space(Q)
    basis = list(Q.generators)
    full = _Basis(basis + list(W.generators), G.space.dim)
    k = len(basis)
    qops = []
    for M in ops:
        cols = [full.coords(linalg.matvec(M, q))[:k] for q in basis]
        qops.append(tuple(tuple(c[r] for c in cols) for r in range(k)))
    qform = restrict_form(G, basis, qspace)
    return Q, qspace, qops, qform


def martin_clauses(ops, G: GramForm, seed: Subspace, W: Subspace) -> Report:
    n = G.space.dim
    Wp = orthogonal_complement(G, W)
    rep = Report("maximal isotropic submodule")
    rep.add("(i) seed contained", seed <= W)
    rep.add("(ii) isotropic submodule", is_isotropic(G, W) and _is_stable(ops, W) and W.is_graded())
    # maximal among isotropic subspaces: W^perp/W carries no isotropic vector
    # except possibly an even-line defect for odd n, which is anisotropic
    rep.add("(iii) maximal isotropic", W.dim == n // 2 and W <= Wp)
    rep.add("(iv) dim = [n/2]", W.dim == n // 2, None, f"dim={W.dim} n={n}")
    if n % 2 == 0:
        rep.add("(v) W = W^perp", W == Wp)
    else:
        rep.add(
            "(vi) W^perp/W trivial of dim 1",
            W <= Wp and Wp.dim - W.dim == 1 and all(W.contains(linalg.matvec(M, u)) for M in ops for u in Wp.generators),
        )
    return rep


def maximal_isotropic_submodule(
    L: SuperAlgebra, rep: Representation, B: GramForm, seed_W: Subspace | None = None
) -> IsotropicSubmoduleResult:
    """Grow an isotropic stable seed to dimension ``[n/2]`` by recursing into ``W^perp/W``."""
    ops = rep.matrices
    space = rep.module_space
    if not derived_and_central_series(L).is_solvable:
        raise ValueError("acting algebra is not solvable")
    witness = osp_witness(ops, L.space.parities, B)
    if witness is not None:
        raise ValueError(f"action is not B-antisymmetric (witness {witness})")
    seed = Subspace.zero(space) if seed_W is None else seed_W
    if not (seed.is_graded() and is_isotropic(B, seed) and _is_stable(ops, seed)):
        raise ValueError("seed is not an isotropic stable graded subspace")
    W = seed
    chain = [W]
    with operation_session():
        while True:
            Q, qspace, qops, qform = _quotient_module(ops, B, W)
            if Q.dim < 2:
                break
            U = _cdl(qops, qform, Subspace.full(qspace))
            lifted = [lincomb_rows(u, Q.generators, space.dim) for u in U.generators]
            W = Subspace.span(space, W.generators + tuple(lifted))
            chain.append(W)
    report = martin_clauses(ops, B, seed, W)
    report.add("osp condition", True)
    return IsotropicSubmoduleResult(W, chain, report)


# -- the W_i filtration -----------------------------------------------------------------


@dataclass
class DufloFiltration:
    W_i: list
    M: int
    report: Report


def _default_hyperplane(alg: SuperAlgebra, T) -> Subspace:
    space = alg.space
    gg = bracket_span(alg, Subspace.full(space), Subspace.full(space))
    S = gg
    span_T = Subspace.span(space, [T])
    for i in range(alg.dim):
        e = Subspace.span(space, [unit(alg.dim, i)])
        if (S + e + span_T).dim > (S + span_T).dim:
            S = S + e
    return S


def duflo_filtration(rep: Representation, T, W: Subspace, h: Subspace | None = None) -> DufloFiltration:
    """Chain ``W_i = W + rho(T) W + ... + rho(T)^i W`` and its isomorphism checks."""
    alg = rep.algebra
    space = rep.module_space
    T = tuple(norm(v) for v in T)
    pT = homogeneous_parity(alg.space, T)
    if pT is None or is_zero(T):
        raise ValueError("T must be a nonzero homogeneous vector")
    if h is None:
        h = _default_hyperplane(alg, T)
    gg = bracket_span(alg, Subspace.full(alg.space), Subspace.full(alg.space))
    if not (h.dim == alg.dim - 1 and gg <= h and not h.contains(T) and is_graded_ideal(alg, h)):
        raise ValueError("h must be a codim-1 graded ideal containing [g,g] and not T")
    h_ops = [LinearMap(space, space, _op_of(rep, x), homogeneous_parity(alg.space, x)) for x in h.generators]
    h_mats = [m.matrix for m in h_ops]
    if not _is_stable(h_mats, W):
        raise ValueError("W is not stable under h")
    RT = _op_of(rep, T)
    chain = [W]
    powers = [list(W.generators)]
    while True:
        prev = chain[-1]
        if _is_stable([RT], prev):
            break
        nxt = [linalg.matvec(RT, v) for v in powers[-1]]
        powers.append(nxt)
        chain.append(Subspace.span(space, prev.generators + tuple(nxt)))
    M = len(chain) - 1
    report = Report("W_i filtration")
    report.add("W_i h-stable", all(_is_stable(h_mats, S) for S in chain))
    report.add("rho(T) W_M in W_M", _is_stable([RT], chain[-1]), None, f"M={M}")
    for i in range(1, M + 1):
        report.add(f"Phi_{i} isomorphism", _phi_i_iso(rep, RT, pT, h_ops, W, chain[i - 1], chain[i], i))
    if pT == 1:
        report.add("odd T: M <= 1", M <= 1, None, f"M={M}")
    return DufloFiltration(chain, M, report)


def _op_of(rep: Representation, x):
    m = rep.module_space.dim
    out = [[0] * m for _ in range(m)]
    for k, a in enumerate(x):
        if a != 0:
            Mk = rep.rho[k].matrix
            for r in range(m):
                for c in range(m):
                    if Mk[r][c] != 0:
                        out[r][c] += a * Mk[r][c]
    return tuple(tuple(norm(v) for v in row) for row in out)


def _phi_i_iso(rep, RT, pT, h_ops, W, Wprev, Wi, i) -> bool:
    space = rep.module_space
    Ti = linalg.identity(space.dim)
    for _ in range(i):
        Ti = linalg.matmul(RT, Ti)

    def Phi(w):
        pw = homogeneous_parity(space, w)
        return vscale(sign(pT * (pw or 0)), linalg.matvec(Ti, w))

    basis = [v for g_ in W.generators for v in _homogeneous_parts(space, g_)]
    images = Subspace.span(space, Wprev.generators + tuple(Phi(w) for w in basis))
    if images != Wi or Wi.dim - Wprev.dim != W.dim:
        return False
    for f in h_ops:
        s = sign(pT * f.parity * (i + 1))
        for w in basis:
            lhs = f(Phi(w))
            rhs = vscale(s, Phi(f(w)))
            if not Wprev.contains(vsub(lhs, rhs)):
                return False
    return True


# -- solvable algebras as T*-extensions -------------------------------------------------


@dataclass
class TStarPresentation:
    I: Subspace
    w: DualCochain
    quotient: SuperAlgebra
    tstar: QuadraticSuperAlgebra
    Pi: LinearMap
    report: Report
    kind: str = "even"


@dataclass
class OddEmbedding:
    ambient: QuadraticSuperAlgebra
    H: Subspace
    alpha: object
    field_d: int | None
    presentation: TStarPresentation
    embedding: LinearMap
    report: Report
    bxx: object = None
    kind: str = "odd"


def _maximal_isotropic_ideal(g: QuadraticSuperAlgebra) -> IsotropicSubmoduleResult:
    alg = g.alg
    adj = adjoint_representation(alg)
    full = Subspace.full(alg.space)
    seed = center(alg) & bracket_span(alg, full, full)
    return maximal_isotropic_submodule(alg, adj, g.form, seed)


def _even_presentation(g: QuadraticSuperAlgebra, I: Subspace) -> TStarPresentation:
    res = extension_context_from_isotropic_ideal(g, I)
    ctx = res.context
    report = Report("T* presentation")
    report.add("I = I^perp", I == orthogonal_complement(g.form, I))
    report.add("g1 = 0", ctx.g1.dim == 0)
    T = tstar_extension(ctx.g2, ctx.w)
    report.add("extension equals T*_w", T.alg.table == res.extension.alg.table and T.form == res.extension.form)
    report.extend(verify_isometry(res.Pi, g, T), "isometry: ")
    return TStarPresentation(I, ctx.w, ctx.g2, T, res.Pi, report)


def solvable_to_tstar(g: QuadraticSuperAlgebra):
    """T*-presentation of a solvable quadratic algebra (even dim), or a codim-1
    embedding into one (odd dim)."""
    alg = g.alg
    if not derived_and_central_series(alg).is_solvable:
        raise ValueError("algebra is not solvable")
    with operation_session():
        I = _maximal_isotropic_ideal(g).W
        if alg.dim % 2 == 0:
            return _even_presentation(g, I)
        return _odd_embedding(g, I)


def _odd_embedding(g: QuadraticSuperAlgebra, I: Subspace) -> OddEmbedding:
    alg, B = g.alg, g.form
    n = alg.dim
    Iperp = orthogonal_complement(B, I)
    x = next(
        v for v in I.complement_in(Iperp).generators if homogeneous_parity(alg.space, v) == 0
    )
    bxx = B(x, x)
    if bxx == 0:
        raise ArithmeticError("no anisotropic even vector in I^perp")
    alpha = sqrt(-Fraction(1) / Fraction(bxx))
    d = active_extension() if not isinstance(alpha, (int, Fraction)) else None
    # ambient A = g + K e, e even central with q(e, e) = 1, e placed last among evens
    e_pos = alg.space.even_dim
    labels = list(alg.space.labels)
    labels.insert(e_pos, "e" if "e" not in labels else "e_")
    aspace = SuperSpace(alg.space.even_dim + 1, alg.space.odd_dim, tuple(labels))

    def embed(v):
        return tuple(v[:e_pos]) + (0,) + tuple(v[e_pos:])

    def emb_idx(i):
        return i if i < e_pos else i + 1

    br = {}
    for i in range(n):
        for j in range(n):
            t = alg.table[i][j]
            if t:
                br[(emb_idx(i), emb_idx(j))] = {emb_idx(k): v for k, v in t.items()}
    A_alg = SuperAlgebra.from_brackets(aspace, br, name=f"{alg.name}+e", complete=False)
    N = n + 1
    G = [[0] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            G[emb_idx(i)][emb_idx(j)] = B.matrix[i][j]
    G[e_pos][e_pos] = 1
    ambient = QuadraticSuperAlgebra(A_alg, GramForm(aspace, tuple(tuple(r) for r in G)))
    f = vadd(unit(N, e_pos), vscale(alpha, embed(x)))
    H = Subspace.span(aspace, [embed(v) for v in I.generators] + [f])
    pres = _even_presentation(ambient, H)
    Emb = tuple(tuple(pres.Pi.matrix[r][emb_idx(j)] for j in range(n)) for r in range(N))
    embedding = LinearMap(alg.space, pres.tstar.space, Emb, 0)
    report = Report("odd-dimensional embedding")
    report.add("B(f,f) = 0", ambient.form(f, f) == 0)
    report.add("H isotropic ideal", is_isotropic(ambient.form, H) and is_graded_ideal(A_alg, H))
    report.add("dim H = dim A / 2", 2 * H.dim == N)
    report.extend(pres.report, "ambient: ")
    report.extend(_verify_embedding(embedding, g, pres.tstar), "embedding: ")
    return OddEmbedding(ambient, H, alpha, d, pres, embedding, report, bxx)


def _verify_embedding(E: LinearMap, g: QuadraticSuperAlgebra, T: QuadraticSuperAlgebra) -> Report:
    n = g.dim
    M = E.matrix
    cols = [tuple(M[r][j] for r in range(T.dim)) for j in range(n)]
    rep = Report("embedding")
    rep.add("even", E.parity == 0)
    rep.add("injective", linalg.rank([c for c in cols], T.dim) == n)
    ok = all(
        linalg.matvec(M, tuple(g.alg.table[i][j].get(k, 0) for k in range(n))) == T.alg.bracket(cols[i], cols[j])
        for i in range(n)
        for j in range(n)
    )
    rep.add("bracket-preserving", ok)
    rep.add("form-preserving", all(T.form(cols[i], cols[j]) == g.form.matrix[i][j] for i in range(n) for j in range(n)))
    img = Subspace.span(T.space, cols)
    rep.add("image ideal", is_graded_ideal(T.alg, img))
    rep.add("image non-degenerate", _nondegenerate(T.form, img))
    rep.add("codimension one", T.dim - n == 1)
    return rep
