"""Even supersymmetric invariant bilinear forms on Lie superalgebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from . import linalg
from .core import (
    LinearMap,
    Report,
    Subspace,
    SuperAlgebra,
    SuperSpace,
    _leibniz_witness,
    sign,
    unit,
)
from .scalars import norm

__all__ = [
    "GramForm",
    "antisymmetric_derivations",
    "InvariantFormResult",
    "QuadraticSuperAlgebra",
    "has_invariant_scalar_product",
    "induced_quotient_form",
    "invariant_form_space",
    "is_antisymmetric_derivation",
    "is_isotropic",
    "orthogonal_complement",
    "restrict_form",
    "subspace_space",
    "validate_quadratic",
    "verify_isometry",
]


@dataclass(frozen=True)
class GramForm:
    """``matrix[i][j] = B(e_i, e_j)``."""

    space: SuperSpace
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(norm(v) for v in row) for row in self.matrix)
        n = self.space.dim
        if len(M) != n or any(len(r) != n for r in M):
            raise ValueError(f"Gram matrix must be {n}x{n}")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def zero(cls, space: SuperSpace) -> "GramForm":
        return cls(space, linalg.zeros(space.dim, space.dim))

    def __call__(self, x, y):
        G = self.matrix
        tot = 0
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = G[i]
            for j, b in enumerate(y):
                if b != 0 and row[j] != 0:
                    tot = tot + a * row[j] * b
        return norm(tot)

    def entry(self, i: int, j: int):
        return self.matrix[i][j]

    def is_even(self) -> bool:
        return self.even_witness() is None

    def even_witness(self):
        p = self.space.parities
        for i, row in enumerate(self.matrix):
            for j, v in enumerate(row):
                if v != 0 and p[i] != p[j]:
                    return (i, j)
        return None

    def supersymmetry_witness(self):
        p = self.space.parities
        G = self.matrix
        for i in range(self.space.dim):
            for j in range(self.space.dim):
                if G[i][j] != sign(p[i] * p[j]) * G[j][i]:
                    return (i, j)
        return None

    def is_supersymmetric(self) -> bool:
        return self.supersymmetry_witness() is None

    @cached_property
    def determinant(self):
        return linalg.det(self.matrix)

    def is_nondegenerate(self) -> bool:
        return self.determinant != 0

    def radical(self) -> Subspace:
        return Subspace(self.space, tuple(linalg.kernel(self.matrix, self.space.dim)))

    def __add__(self, other: "GramForm") -> "GramForm":
        return GramForm(
            self.space,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def scaled(self, c) -> "GramForm":
        return GramForm(self.space, tuple(tuple(c * a for a in r) for r in self.matrix))


@dataclass(frozen=True)
class QuadraticSuperAlgebra:
    alg: SuperAlgebra
    form: GramForm
    blocks: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.form.space.dim != self.alg.dim:
            raise ValueError("form and algebra dimensions differ")

    @property
    def space(self) -> SuperSpace:
        return self.alg.space

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def B(self) -> GramForm:
        return self.form


def _invariance_witness(alg: SuperAlgebra, B: GramForm):
    n = alg.dim
    G = B.matrix
    T = alg.table
    for i in range(n):
        for j in range(n):
            left_row = [0] * n  # k -> B([e_i, e_j], e_k)
            for m, v in T[i][j].items():
                for k in range(n):
                    if G[m][k] != 0:
                        left_row[k] += v * G[m][k]
            for k in range(n):
                right = 0
                for m, v in T[j][k].items():
                    if G[i][m] != 0:
                        right += G[i][m] * v
                if norm(left_row[k] - right) != 0:
                    return (i, j, k)
    return None


def validate_quadratic(alg: SuperAlgebra, B: GramForm) -> Report:
    """Check that ``B`` is an invariant scalar product on ``alg``."""
    rep = Report(f"quadratic {alg.name}".strip())
    if B.space.dim != alg.dim:
        rep.add("shape", False, None, f"form has dim {B.space.dim}, algebra {alg.dim}")
        return rep
    rep.add("even", *_pack(B.even_witness()))
    rep.add("supersymmetric", *_pack(B.supersymmetry_witness()))
    if alg.space.odd_dim % 2:
        rep.add(
            "non-degenerate",
            False,
            None,
            "odd part has odd dimension, so an even supersymmetric form is degenerate",
        )
    else:
        rep.add("non-degenerate", B.is_nondegenerate(), None, "" if B.is_nondegenerate() else "det = 0")
    rep.add("invariant", *_pack(_invariance_witness(alg, B)))
    return rep


def _pack(witness):
    return (witness is None, witness)


def orthogonal_complement(B: GramForm, S: Subspace) -> Subspace:
    """``{x : B(x, s) = 0 for all s in S}``."""
    n = B.space.dim
    G = B.matrix
    rows = [tuple(norm(sum((G[i][j] * s[j] for j in range(n) if s[j] != 0), 0)) for i in range(n)) for s in S.generators]
    return Subspace(B.space, tuple(linalg.kernel(rows, n)))


def is_isotropic(B: GramForm, S: Subspace) -> bool:
    gens = S.generators
    return all(B(u, v) == 0 for u in gens for v in gens)


def subspace_space(S: Subspace, labels=None) -> SuperSpace:
    """Superspace with the echelon basis of a graded subspace."""
    if not S.is_graded():
        raise ValueError("subspace is not graded")
    return SuperSpace(S.even_dim, S.odd_dim, tuple(labels) if labels else ())


def restrict_form(B: GramForm, basis, space: SuperSpace) -> GramForm:
    return GramForm(space, tuple(tuple(B(u, v) for v in basis) for u in basis))


def induced_quotient_form(B: GramForm, Iperp: Subspace, I: Subspace) -> GramForm:
    """Form induced on ``I^perp / I``, using the complement basis ``I.complement_in(Iperp)``."""
    if not is_isotropic(B, I):
        raise ValueError("I is not isotropic")
    if not I.issubset(Iperp):
        raise ValueError("I is not contained in I^perp")
    comp = I.complement_in(Iperp)
    space = subspace_space(comp)
    return restrict_form(B, comp.generators, space)


def is_antisymmetric_derivation(alg: SuperAlgebra, B: GramForm, D: LinearMap) -> bool:
    """Superderivation with ``B(Dx, y) = -(-1)^{|D||x|} B(x, Dy)``."""
    if D.parity is None:
        raise ValueError("need a homogeneous map")
    if _leibniz_witness(alg, D) is not None:
        return False
    return antisymmetry_witness(B, D) is None


def antisymmetry_witness(B: GramForm, D: LinearMap):
    n = B.space.dim
    p = B.space.parities
    cols = [tuple(D.matrix[k][j] for k in range(n)) for j in range(n)]
    for i in range(n):
        for j in range(n):
            if B(cols[i], unit(n, j)) != -sign(D.parity * p[i]) * B(unit(n, i), cols[j]):
                return (i, j)
    return None


def antisymmetric_derivations(alg: SuperAlgebra, B: GramForm, parity: int) -> list[LinearMap]:
    """Basis of the homogeneous superderivations of ``alg`` that are antisymmetric for ``B``."""
    n = alg.dim
    p = alg.space.parities
    var = {}
    for r in range(n):
        for c in range(n):
            if p[r] == (p[c] + parity) % 2:
                var[(r, c)] = len(var)
    e = linalg.Echelon(len(var))
    T = alg.table
    for i in range(n):
        for j in range(n):
            # D[e_i, e_j] - [D e_i, e_j] - (-1)^{|D||i|} [e_i, D e_j] = 0, component k
            rows: dict = {}

            def put(k, x, c):
                if c != 0:
                    rows.setdefault(k, {})
                    rows[k][x] = rows[k].get(x, 0) + c

            for m, v in T[i][j].items():
                for k in range(n):
                    if (k, m) in var:
                        put(k, var[(k, m)], v)
            for m in range(n):
                if (m, i) in var:
                    for k, v in T[m][j].items():
                        put(k, var[(m, i)], -v)
                if (m, j) in var:
                    s = sign(parity * p[i])
                    for k, v in T[i][m].items():
                        put(k, var[(m, j)], -s * v)
            for row in rows.values():
                row = {x: norm(c) for x, c in row.items() if c != 0}
                if row:
                    e.add(row)
            # B(D e_i, e_j) + (-1)^{|D||i|} B(e_i, D e_j) = 0
            row: dict = {}
            for m in range(n):
                if (m, i) in var and B.matrix[m][j] != 0:
                    row[var[(m, i)]] = row.get(var[(m, i)], 0) + B.matrix[m][j]
                if (m, j) in var and B.matrix[i][m] != 0:
                    row[var[(m, j)]] = row.get(var[(m, j)], 0) + sign(parity * p[i]) * B.matrix[i][m]
            row = {x: norm(c) for x, c in row.items() if c != 0}
            if row:
                e.add(row)
    out = []
    for sol in e.kernel():
        M = [[0] * n for _ in range(n)]
        for (r, c), x in var.items():
            M[r][c] = sol[x]
        out.append(LinearMap(alg.space, alg.space, tuple(tuple(r) for r in M), parity))
    return out


# -- the space of invariant forms ------------------------------------------------------


def invariant_form_space(alg: SuperAlgebra) -> list[GramForm]:
    """Basis of the even supersymmetric invariant bilinear forms on ``alg``."""
    n = alg.dim
    p = alg.space.parities
    # unknowns: G[i][j] with i <= j in the same parity block (i < j on the odd block)
    var = {}
    for i in range(n):
        for j in range(i, n):
            if p[i] != p[j] or (p[i] == 1 and i == j):
                continue
            var[(i, j)] = len(var)
    nv = len(var)

    def entry(i, j):
        """Sparse expression ``{var: coeff}`` of ``G[i][j]``."""
        if p[i] != p[j] or (p[i] == 1 and i == j):
            return {}
        if i <= j:
            return {var[(i, j)]: 1}
        return {var[(j, i)]: sign(p[i] * p[j])}

    T = alg.table
    e = linalg.Echelon(nv)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if (p[i] + p[j] + p[k]) % 2:
                    continue
                row: dict = {}
                for m, v in T[i][j].items():
                    for x, c in entry(m, k).items():
                        row[x] = row.get(x, 0) + v * c
                for m, v in T[j][k].items():
                    for x, c in entry(i, m).items():
                        row[x] = row.get(x, 0) - c * v
                row = {x: norm(c) for x, c in row.items() if c != 0}
                if row:
                    e.add(row)
    forms = []
    for sol in e.kernel():
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                tot = sum((c * sol[x] for x, c in entry(i, j).items()), 0)
                G[i][j] = norm(tot)
        forms.append(GramForm(alg.space, tuple(tuple(r) for r in G)))
    return forms


@dataclass
class InvariantFormResult:
    """Answer of :func:`has_invariant_scalar_product`.

    For a negative answer the certificate is the evaluation grid: ``det`` of
    ``sum t_i G_i`` vanishes on ``grid_sizes[0] x ... x grid_sizes[m-1]``
    integer points, while its degree in ``t_i`` is at most ``degree_bounds[i]
    < grid_sizes[i]``; a nonzero polynomial cannot vanish on such a grid.
    """

    exists: bool
    form: GramForm | None
    basis: list
    degree_bounds: tuple = ()
    grid_sizes: tuple = ()
    points_checked: int = 0
    common_radical: Subspace | None = None

    def __bool__(self):
        return self.exists

    def describe(self) -> str:
        if self.exists:
            return "invariant scalar product found"
        lines = [
            "no invariant scalar product: determinant vanishes identically",
            f"  form space dim = {len(self.basis)}",
            f"  degree bounds per variable = {self.degree_bounds}",
            f"  grid sizes = {self.grid_sizes} ({self.points_checked} points, all det = 0)",
        ]
        if self.common_radical is not None:
            lines.append(f"  common radical dim = {self.common_radical.dim}")
        return "\n".join(lines)


def _combine(basis, coeffs, space) -> GramForm:
    n = space.dim
    M = [[0] * n for _ in range(n)]
    for c, G in zip(coeffs, basis):
        if c == 0:
            continue
        for i, row in enumerate(G.matrix):
            for j, v in enumerate(row):
                if v != 0:
                    M[i][j] += c * v
    return GramForm(space, tuple(tuple(r) for r in M))


def has_invariant_scalar_product(alg: SuperAlgebra) -> InvariantFormResult:
    """Decide whether some element of :func:`invariant_form_space` is non-degenerate."""
    basis = invariant_form_space(alg)
    space = alg.space
    n = space.dim
    if n == 0:
        return InvariantFormResult(True, GramForm.zero(space), basis)
    m = len(basis)
    if m == 0 or space.odd_dim % 2:
        return InvariantFormResult(False, None, basis, (), (), 0, Subspace.full(space))
    # cheap guesses first
    guesses = [tuple(1 if k == i else 0 for k in range(m)) for i in range(m)]
    guesses.append((1,) * m)
    guesses.append(tuple(k + 1 for k in range(m)))
    for g in guesses:
        F = _combine(basis, g, space)
        if F.is_nondegenerate():
            return InvariantFormResult(True, F, basis)
    bounds = tuple(linalg.rank(G.matrix, n) for G in basis)
    sizes = tuple(b + 1 for b in bounds)
    radical_eqs = [row for G in basis for row in G.matrix]
    radical = Subspace(space, tuple(linalg.kernel(radical_eqs, n)))
    count = 0
    for point in product(*(range(s) for s in sizes)):
        count += 1
        if not any(point):
            continue
        F = _combine(basis, point, space)
        if F.is_nondegenerate():
            return InvariantFormResult(True, F, basis)
    return InvariantFormResult(False, None, basis, bounds, sizes, count, radical)


def verify_isometry(Pi, gA: QuadraticSuperAlgebra, gB: QuadraticSuperAlgebra) -> Report:
    """Check that ``Pi`` is an even bijection preserving bracket and form."""
    M = Pi.matrix if isinstance(Pi, LinearMap) else tuple(tuple(r) for r in Pi)
    rep = Report("isometry")
    nA, nB = gA.dim, gB.dim
    if len(M) != nB or any(len(r) != nA for r in M):
        rep.add("shape", False, None, f"expected a {nB}x{nA} matrix")
        return rep
    pA, pB = gA.space.parities, gB.space.parities
    bad = next(((k, j) for k in range(nB) for j in range(nA) if M[k][j] != 0 and pA[j] != pB[k]), None)
    rep.add("even", bad is None, bad)
    rep.add("bijective", nA == nB and linalg.det(M) != 0)
    cols = [tuple(M[k][j] for k in range(nB)) for j in range(nA)]
    witness = None
    for i in range(nA):
        for j in range(nA):
            lhs = linalg.matvec(M, tuple(gA.alg.table[i][j].get(k, 0) for k in range(nA)))
            if lhs != gB.alg.bracket(cols[i], cols[j]):
                witness = (i, j)
                break
        if witness:
            break
    rep.add("bracket-preserving", witness is None, witness)
    witness = None
    for i in range(nA):
        for j in range(nA):
            if gB.form(cols[i], cols[j]) != gA.form.matrix[i][j]:
                witness = (i, j)
                break
        if witness:
            break
    rep.add("form-preserving", witness is None, witness)
    return rep
