"""Superspaces, Lie superalgebras from structure constants, subspaces,
homogeneous linear maps and representations.

Conventions: the basis of a :class:`SuperSpace` lists the even vectors
first, so ``parity(i) = 0`` for ``i < even_dim``.  A matrix ``M`` of a
linear map has ``M[k][j]`` = coefficient of ``e_k`` in the image of
``e_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from . import linalg
from .scalars import norm

__all__ = [
    "Check",
    "LinearMap",
    "Report",
    "Representation",
    "SeriesResult",
    "Subspace",
    "SuperAlgebra",
    "SuperSpace",
    "adjoint",
    "adjoint_representation",
    "bracket_eval",
    "bracket_span",
    "center",
    "centralizer",
    "derived_and_central_series",
    "dual_representation",
    "homogeneous_parity",
    "ideal_generated_by",
    "is_graded_ideal",
    "is_superderivation",
    "quotient_algebra",
    "sign",
    "supercommutator",
    "validate_representation",
    "validate_superalgebra",
]


def sign(k: int) -> int:
    """``(-1)**k`` for an integer exponent."""
    return -1 if k % 2 else 1


# -- small vector helpers -----------------------------------------------------


def unit(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def vadd(x, y) -> tuple:
    return tuple(norm(a + b) for a, b in zip(x, y))


def vsub(x, y) -> tuple:
    return tuple(norm(a - b) for a, b in zip(x, y))


def vscale(s, x) -> tuple:
    return tuple(norm(s * a) for a in x)


def is_zero(x) -> bool:
    return all(a == 0 for a in x)


def lincomb(coeffs, vectors, n: int) -> tuple:
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for k, a in enumerate(v):
            if a != 0:
                out[k] = out[k] + c * a
    return tuple(norm(a) for a in out)


# -- reports ------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"{status}  {self.name}"
        if self.witness is not None:
            s += f"  witness={self.witness}"
        if self.detail:
            s += f"  {self.detail}"
        return s


@dataclass
class Report:
    """Outcome of a validation: one :class:`Check` per axiom or identity."""

    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness=None, detail: str = "") -> Check:
        c = Check(name, bool(passed), witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def table(self) -> str:
        lines = [f"== {self.title}"] + [c.line() for c in self.checks]
        return "\n".join(lines)

    __str__ = table


# -- superspaces ----------------------------------------------------------------


@dataclass(frozen=True)
class SuperSpace:
    even_dim: int
    odd_dim: int
    labels: tuple = ()

    def __post_init__(self):
        if self.even_dim < 0 or self.odd_dim < 0:
            raise ValueError("dimensions must be non-negative")
        n = self.even_dim + self.odd_dim
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(n)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != n:
            raise ValueError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise ValueError("basis labels must be distinct")

    @property
    def dim(self) -> int:
        return self.even_dim + self.odd_dim

    def parity(self, i: int) -> int:
        return 0 if i < self.even_dim else 1

    @cached_property
    def parities(self) -> tuple:
        return (0,) * self.even_dim + (1,) * self.odd_dim

    def relabel(self, labels) -> "SuperSpace":
        return SuperSpace(self.even_dim, self.odd_dim, tuple(labels))


def homogeneous_parity(space: SuperSpace, x) -> int | None:
    """Parity of a coordinate vector; 0 for the zero vector, None if mixed."""
    p = space.even_dim
    ev = any(a != 0 for a in x[:p])
    od = any(a != 0 for a in x[p:])
    if ev and od:
        return None
    return 1 if od else 0


# -- algebras -----------------------------------------------------------------


@dataclass(frozen=True)
class SuperAlgebra:
    """Structure constants ``c[i][j][k]``: ``[e_i, e_j] = sum_k c[i][j][k] e_k``."""

    space: SuperSpace
    c: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.space.dim
        c = tuple(tuple(tuple(norm(v) for v in row) for row in plane) for plane in self.c)
        if len(c) != n or any(len(r) != n or any(len(v) != n for v in r) for r in c):
            raise ValueError(f"structure tensor must have shape ({n}, {n}, {n})")
        object.__setattr__(self, "c", c)

    @classmethod
    def from_brackets(
        cls,
        space: SuperSpace,
        brackets: Mapping,
        name: str = "",
        complete: bool = True,
    ) -> "SuperAlgebra":
        """Build from ``{(i, j): {k: coeff}}`` (or ``(i, j): vector``).

        With ``complete`` the super-antisymmetric partner of every given
        pair is filled in unless it is given explicitly.
        """
        n = space.dim
        c = [[[0] * n for _ in range(n)] for _ in range(n)]
        given = set()
        for (i, j), terms in brackets.items():
            items = terms.items() if isinstance(terms, Mapping) else enumerate(terms)
            for k, v in items:
                c[i][j][k] = norm(c[i][j][k] + v)
            given.add((i, j))
        if complete:
            for (i, j) in list(given):
                if (j, i) in given or i == j:
                    continue
                s = -sign(space.parity(i) * space.parity(j))
                for k in range(n):
                    c[j][i][k] = norm(s * c[i][j][k])
        return cls(space, tuple(tuple(tuple(r) for r in plane) for plane in c), name)

    @classmethod
    def abelian(cls, even_dim: int, odd_dim: int, name: str = "") -> "SuperAlgebra":
        space = SuperSpace(even_dim, odd_dim)
        return cls.from_brackets(space, {}, name=name or f"A({even_dim}|{odd_dim})")

    @property
    def dim(self) -> int:
        return self.space.dim

    def parity(self, i: int) -> int:
        return self.space.parity(i)

    @cached_property
    def table(self) -> tuple:
        """Sparse view: ``table[i][j]`` is a dict ``k -> c[i][j][k]``."""
        return tuple(
            tuple({k: v for k, v in enumerate(vec) if v != 0} for vec in plane)
            for plane in self.c
        )

    def basis_bracket(self, i: int, j: int) -> dict:
        return self.table[i][j]

    def bracket_sparse(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            row = self.table[i]
            for j, b in y.items():
                ab = a * b
                for k, v in row[j].items():
                    out[k] = out.get(k, 0) + ab * v
        return {k: norm(v) for k, v in out.items() if v != 0}

    def bracket(self, x, y) -> tuple:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise ValueError(f"dimension mismatch: expected vectors of length {n}")
        s = self.bracket_sparse(linalg.to_sparse(x), linalg.to_sparse(y))
        return tuple(s.get(k, 0) for k in range(n))

    def with_name(self, name: str) -> "SuperAlgebra":
        return SuperAlgebra(self.space, self.c, name)


def bracket_eval(alg: SuperAlgebra, x, y) -> tuple:
    """``sum_ij x_i y_j c[i][j][.]``."""
    return alg.bracket(x, y)


def _sparse_vec(d: Mapping, n: int) -> tuple:
    return tuple(d.get(k, 0) for k in range(n))


def jacobiator(alg: SuperAlgebra, i: int, j: int, k: int) -> dict:
    """Graded cyclic sum ``sum (-1)^{|a||c|} [a, [b, c]]`` on basis vectors."""
    p = alg.space.parities
    T = alg.table
    out: dict = {}
    for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
        s = sign(p[a] * p[cc])
        for m, v in T[b][cc].items():
            for r, u in T[a][m].items():
                out[r] = out.get(r, 0) + s * v * u
    return {r: norm(v) for r, v in out.items() if v != 0}


def validate_superalgebra(alg: SuperAlgebra) -> Report:
    """Check parity-homogeneity, super antisymmetry and the super Jacobi identity.

    Witnesses are the lexicographically smallest violating index triples.
    """
    n = alg.dim
    p = alg.space.parities
    T = alg.table
    rep = Report(f"superalgebra {alg.name or ''}".strip())

    witness = None
    for i in range(n):
        for j in range(n):
            for k in T[i][j]:
                if p[k] != (p[i] + p[j]) % 2:
                    witness = (i, j, k)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("parity-homogeneity", witness is None, witness)

    witness = None
    for i in range(n):
        for j in range(n):
            s = -sign(p[i] * p[j])
            for k in set(T[i][j]) | set(T[j][i]):
                if T[i][j].get(k, 0) != s * T[j][i].get(k, 0):
                    witness = (i, j, min(kk for kk in set(T[i][j]) | set(T[j][i])
                                         if T[i][j].get(kk, 0) != s * T[j][i].get(kk, 0)))
                    break
            if witness:
                break
        if witness:
            break
    antisym_ok = witness is None
    rep.add("super-antisymmetry", antisym_ok, witness)

    witness, detail = None, ""
    for i in range(n):
        for j in range(i if antisym_ok else 0, n):
            for k in range(j if antisym_ok else 0, n):
                J = jacobiator(alg, i, j, k)
                if J:
                    witness = (i, j, k)
                    detail = f"jacobiator={_sparse_vec(J, n)}"
                    break
            if witness:
                break
        if witness:
            break
    rep.add("super-jacobi", witness is None, witness, detail)
    return rep


# -- subspaces ------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """Span of coordinate vectors, stored in reduced row echelon form."""

    ambient: SuperSpace
    generators: tuple = ()

    def __post_init__(self):
        n = self.ambient.dim
        for g in self.generators:
            if len(g) != n:
                raise ValueError("generator length does not match the ambient space")
        object.__setattr__(self, "generators", tuple(linalg.row_space(self.generators, n)))

    @classmethod
    def span(cls, ambient: SuperSpace, vectors: Iterable) -> "Subspace":
        return cls(ambient, tuple(tuple(v) for v in vectors))

    @classmethod
    def zero(cls, ambient: SuperSpace) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: SuperSpace) -> "Subspace":
        n = ambient.dim
        return cls(ambient, tuple(unit(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.generators)

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(k for k, a in enumerate(g) if a != 0) for g in self.generators)

    @cached_property
    def _echelon(self) -> linalg.Echelon:
        e = linalg.Echelon(self.ambient.dim)
        for g in self.generators:
            e.add(g)
        return e

    def contains(self, v) -> bool:
        return self._echelon.contains(v)

    def reduce(self, v) -> tuple:
        """Representative of ``v`` modulo the subspace with zero pivot entries."""
        r = self._echelon.reduce(v)
        return tuple(r.get(k, 0) for k in range(self.ambient.dim))

    def coordinates(self, v) -> tuple:
        """Coordinates of ``v`` (which must lie in the span) in the echelon basis."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def is_graded(self) -> bool:
        return all(homogeneous_parity(self.ambient, g) is not None for g in self.generators)

    def parity_of(self, idx: int) -> int:
        return homogeneous_parity(self.ambient, self.generators[idx])

    @property
    def even_dim(self) -> int:
        return sum(1 for p in self.pivots if p < self.ambient.even_dim)

    @property
    def odd_dim(self) -> int:
        return self.dim - self.even_dim

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(g) for g in self.generators)

    __le__ = issubset

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, self.generators + other.generators)

    def annihilator(self) -> list[tuple]:
        """Rows of linear equations cutting out the subspace."""
        return linalg.kernel(self.generators, self.ambient.dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        eqs = self.annihilator() + other.annihilator()
        return Subspace(self.ambient, tuple(linalg.kernel(eqs, self.ambient.dim)))

    __and__ = intersection

    def complement_in(self, larger: "Subspace") -> "Subspace":
        """Deterministic complement of ``self`` inside ``larger``.

        Spanned by the echelon rows of ``larger`` reduced modulo ``self``;
        the result has zero entries at the pivot columns of ``self``.
        """
        if not self.issubset(larger):
            raise ValueError("subspace is not contained in the larger one")
        reduced = [self.reduce(g) for g in larger.generators]
        return Subspace(self.ambient, tuple(r for r in reduced if not is_zero(r)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, generators={self.generators})"


def bracket_span(alg: SuperAlgebra, U: Subspace, W: Subspace) -> Subspace:
    """``[U, W]``."""
    vecs = []
    for u in U.generators:
        for w in W.generators:
            b = alg.bracket(u, w)
            if not is_zero(b):
                vecs.append(b)
    return Subspace.span(alg.space, vecs)


def ideal_generated_by(alg: SuperAlgebra, vectors: Iterable) -> Subspace:
    n = alg.dim
    e = linalg.Echelon(n)
    queue = []
    for v in vectors:
        if e.add(v):
            queue.append(tuple(v))
    while queue:
        v = queue.pop()
        for i in range(n):
            b = alg.bracket(unit(n, i), v)
            if e.add(b):
                queue.append(b)
    return Subspace(alg.space, tuple(e.basis()))


# -- linear maps ----------------------------------------------------------------


@dataclass(frozen=True)
class LinearMap:
    """Matrix of a linear map with a declared parity (None: inhomogeneous)."""

    domain: SuperSpace
    codomain: SuperSpace
    matrix: tuple
    parity: int | None = 0

    def __post_init__(self):
        M = tuple(tuple(norm(v) for v in row) for row in self.matrix)
        if len(M) != self.codomain.dim or any(len(r) != self.domain.dim for r in M):
            raise ValueError(
                f"matrix shape must be ({self.codomain.dim}, {self.domain.dim})"
            )
        object.__setattr__(self, "matrix", M)
        if self.parity is not None:
            for k, row in enumerate(M):
                for j, v in enumerate(row):
                    if v != 0 and (self.codomain.parity(k) + self.domain.parity(j)) % 2 != self.parity:
                        raise ValueError(
                            f"entry ({k}, {j}) violates declared parity {self.parity}"
                        )

    def __call__(self, x) -> tuple:
        return linalg.matvec(self.matrix, x)

    def compose(self, other: "LinearMap") -> "LinearMap":
        par = None if self.parity is None or other.parity is None else (self.parity + other.parity) % 2
        return LinearMap(other.domain, self.codomain, linalg.matmul(self.matrix, other.matrix), par)

    __matmul__ = compose

    @classmethod
    def identity(cls, space: SuperSpace) -> "LinearMap":
        return cls(space, space, linalg.identity(space.dim), 0)

    @classmethod
    def zero(cls, domain: SuperSpace, codomain: SuperSpace, parity: int = 0) -> "LinearMap":
        return cls(domain, codomain, linalg.zeros(codomain.dim, domain.dim), parity)


def supercommutator(A, pa: int, B, pb: int) -> tuple:
    AB = linalg.matmul(A, B)
    BA = linalg.matmul(B, A)
    s = sign(pa * pb)
    return tuple(tuple(norm(x - s * y) for x, y in zip(r1, r2)) for r1, r2 in zip(AB, BA))


def adjoint(alg: SuperAlgebra, x) -> LinearMap:
    """Matrix of ``y -> [x, y]``."""
    p = homogeneous_parity(alg.space, x)
    if p is None:
        raise ValueError("adjoint() needs a homogeneous vector")
    n = alg.dim
    xs = linalg.to_sparse(x)
    cols = [alg.bracket_sparse(xs, {j: 1}) for j in range(n)]
    M = tuple(tuple(cols[j].get(k, 0) for j in range(n)) for k in range(n))
    return LinearMap(alg.space, alg.space, M, p)


def ad_matrices(alg: SuperAlgebra) -> tuple:
    n = alg.dim
    return tuple(adjoint(alg, unit(n, i)).matrix for i in range(n))


def is_superderivation(alg: SuperAlgebra, D: LinearMap) -> bool:
    """Signed Leibniz rule ``D[x,y] = [Dx,y] + (-1)^{|D||x|}[x,Dy]`` on basis pairs."""
    if D.parity is None:
        raise ValueError("superderivation test needs a homogeneous map")
    return _leibniz_witness(alg, D) is None


def _leibniz_witness(alg: SuperAlgebra, D: LinearMap):
    n = alg.dim
    p = alg.space.parities
    cols = [tuple(D.matrix[k][j] for k in range(n)) for j in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = D(_sparse_vec(alg.table[i][j], n))
            r1 = alg.bracket(cols[i], unit(n, j))
            r2 = alg.bracket(unit(n, i), cols[j])
            s = sign(D.parity * p[i])
            if any(a != b + s * c for a, b, c in zip(lhs, r1, r2)):
                return (i, j)
    return None


# -- series, center, ideals, quotients -------------------------------------------------


@dataclass
class SeriesResult:
    derived: list
    lower_central: list
    is_solvable: bool
    is_nilpotent: bool

    @property
    def nilpotency_class(self) -> int | None:
        return len(self.lower_central) if self.is_nilpotent else None


def derived_and_central_series(alg: SuperAlgebra) -> SeriesResult:
    """Terms ``[g,g], [D1,D1], ...`` and ``[g,g], [g,C1], ...`` until they stabilize."""
    g = Subspace.full(alg.space)

    def run(step):
        out = []
        prev = g
        while True:
            nxt = step(prev)
            if out and nxt == out[-1]:
                break
            if not out and nxt == g:
                out.append(nxt)
                break
            out.append(nxt)
            prev = nxt
            if nxt.dim == 0:
                break
        return out

    derived = run(lambda s: bracket_span(alg, s, s))
    lower = run(lambda s: bracket_span(alg, g, s))
    return SeriesResult(
        derived, lower, derived[-1].dim == 0, lower[-1].dim == 0
    )


def centralizer(alg: SuperAlgebra, I: Subspace) -> Subspace:
    """``{x : [x, s] = 0 for all s in I}``."""
    n = alg.dim
    rows = []
    for s in I.generators:
        ss = linalg.to_sparse(s)
        images = [alg.bracket_sparse({i: 1}, ss) for i in range(n)]
        for k in range(n):
            row = {i: images[i][k] for i in range(n) if k in images[i]}
            if row:
                rows.append(row)
    return Subspace(alg.space, tuple(linalg.kernel(rows, n)))


def center(alg: SuperAlgebra) -> Subspace:
    return centralizer(alg, Subspace.full(alg.space))


def is_graded_ideal(alg: SuperAlgebra, I: Subspace) -> bool:
    if not I.is_graded():
        return False
    n = alg.dim
    for s in I.generators:
        for i in range(n):
            if not I.contains(alg.bracket(unit(n, i), s)):
                return False
    return True


def quotient_algebra(alg: SuperAlgebra, I: Subspace) -> tuple[SuperAlgebra, LinearMap]:
    """Quotient by a graded ideal on the basis of non-pivot coordinates of ``I``."""
    if not is_graded_ideal(alg, I):
        raise ValueError("quotient_algebra needs a graded ideal")
    n = alg.dim
    keep = [k for k in range(n) if k not in set(I.pivots)]
    p = alg.space.even_dim
    ev = [k for k in keep if k < p]
    labels = [alg.space.labels[k] for k in keep]
    qspace = SuperSpace(len(ev), len(keep) - len(ev), labels)

    def proj(v):
        r = I.reduce(v)
        return tuple(r[k] for k in keep)

    P = [proj(unit(n, j)) for j in range(n)]
    projection = LinearMap(
        alg.space, qspace, tuple(tuple(P[j][a] for j in range(n)) for a in range(len(keep))), 0
    )
    brackets = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            v = proj(_sparse_vec(alg.table[i][j], n))
            if not is_zero(v):
                brackets[(a, b)] = v
    q = SuperAlgebra.from_brackets(qspace, brackets, name=f"{alg.name}/I" if alg.name else "", complete=False)
    return q, projection


# -- representations --------------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    algebra: SuperAlgebra
    module_space: SuperSpace
    rho: tuple

    def __post_init__(self):
        if len(self.rho) != self.algebra.dim:
            raise ValueError("need one action matrix per basis element")
        mats = []
        for i, r in enumerate(self.rho):
            if not isinstance(r, LinearMap):
                r = LinearMap(self.module_space, self.module_space, r, self.algebra.parity(i))
            mats.append(r)
        object.__setattr__(self, "rho", tuple(mats))

    @property
    def matrices(self) -> tuple:
        return tuple(r.matrix for r in self.rho)

    def act(self, x, v) -> tuple:
        """``rho(x) v`` for a coordinate vector ``x`` of the algebra."""
        M = [0] * self.module_space.dim
        for i, a in enumerate(x):
            if a != 0:
                M = [m + a * w for m, w in zip(M, self.rho[i](v))]
        return tuple(norm(m) for m in M)


def adjoint_representation(alg: SuperAlgebra) -> Representation:
    return Representation(alg, alg.space, tuple(adjoint(alg, unit(alg.dim, i)) for i in range(alg.dim)))


def validate_representation(rep: Representation) -> Report:
    alg = rep.algebra
    n = alg.dim
    p = alg.space.parities
    report = Report("representation")
    bad = next((i for i, r in enumerate(rep.rho) if r.parity != p[i]), None)
    report.add("parity", bad is None, None if bad is None else (bad,))
    mats = rep.matrices
    m = rep.module_space.dim
    witness = None
    for i in range(n):
        for j in range(n):
            lhs = [[0] * m for _ in range(m)]
            for k, v in alg.table[i][j].items():
                for a in range(m):
                    for b in range(m):
                        if mats[k][a][b] != 0:
                            lhs[a][b] += v * mats[k][a][b]
            rhs = supercommutator(mats[i], p[i], mats[j], p[j])
            if any(norm(x) != y for r1, r2 in zip(lhs, rhs) for x, y in zip(r1, r2)):
                witness = (i, j)
                break
        if witness:
            break
    report.add("bracket-compatibility", witness is None, witness)
    return report


def dual_representation(rep: Representation) -> Representation:
    """Contragredient module: ``rho*(x) f = -(-1)^{|x||f|} f o rho(x)``."""
    V = rep.module_space
    dual_space = V.relabel(tuple(f"{l}*" for l in V.labels))
    m = V.dim
    mats = []
    for i, r in enumerate(rep.rho):
        px = rep.algebra.parity(i)
        M = r.matrix
        Mt = tuple(
            tuple(norm(-sign(px * V.parity(b)) * M[b][a]) for b in range(m)) for a in range(m)
        )
        mats.append(LinearMap(dual_space, dual_space, Mt, px))
    return Representation(rep.algebra, dual_space, tuple(mats))
