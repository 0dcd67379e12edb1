"""Named example algebras with their expected properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from . import linalg
from .core import (
    Report,
    SuperAlgebra,
    SuperSpace,
    center,
    derived_and_central_series,
    supercommutator,
    validate_superalgebra,
)
from .extensions import classical_double_extension, tstar_extension
from .quadratic import GramForm, QuadraticSuperAlgebra, has_invariant_scalar_product, validate_quadratic

__all__ = [
    "CatalogEntry",
    "abelian",
    "algebra_from_matrices",
    "catalog",
    "check_expected",
    "get_entry",
    "make_cartan_w",
    "make_duflo7",
    "make_en",
    "make_gn",
    "make_heisenberg3",
    "make_oscillator4",
    "make_osp12_nilpotent",
    "make_sl2_killing",
    "make_standard",
]


def algebra_from_matrices(mats, parities, labels, name: str = "") -> SuperAlgebra:
    """Structure constants of a span of homogeneous matrices closed under the supercommutator."""
    flat = [tuple(v for row in M for v in row) for M in mats]
    n = len(mats)
    m = len(flat[0]) if flat else 0
    e = linalg.Echelon(m)
    for f in flat:
        if not e.add(f):
            raise ValueError("matrices are linearly dependent")
    # coordinates: solve sum c_k flat_k = target via the transposed system
    cols = [tuple(flat[k][r] for k in range(n)) for r in range(m)]
    order = sorted(range(n), key=lambda i: parities[i])
    if order != list(range(n)):
        raise ValueError("list even matrices first")
    space = SuperSpace(sum(1 for p in parities if p == 0), sum(1 for p in parities if p == 1), tuple(labels))
    br = {}
    for i in range(n):
        for j in range(n):
            C = supercommutator(mats[i], parities[i], mats[j], parities[j])
            target = [v for row in C for v in row]
            if not any(target):
                continue
            coeffs = linalg.solve(cols, target, n)
            if coeffs is None:
                raise ValueError(f"span is not closed: [{labels[i]}, {labels[j]}]")
            br[(i, j)] = coeffs
    return SuperAlgebra.from_brackets(space, br, name=name, complete=False)


def _unit(N, r, c):
    return tuple(tuple(1 if (a, b) == (r, c) else 0 for b in range(N)) for a in range(N))


def make_gn(n: int) -> SuperAlgebra:
    """Block matrices ``[[A, B], [C, D]]`` in gl(n|n) with ``A, C, D`` strictly
    upper triangular and ``B`` upper triangular.

    Basis: even ``a_ij`` then ``d_ij`` (i < j); odd ``b_ij`` (i <= j) then ``c_ij`` (i < j).
    Indices in labels are 1-based.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N = 2 * n
    mats, par, labels = [], [], []
    for blk, (ro, co), strict, p in (
        ("a", (0, 0), True, 0),
        ("d", (n, n), True, 0),
        ("b", (0, n), False, 1),
        ("c", (n, 0), True, 1),
    ):
        for i in range(n):
            for j in range(i + (1 if strict else 0), n):
                mats.append(_unit(N, ro + i, co + j))
                par.append(p)
                labels.append(f"{blk}{i + 1}{j + 1}")
    return algebra_from_matrices(mats, par, labels, name=f"g({n})")


def make_en(n: int) -> QuadraticSuperAlgebra:
    """``T*_0 g(n)``."""
    return tstar_extension(make_gn(n))


def abelian(even_dim: int, odd_dim: int, G=None) -> SuperAlgebra | QuadraticSuperAlgebra:
    alg = SuperAlgebra.abelian(even_dim, odd_dim)
    if G is None:
        return alg
    return QuadraticSuperAlgebra(alg, GramForm(alg.space, G))


def make_heisenberg3() -> SuperAlgebra:
    space = SuperSpace(3, 0, ("x", "y", "z"))
    return SuperAlgebra.from_brackets(space, {(0, 1): {2: 1}}, name="h3")


def make_osp12_nilpotent() -> SuperAlgebra:
    """Even ``e``, odd ``x`` with ``[x, x] = 2e``."""
    space = SuperSpace(1, 1, ("e", "x"))
    return SuperAlgebra.from_brackets(space, {(1, 1): {0: 2}}, name="N")


def make_duflo7() -> QuadraticSuperAlgebra:
    """Double extension of the (1|2) quadratic space ``V`` by the nilpotent part of osp(1|2).

    ``V``: even ``u``, odd ``p, q``; ``B(u,u) = 1``, ``B(p,q) = 1 = -B(q,p)``.
    ``phi(x)``: ``u -> p``, ``q -> -u``, ``p -> 0``;  ``phi(e) = phi(x)^2``: ``q -> -p``.
    """
    V = SuperAlgebra.from_brackets(SuperSpace(1, 2, ("u", "p", "q")), {}, name="V")
    BV = GramForm(V.space, ((1, 0, 0), (0, 0, 1), (0, -1, 0)))
    N = make_osp12_nilpotent()
    phi_x = ((0, 0, -1), (1, 0, 0), (0, 0, 0))
    phi_e = linalg.matmul(phi_x, phi_x)
    g = classical_double_extension(V, BV, N, (phi_e, phi_x))
    return QuadraticSuperAlgebra(g.alg.with_name("duflo7"), g.form, g.blocks)


def make_oscillator4() -> QuadraticSuperAlgebra:
    """Double extension of the hyperbolic plane by ``t`` acting as ``diag(1, -1)``."""
    plane = SuperAlgebra.from_brackets(SuperSpace(2, 0, ("u", "v")), {}, name="plane")
    Bp = GramForm(plane.space, ((0, 1), (1, 0)))
    line = SuperAlgebra.from_brackets(SuperSpace(1, 0, ("t",)), {}, name="t")
    g = classical_double_extension(plane, Bp, line, (((1, 0), (0, -1)),))
    return QuadraticSuperAlgebra(g.alg.with_name("oscillator4"), g.form, g.blocks)


def make_sl2_killing() -> QuadraticSuperAlgebra:
    space = SuperSpace(3, 0, ("h", "e", "f"))
    alg = SuperAlgebra.from_brackets(
        space, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, name="sl2"
    )
    K = ((8, 0, 0), (0, 0, 4), (0, 4, 0))
    return QuadraticSuperAlgebra(alg, GramForm(space, K))


def _wedge_basis(n):
    return [I for k in range(n + 1) for I in combinations(range(n), k)]


def make_cartan_w(n: int) -> SuperAlgebra:
    """``W(n)``: superderivations ``xi^I d_j`` of the exterior algebra on ``n`` generators."""
    if not 1 <= n <= 3:
        raise ValueError("cartan_W is provided for 1 <= n <= 3")
    mons = _wedge_basis(n)
    pos = {I: k for k, I in enumerate(mons)}
    N = len(mons)

    def wedge(I, J):
        if set(I) & set(J):
            return 0, None
        seq = list(I) + list(J)
        s = 1
        for a in range(len(seq)):
            for b in range(len(seq) - 1 - a):
                if seq[b] > seq[b + 1]:
                    seq[b], seq[b + 1] = seq[b + 1], seq[b]
                    s = -s
        return s, tuple(seq)

    def derivation(I, j):
        M = [[0] * N for _ in range(N)]
        for J in mons:
            if j not in J:
                continue
            k = J.index(j)
            rest = J[:k] + J[k + 1:]
            s, K = wedge(I, rest)
            if s:
                M[pos[K]][pos[J]] = s * (-1) ** k
        return tuple(tuple(r) for r in M)

    items = []
    for I in mons:
        for j in range(n):
            p = (len(I) + 1) % 2
            lab = "".join(f"x{i + 1}" for i in I) or "1"
            items.append((p, f"{lab}d{j + 1}", derivation(I, j)))
    items.sort(key=lambda t: t[0])
    return algebra_from_matrices(
        [t[2] for t in items], [t[0] for t in items], [t[1] for t in items], name=f"W({n})"
    )


_STANDARD = {
    "abelian": abelian,
    "heisenberg3": make_heisenberg3,
    "oscillator4": make_oscillator4,
    "sl2_killing": make_sl2_killing,
    "osp12_nilpotent": make_osp12_nilpotent,
    "cartan_W": make_cartan_w,
}


def make_standard(name: str, *args, **kwargs):
    try:
        builder = _STANDARD[name]
    except KeyError:
        raise ValueError(f"unknown catalog name {name!r}") from None
    return builder(*args, **kwargs)


# -- entries -------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    """A named fixture.  ``expected`` keys: dim, even_dim, odd_dim, quadratic,
    solvable, nilpotent, center_dim, center_in_odd, has_scalar_product."""

    name: str
    builder: Callable
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    def build(self):
        return self.builder(**self.params)


def _entries():
    hyp = ((0, 1), (1, 0))
    symp = ((0, 1), (-1, 0))
    return [
        CatalogEntry("gn1", make_gn, {"n": 1}, dict(dim=1, even_dim=0, odd_dim=1, quadratic=False, solvable=True, nilpotent=True, center_dim=1, center_in_odd=True)),
        CatalogEntry("gn2", make_gn, {"n": 2}, dict(dim=6, even_dim=2, odd_dim=4, quadratic=False, solvable=True, nilpotent=True, center_dim=1, center_in_odd=True)),
        CatalogEntry("gn3", make_gn, {"n": 3}, dict(dim=15, even_dim=6, odd_dim=9, quadratic=False, solvable=True, nilpotent=True, center_dim=1, center_in_odd=True)),
        CatalogEntry("E2", make_en, {"n": 2}, dict(dim=12, even_dim=4, odd_dim=8, quadratic=True, solvable=True, nilpotent=True, center_in_odd=True)),
        CatalogEntry("duflo7", make_duflo7, {}, dict(dim=7, even_dim=3, odd_dim=4, quadratic=True, solvable=True, nilpotent=True, center_in_odd=True)),
        CatalogEntry("abelian_1_0", abelian, {"even_dim": 1, "odd_dim": 0, "G": ((1,),)}, dict(dim=1, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("abelian_1_0_neg", abelian, {"even_dim": 1, "odd_dim": 0, "G": ((-1,),)}, dict(dim=1, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("abelian_2_0_hyp", abelian, {"even_dim": 2, "odd_dim": 0, "G": hyp}, dict(dim=2, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("abelian_2_0_id", abelian, {"even_dim": 2, "odd_dim": 0, "G": ((1, 0), (0, 1))}, dict(dim=2, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("abelian_0_2", abelian, {"even_dim": 0, "odd_dim": 2, "G": symp}, dict(dim=2, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("abelian_1_2", abelian, {"even_dim": 1, "odd_dim": 2, "G": ((1, 0, 0), (0, 0, 1), (0, -1, 0))}, dict(dim=3, quadratic=True, solvable=True, nilpotent=True)),
        CatalogEntry("heisenberg3", make_heisenberg3, {}, dict(dim=3, quadratic=False, solvable=True, nilpotent=True, center_dim=1, has_scalar_product=False)),
        CatalogEntry("oscillator4", make_oscillator4, {}, dict(dim=4, quadratic=True, solvable=True, nilpotent=False)),
        CatalogEntry("sl2_killing", make_sl2_killing, {}, dict(dim=3, quadratic=True, solvable=False, nilpotent=False, center_dim=0)),
        CatalogEntry("osp12_nilpotent", make_osp12_nilpotent, {}, dict(dim=2, even_dim=1, odd_dim=1, quadratic=False, solvable=True, nilpotent=True, center_dim=1)),
        CatalogEntry("cartan_W1", make_cartan_w, {"n": 1}, dict(dim=2, quadratic=False, solvable=True)),
        CatalogEntry("cartan_W2", make_cartan_w, {"n": 2}, dict(dim=8, quadratic=False, solvable=False)),
        CatalogEntry("cartan_W3", make_cartan_w, {"n": 3}, dict(dim=24, quadratic=False, solvable=False, has_scalar_product=False)),
    ]


def catalog() -> list[CatalogEntry]:
    return _entries()


def get_entry(name: str) -> CatalogEntry:
    for e in _entries():
        if e.name == name:
            return e
    raise ValueError(f"unknown catalog entry {name!r}")


def check_expected(entry: CatalogEntry, obj=None) -> Report:
    """Re-derive every declared property of a catalog entry with the validators."""
    obj = entry.build() if obj is None else obj
    quadratic = isinstance(obj, QuadraticSuperAlgebra)
    alg = obj.alg if quadratic else obj
    rep = Report(f"catalog {entry.name}")
    rep.add("superalgebra", validate_superalgebra(alg).ok)
    ex = entry.expected
    for key in ("dim", "even_dim", "odd_dim"):
        if key in ex:
            actual = {"dim": alg.dim, "even_dim": alg.space.even_dim, "odd_dim": alg.space.odd_dim}[key]
            rep.add(key, actual == ex[key], None, f"actual={actual}")
    if "quadratic" in ex:
        ok = quadratic == ex["quadratic"]
        if quadratic:
            ok = ok and validate_quadratic(alg, obj.form).ok
        rep.add("quadratic", ok)
    if "solvable" in ex or "nilpotent" in ex:
        s = derived_and_central_series(alg)
        if "solvable" in ex:
            rep.add("solvable", s.is_solvable == ex["solvable"])
        if "nilpotent" in ex:
            rep.add("nilpotent", s.is_nilpotent == ex["nilpotent"])
    if "center_dim" in ex or "center_in_odd" in ex:
        z = center(alg)
        if "center_dim" in ex:
            rep.add("center_dim", z.dim == ex["center_dim"], None, f"actual={z.dim}")
        if "center_in_odd" in ex:
            rep.add("center_in_odd", (z.dim > 0 and z.even_dim == 0) == ex["center_in_odd"])
    if "has_scalar_product" in ex:
        rep.add("has_scalar_product", bool(has_invariant_scalar_product(alg)) == ex["has_scalar_product"])
    return rep
