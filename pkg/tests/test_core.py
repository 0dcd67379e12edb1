from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from superquad import linalg
from superquad.catalog import make_en, make_gn, make_heisenberg3, make_cartan_w, get_entry, catalog
from superquad.core import (
    LinearMap,
    Representation,
    Subspace,
    SuperAlgebra,
    SuperSpace,
    adjoint,
    adjoint_representation,
    bracket_eval,
    center,
    derived_and_central_series,
    dual_representation,
    is_graded_ideal,
    is_superderivation,
    quotient_algebra,
    unit,
    validate_representation,
    validate_superalgebra,
)
from superquad.scalars import (
    FieldExtensionRequired,
    QuadraticScalar,
    active_extension,
    field_session,
    format_scalar,
    parse_scalar,
    quad,
    sqrt,
    squarefree_part,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


# -- scalars ---------------------------------------------------------------------


@given(rationals, rationals, rationals, rationals, st.sampled_from([-1, 2, 3, -5, 7]))
def test_quadratic_field_axioms(a, b, c, e, d):
    x, y = quad(a, b, d), quad(c, e, d)
    assert x + y == quad(a + c, b + e, d)
    assert x * y == quad(a * c + b * e * d, a * e + b * c, d)
    if x != 0:
        assert x * (1 / x) == 1
    assert (x - y) + y == x


@given(rationals, rationals, st.sampled_from([-1, 2, 3, -5, 7]))
def test_scalar_text_round_trip(a, b, d):
    x = quad(a, b, d)
    assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize("tok", ["2/4", "3/1", "-0", "1/-2", "01", "1+0*sqrt(2)", "1+1*sqrt(4)"])
def test_non_canonical_scalars_rejected(tok):
    with pytest.raises(ValueError):
        parse_scalar(tok)


def test_squarefree_part():
    assert squarefree_part(Fraction(-1, 4)) == -1
    assert squarefree_part(Fraction(8, 3)) == 6
    assert squarefree_part(12) == 3


def test_sqrt_rational_needs_no_session():
    with field_session(allow_activation=False):
        assert sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert active_extension() is None


def test_sqrt_activation_rules():
    with field_session():
        r = sqrt(-4)
        assert isinstance(r, QuadraticScalar) and r * r == -4
        assert active_extension() == -1
        assert sqrt(Fraction(-1, 9)) * 9 * sqrt(Fraction(-1, 9)) == -1
        with pytest.raises(FieldExtensionRequired):
            sqrt(2)
    with field_session(allow_activation=False):
        with pytest.raises(FieldExtensionRequired) as info:
            sqrt(-1)
        assert info.value.d == -1
    with field_session(2, allow_activation=False):
        assert sqrt(8) * sqrt(8) == 8


def test_session_must_be_squarefree():
    with pytest.raises(ValueError):
        with field_session(4):
            pass


# -- linear algebra --------------------------------------------------------------


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=60)
@given(matrices)
def test_kernel_matches_dense_oracle(A):
    n = len(A[0])
    K = linalg.kernel(A, n)
    assert all(linalg.matvec(A, k) == (0,) * len(A) for k in K)
    assert len(K) == len(oracles.nullspace(A, n))
    assert linalg.rank(A, n) + len(K) == n


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_and_inverse(A):
    assert linalg.det(A) == oracles.det(A)
    if linalg.det(A) != 0:
        assert linalg.matmul(A, linalg.inverse(A)) == linalg.identity(4)


def test_solve_reports_inconsistency():
    assert linalg.solve([(1, 1), (1, 1)], [1, 2], 2) is None
    assert linalg.solve([(1, 1), (1, -1)], [2, 0], 2) == (1, 1)


# -- algebras ----------------------------------------------------------------------


def test_abelian_bracket_is_zero():
    a = SuperAlgebra.abelian(2, 2)
    for i in range(4):
        for j in range(4):
            assert bracket_eval(a, unit(4, i), unit(4, j)) == (0,) * 4
    assert all(adjoint(a, unit(4, i)).matrix == linalg.zeros(4, 4) for i in range(4))


def test_heisenberg_bracket_and_adjoint():
    h = make_heisenberg3()
    assert bracket_eval(h, unit(3, 0), unit(3, 1)) == (0, 0, 1)
    ad = adjoint(h, unit(3, 0)).matrix
    assert ad == ((0, 0, 0), (0, 0, 0), (0, 1, 0))


def test_gn_brackets_match_matrix_supercommutators():
    for n in (1, 2, 3):
        assert oracles.gn_table_matches(make_gn(n), n)


def test_cartan_brackets_match_derivation_supercommutators():
    for n in (1, 2, 3):
        assert oracles.cartan_table_matches(make_cartan_w(n), n)


@pytest.mark.parametrize("entry", catalog(), ids=lambda e: e.name)
def test_validator_agrees_with_jacobi_oracle(entry):
    obj = entry.build()
    alg = getattr(obj, "alg", obj)
    assert validate_superalgebra(alg).ok == oracles.super_jacobi_ok(oracles.dense_table(alg), alg.space.parities)
    assert center(alg).dim == oracles.center_dim(oracles.dense_table(alg))


def test_planted_jacobi_violation_has_witness():
    # [x,x] = z and [z,y] = x with [x,y] = 0: [[x,x],y] = 2[x,[x,y]] fails
    space = SuperSpace(1, 2, ("z", "x", "y"))
    alg = SuperAlgebra.from_brackets(space, {(1, 1): {0: 1}, (0, 2): {1: 1}})
    rep = validate_superalgebra(alg)
    assert not rep.ok
    bad = next(c for c in rep.checks if not c.passed)
    assert bad.name == "super-jacobi" and bad.witness is not None
    assert set(bad.witness) <= {0, 1, 2} and len(bad.witness) == 3
    assert not oracles.super_jacobi_ok(oracles.dense_table(alg), alg.space.parities)


def test_parity_violation_detected():
    space = SuperSpace(1, 1, ("a", "x"))
    alg = SuperAlgebra.from_brackets(space, {(0, 1): {0: 1}})
    rep = validate_superalgebra(alg)
    assert not rep.ok and rep.failures()[0].name == "parity-homogeneity"


def test_gn_adjoint_traces_vanish():
    g = make_gn(2)
    for i in range(g.dim):
        M = adjoint(g, unit(g.dim, i)).matrix
        assert sum(M[k][k] for k in range(g.dim)) == 0


def test_series_flags():
    s = derived_and_central_series(SuperAlgebra.abelian(2, 1))
    assert s.is_solvable and s.is_nilpotent
    assert len(s.derived) == 1 and len(s.lower_central) == 1 and s.derived[-1].dim == 0
    assert derived_and_central_series(make_gn(2)).is_nilpotent
    assert derived_and_central_series(make_en(2).alg).is_nilpotent
    sl2 = get_entry("sl2_killing").build().alg
    s = derived_and_central_series(sl2)
    assert not s.is_solvable and not s.is_nilpotent


def test_centers():
    a = SuperAlgebra.abelian(1, 2)
    assert center(a).dim == 3
    z = center(make_gn(2))
    assert z.dim == 1 and z.even_dim == 0
    zE = center(make_en(2).alg)
    assert zE.dim > 0 and zE.even_dim == 0


def test_quotients():
    h = make_heisenberg3()
    q, P = quotient_algebra(h, Subspace.zero(h.space))
    assert q.table == h.table and P.matrix == linalg.identity(3)
    q, _ = quotient_algebra(h, center(h))
    assert q.dim == 2 and all(not q.table[i][j] for i in range(2) for j in range(2))
    E = make_en(2)
    dual = Subspace.span(E.space, [unit(E.dim, k) for k in E.blocks["dual"]])
    assert is_graded_ideal(E.alg, dual)
    q, P = quotient_algebra(E.alg, dual)
    g = make_gn(2)
    # the kept coordinates are exactly the g(2) block, in the same relative order
    order = E.blocks["g2"]
    for a in range(6):
        for b in range(6):
            img = {order.index(keep): v for keep, v in zip([k for k in range(12) if k not in dual.pivots], range(6))}
            got = {img.get(k, k): v for k, v in q.table[a][b].items()}
            assert got == g.table[a][b]


def test_superderivations():
    g = make_gn(2)
    assert all(is_superderivation(g, adjoint(g, unit(g.dim, i))) for i in range(g.dim))
    h = make_heisenberg3()
    assert not is_superderivation(h, LinearMap.identity(h.space))
    a = SuperAlgebra.abelian(2, 0)
    assert is_superderivation(a, LinearMap(a.space, a.space, ((1, 2), (3, 4)), 0))


def test_representations():
    g = make_gn(2)
    assert validate_representation(adjoint_representation(g)).ok
    triv = Representation(SuperAlgebra.abelian(1, 0), SuperSpace(1, 0), (((0,),),))
    assert dual_representation(triv).matrices == triv.matrices
    h = make_heisenberg3()
    ad = adjoint_representation(h)
    dd = dual_representation(dual_representation(ad))
    assert dd.matrices == ad.matrices
    assert validate_representation(dual_representation(ad)).ok


def test_subspace_operations():
    sp = SuperSpace(2, 2)
    U = Subspace.span(sp, [(1, 0, 0, 0), (0, 0, 1, 0)])
    V = Subspace.span(sp, [(1, 0, 1, 0), (0, 1, 0, 0)])
    assert (U & V).dim == 1 and (U + V).dim == 3
    assert U.is_graded() and not V.is_graded()
    C = U.complement_in(U + V)
    assert C.dim == 1 and (C + U) == U + V
