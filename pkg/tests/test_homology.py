from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cmtk import GF, QQ, ZZ, CmtkError, Coeff, IntegerMatrix, PiOne, SimplicialComplex, reduced_homology, smith_normal_form
from cmtk.generators import cross_polytope, cycle, rp2_6, simplex, simplex_boundary
from cmtk.homology import boundary_matrices, fundamental_group_status, matrix_rank

from .conftest import complexes


def det(rows):
    """Exact determinant by Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return int(out)


def minor_gcds(rows):
    """g_k = gcd of all k x k minors, for k = 1.. while nonzero."""
    m, n = len(rows), len(rows[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def test_coeff_parse():
    assert Coeff.parse("z") == ZZ
    assert Coeff.parse("Q") == QQ
    assert Coeff.parse("fp:3") == GF(3)
    assert Coeff.parse("f2") == GF(2)
    for bad in ("fp:4", "f1", "x", "fp:"):
        with pytest.raises(CmtkError):
            Coeff.parse(bad)


def test_snf_examples():
    assert smith_normal_form(IntegerMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).invariant_factors == (1, 1, 1)
    assert smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 4]])).invariant_factors == (2, 4)
    snf = smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 3]]))
    assert snf.invariant_factors == (1, 6) and snf.rank == 2
    assert minor_gcds([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form(IntegerMatrix(3, 2)).rank == 0


small_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_against_minors(rows):
    snf = smith_normal_form(IntegerMatrix.from_dense(rows))
    d = snf.invariant_factors
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert snf.rank == sympy.Matrix(rows).rank()
    prods = []
    acc = 1
    for x in d:
        acc *= x
        prods.append(acc)
    assert prods == minor_gcds(rows)


@settings(max_examples=100, deadline=None)
@given(small_matrices, st.sampled_from([2, 3, 5]))
def test_ranks_against_sympy(rows, p):
    m = IntegerMatrix.from_dense(rows)
    assert matrix_rank(m, QQ) == sympy.Matrix(rows).rank()
    # rank over F_p: reduce a sympy matrix modulo p via its SNF
    snf = smith_normal_form(m)
    assert matrix_rank(m, GF(p)) == sum(1 for x in snf.invariant_factors if x % p)


def test_boundary_sign_convention():
    (aug, d1) = boundary_matrices(SimplicialComplex([(1, 2)]))
    assert aug.to_dense() == [[1, 1]]
    assert d1.to_dense() == [[-1], [1]]
    d = boundary_matrices(simplex_boundary(2))
    assert matrix_rank(d[1]) == 2 and (d[1].rows, d[1].cols) == (3, 3)
    assert boundary_matrices(SimplicialComplex()) == []


@settings(max_examples=100, deadline=None)
@given(complexes(max_vertices=7))
def test_boundary_squares_to_zero(cx):
    mats = boundary_matrices(cx)
    for a, b in zip(mats, mats[1:]):
        assert (a @ b).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_homology(n):
    h = reduced_homology(simplex_boundary(n + 1), ZZ)
    for i in h.dims:
        assert (h.rank(i), h.torsion(i)) == ((1, ()) if i == n else (0, ()))


def test_empty_complex_homology():
    h = reduced_homology(SimplicialComplex(), ZZ)
    assert h.groups == {-1: (1, ())}


def test_rp2_homology():
    h = reduced_homology(rp2_6(), ZZ)
    assert h.groups == {-1: (0, ()), 0: (0, ()), 1: (0, (2,)), 2: (0, ())}
    f2 = reduced_homology(rp2_6(), GF(2))
    assert [f2.betti(i) for i in (0, 1, 2)] == [0, 1, 1]
    q = reduced_homology(rp2_6(), QQ)
    assert q.is_acyclic()


def test_cone_is_acyclic():
    assert reduced_homology(simplex_boundary(2).cone(0), ZZ).is_acyclic()


@settings(max_examples=150, deadline=None)
@given(complexes(max_vertices=6))
def test_euler_and_universal_coefficients(cx):
    hz = reduced_homology(cx, ZZ)
    assert sum((-1) ** (i + 2) * hz.rank(i) for i in hz.dims) == cx.reduced_euler_characteristic()
    assert all(reduced_homology(cx, QQ).rank(i) == hz.rank(i) for i in hz.dims)
    for p in (2, 3, 5):
        hp = reduced_homology(cx, GF(p))
        for i in hz.dims:
            expect = hz.rank(i) + sum(t % p == 0 for t in hz.torsion(i)) + sum(t % p == 0 for t in hz.torsion(i - 1))
            assert hp.betti(i) == expect


def test_pi_one():
    assert fundamental_group_status(simplex_boundary(3)) is PiOne.TRIVIAL
    assert fundamental_group_status(simplex_boundary(2)) is PiOne.NONTRIVIAL
    assert fundamental_group_status(rp2_6()) is PiOne.NONTRIVIAL
    assert fundamental_group_status(cross_polytope(4)) is PiOne.TRIVIAL
    assert fundamental_group_status(simplex(4)) is PiOne.TRIVIAL
    assert fundamental_group_status(simplex(1)) is PiOne.TRIVIAL
    with pytest.raises(CmtkError):
        fundamental_group_status(SimplicialComplex([[1], [2]]))
    with pytest.raises(CmtkError):
        fundamental_group_status(SimplicialComplex())


def test_pi_one_budget_gives_unknown():
    # with no Tietze passes nothing can be eliminated
    assert fundamental_group_status(simplex_boundary(3), max_passes=0) is PiOne.UNKNOWN


@settings(max_examples=150, deadline=None)
@given(complexes(max_vertices=6))
def test_pi_one_sound(cx):
    if not cx.is_connected():
        return
    status = fundamental_group_status(cx)
    h1 = reduced_homology(cx, ZZ)
    if status is PiOne.TRIVIAL:
        assert h1.vanishes(1)
    if status is PiOne.NONTRIVIAL:
        assert not h1.vanishes(1)


def test_pi_one_of_cycles():
    for n in range(3, 7):
        assert fundamental_group_status(cycle(n)) is PiOne.NONTRIVIAL
