from itertools import combinations

import pytest
from hypothesis import given, settings

from cmtk import GF, QQ, ZZ, NotPure, OracleDisagreement, SimplicialComplex, Tri, reduced_homology
from cmtk.cm import (
    check_chain,
    classify,
    euler_condition,
    gorenstein_core,
    gorenstein_star_some_field,
    is_cm,
    is_gorenstein,
    is_gorenstein_star,
    is_gorenstein_star_v2,
    is_homotopy_cm,
    is_homotopy_gorenstein_star,
    is_shellable,
    torsion_primes,
)
from cmtk.generators import cross_polytope, cycle, rp2_6, simplex, simplex_boundary

from .conftest import complexes

FIELDS = (QQ, GF(2), GF(3), ZZ)


def reisner_oracle(cx, coeff):
    """Direct transcription: every face (including the empty one) via link()."""
    for f in cx.faces():
        lk = cx.link(f)
        h = reduced_homology(lk, coeff)
        if any(not h.vanishes(i) for i in range(-1, lk.dim)):
            return False
    return True


def two_edges():
    return SimplicialComplex([(1, 2), (3, 4)])


def test_rp2_field_dependence():
    rp = rp2_6()
    assert is_cm(rp, QQ) and not is_cm(rp, GF(2)) and not is_cm(rp, ZZ)
    assert is_cm(rp, GF(3))
    assert torsion_primes(rp) == {2}


def test_cm_examples():
    for c in FIELDS:
        assert is_cm(simplex_boundary(3), c)
        assert not is_cm(two_edges(), c)
        assert is_cm(simplex(3), c)
        assert is_cm(SimplicialComplex(), c)
    # bowtie: two triangles sharing a vertex, link of the vertex is two edges
    assert not is_cm(SimplicialComplex([(1, 2, 3), (3, 4, 5)]))
    # non-pure complexes are never CM
    assert not is_cm(SimplicialComplex([(1, 2, 3), (3, 4)]))


def test_gorenstein_star_examples():
    for n in (2, 3, 4):
        assert is_gorenstein_star(simplex_boundary(n), ZZ)
    assert is_gorenstein_star(SimplicialComplex([[1], [2]]), ZZ)
    assert not is_gorenstein_star(simplex(2), ZZ)
    assert is_gorenstein_star(SimplicialComplex(), ZZ)  # the (-1)-sphere
    assert is_gorenstein_star_v2(cycle(4), QQ)
    rp = rp2_6()
    assert rp.is_thin() and is_cm(rp, QQ) and rp.reduced_euler_characteristic() == 0
    assert not is_gorenstein_star_v2(rp, QQ) and not is_gorenstein_star(rp, QQ)
    assert not is_gorenstein_star_v2(rp, GF(2)) and not is_gorenstein_star(rp, GF(2))
    assert not is_gorenstein_star_v2(SimplicialComplex([(1, 2, 3), (3, 4)]), QQ)
    assert is_gorenstein_star(cross_polytope(3), ZZ)


def test_euler_condition():
    assert euler_condition(cycle(5))
    assert euler_condition(simplex_boundary(3))
    assert not euler_condition(rp2_6())


def test_gorenstein_core():
    cone = cycle(4).cone(0)
    core, apexes = gorenstein_core(cone)
    assert core == cycle(4) and apexes == 1
    assert is_gorenstein(cone) and not is_gorenstein_star(cone)
    core, apexes = gorenstein_core(simplex(3))
    assert core == SimplicialComplex() and apexes == 3
    assert is_gorenstein(simplex(3))
    core, apexes = gorenstein_core(simplex_boundary(3))
    assert core == simplex_boundary(3) and apexes == 0
    assert is_gorenstein(SimplicialComplex([(1, 2), (2, 3)]).cone(9))  # double cone over S0
    assert not is_gorenstein(SimplicialComplex([(1, 2), (2, 3), (3, 4)]).cone(9))


def test_homotopy_cm():
    assert is_homotopy_cm(simplex_boundary(4)) is Tri.TRUE
    assert is_homotopy_gorenstein_star(simplex_boundary(4)) is Tri.TRUE
    assert is_homotopy_cm(rp2_6()) is Tri.FALSE
    for n in range(3, 7):
        assert is_homotopy_cm(cycle(n)) is Tri.TRUE
    assert is_homotopy_cm(SimplicialComplex([(1, 2), (2, 3)])) is Tri.TRUE
    assert is_homotopy_cm(simplex(3)) is Tri.TRUE
    assert is_homotopy_gorenstein_star(simplex(3)) is Tri.FALSE


def test_homotopy_cm_unknown_under_tiny_budget():
    assert is_homotopy_cm(simplex_boundary(4), max_passes=0) is Tri.UNKNOWN


def test_tri_logic():
    assert (Tri.TRUE & Tri.UNKNOWN) is Tri.UNKNOWN
    assert (Tri.UNKNOWN & Tri.FALSE) is Tri.FALSE
    with pytest.raises(TypeError):
        bool(Tri.TRUE)


def test_shellability():
    res = is_shellable(simplex_boundary(3))
    assert res.status is Tri.TRUE and len(res.order) == 4
    assert is_shellable(two_edges()).status is Tri.FALSE
    # exhaustive search; a shellable complex would be CM over F_2
    assert is_shellable(rp2_6()).status is Tri.FALSE
    assert is_shellable(cross_polytope(3)).status is Tri.TRUE
    with pytest.raises(NotPure):
        is_shellable(SimplicialComplex([(1, 2, 3), (3, 4)]))
    assert is_shellable(rp2_6(), budget=3).status is Tri.UNKNOWN


def shelling_is_valid(cx, order):
    """Each facet meets the union of earlier ones in a pure codim-1 subcomplex."""
    placed = []
    for f in order:
        if placed:
            meets = [f & g for g in placed]
            ridges = [m for m in meets if len(m) == len(f) - 1]
            if not ridges or any(not any(m <= r for r in ridges) for m in meets):
                return False
        placed.append(f)
    return set(order) == cx.facets


@settings(max_examples=150, deadline=None)
@given(complexes(max_vertices=6))
def test_shelling_witness_and_implication(cx):
    if not cx.is_pure():
        return
    res = is_shellable(cx)
    assert res.status.definite
    if res.status is Tri.TRUE:
        assert shelling_is_valid(cx, res.order)
        assert all(is_cm(cx, c) for c in FIELDS)


def test_classify_examples():
    rep = classify(simplex_boundary(3), (QQ, GF(2)))
    assert all(rep.hierarchy[k] is Tri.TRUE for k in "acefgh")
    assert rep.hierarchy["b"] is Tri.UNKNOWN and rep.hierarchy["d"] is Tri.UNKNOWN
    rep = classify(rp2_6(), (QQ, GF(2), ZZ))
    assert rep.cm_over == {QQ: True, GF(2): False, ZZ: False}
    assert not any(rep.gorenstein_star_over.values())
    assert [rep.hierarchy[k] for k in "acefgh"] == [Tri.FALSE] * 5 + [Tri.TRUE]
    rep = classify(simplex(2))
    assert not rep.thin and rep.cm_over[QQ]
    assert not any(rep.gorenstein_star_over.values())
    assert rep.hierarchy["h"] is Tri.FALSE
    assert rep.to_json()["cm_over"] == {"q": True, "f2": True, "z": True}


def test_check_chain_trap():
    h = {k: Tri.TRUE for k in "abcdefgh"}
    h["g"] = Tri.FALSE
    with pytest.raises(OracleDisagreement):
        check_chain(h)
    h["g"] = Tri.UNKNOWN
    check_chain(h)


def test_gorenstein_star_some_field():
    assert gorenstein_star_some_field(simplex_boundary(2))
    assert not gorenstein_star_some_field(rp2_6())


@settings(max_examples=300, deadline=None)
@given(complexes(max_vertices=6))
def test_reisner_oracle_and_route_agreement(cx):
    for c in FIELDS:
        cm = is_cm(cx, c)
        assert cm == reisner_oracle(cx, c)
        gs = is_gorenstein_star(cx, c)
        assert gs == is_gorenstein_star_v2(cx, c)
        if gs:
            assert cm and cx.is_pseudomanifold()
        if cm and cx.is_pure():
            assert cx.is_dually_connected()
    if not torsion_primes(cx) & {2, 3}:
        assert is_cm(cx, QQ) == is_cm(cx, GF(2)) == is_cm(cx, GF(3))


@settings(max_examples=200, deadline=None)
@given(complexes(max_vertices=6))
def test_classify_never_traps(cx):
    rep = classify(cx, shelling_budget=10_000)
    chain = [rep.hierarchy[k] for k in "acefgh"]
    for i, a in enumerate(chain):
        if a is Tri.TRUE:
            assert Tri.FALSE not in chain[i + 1:]
    assert rep.hierarchy["h"] is Tri.of(rep.thin)


def test_all_two_dim_complexes_on_five_vertices_agree():
    tris = list(combinations(range(5), 3))
    # every family of up to three triangles
    for k in (1, 2, 3):
        for fam in combinations(tris, k):
            cx = SimplicialComplex(fam)
            for c in FIELDS:
                assert is_gorenstein_star(cx, c) == is_gorenstein_star_v2(cx, c)


def test_route_agreement_large_sample():
    from cmtk.generators import corpus

    sample = corpus(seed=7, size=10_000, max_vertices=7)
    for cx in sample:
        for c in FIELDS:
            assert is_gorenstein_star(cx, c) == is_gorenstein_star_v2(cx, c), (cx, c)
