import itertools

from hypothesis import given, settings, strategies as st

from fibcat.fincat import (FinFunctor, constant_functor, discrete, find_isomorphism,
                           identity_functor, make_category, parallel_pair, product_category,
                           terminal_category, validate_category, walking_arrow)
from fibcat.fixtures import chain3, fam_arrow, indiscrete2, random_indexed, twin_fixture, z2
from fibcat.indexed import (IndexedCat, constant_indexed, fam_indexed, finset_base,
                            reindex_section, restrict, section_report, sections,
                            sections_category, validate_indexed)
from fibcat.search import cones_at

from helpers import transformation_monoid


def test_strict_constant_indexed_is_valid():
    assert validate_indexed(constant_indexed(walking_arrow(), parallel_pair())).ok


def test_families_over_a_discrete_base_are_valid():
    assert validate_indexed(fam_indexed(walking_arrow(), finset_base(0))).ok
    L = IndexedCat(discrete(2), {"0": z2(), "1": chain3()},
                   {"id_0": identity_functor(z2()), "id_1": identity_functor(chain3())})
    assert validate_indexed(L).ok


def test_non_invertible_compositor_is_cited():
    M = transformation_monoid([(0, 0)], 2)   # identity and a constant map
    const = next(m for m in M.morphism_ids if m != M.identity("*"))
    good = constant_indexed(walking_arrow(), M)
    assert validate_indexed(good).ok
    bad = IndexedCat(good.base, good._fibres, good._reindex, None,
                     lambda fg: (lambda z: const if fg == ("id_0", "a") else M.identity(z)))
    rep = validate_indexed(bad)
    assert "compositor-iso" in rep.codes()
    v = next(v for v in rep.violations if v.code == "compositor-iso")
    assert v.witness == ("id_0", "a", "*")


def test_pseudo_twin_fixture_is_valid_and_not_strict():
    L2, P = twin_fixture(discrete(1))
    assert validate_indexed(L2).ok and validate_indexed(P).ok
    assert any(P.eta(a, x) != P.fibre(a).identity(x)
               for a in P.base.objects for x in P.fibre(a).objects)


@given(st.integers(0, 47))
@settings(max_examples=24, deadline=None)
def test_random_fixtures_are_coherent_and_their_sections_satisfy_xi(seed):
    L = random_indexed(seed)
    assert validate_indexed(L).ok
    for s in sections(L, bound=2000).objects[:30]:
        assert section_report(L, s).ok


def test_restrict_along_identity_is_the_same_data():
    L = fam_arrow()
    assert restrict(L, identity_functor(L.base)) == L


def test_restrict_to_one_object_is_constant():
    L = fam_arrow()
    t = terminal_category()
    F = FinFunctor(t, L.base, {"*": "1"}, {"id_*": L.base.identity("1")})
    R = restrict(L, F)
    assert validate_indexed(R).ok
    assert R.fibre("*") == L.fibre("1")
    assert all(R.re("id_*", x) == x for x in R.fibre("*").objects)


def test_restrict_along_a_composite_is_restrict_twice():
    L = fam_arrow()
    B = L.base
    w = walking_arrow()
    # G: walking arrow -> base picking 0 -> 1; F: terminal -> walking arrow at 1
    f01 = B.hom("0", "1")[0]
    G = FinFunctor(w, B, {"0": "0", "1": "1"},
                   {"id_0": B.identity("0"), "id_1": B.identity("1"), "a": f01})
    F = FinFunctor(terminal_category(), w, {"*": "0"}, {"id_*": "id_0"})
    assert restrict(restrict(L, G), F) == restrict(L, F.then(G))


def test_sections_over_a_point_are_the_fibre():
    D = parallel_pair()
    S = sections_category(constant_indexed(terminal_category(), D))
    assert validate_category(S).ok
    assert find_isomorphism(S, D) is not None


def test_sections_over_discrete_two_are_the_product():
    D0, D1 = walking_arrow(), z2()
    L = IndexedCat(discrete(2), {"0": D0, "1": D1},
                   {"id_0": identity_functor(D0), "id_1": identity_functor(D1)})
    S = sections_category(L)
    assert find_isomorphism(S, product_category(D0, D1)) is not None


def _arrow_indexed(D0, D1, F):
    w = walking_arrow()
    return IndexedCat(w, {"0": D0, "1": D1},
                      {"id_0": identity_functor(D0), "id_1": identity_functor(D1), "a": F})


def test_sections_over_the_walking_arrow_match_direct_counts():
    D0, D1 = chain3(), indiscrete2()
    F = FinFunctor(D1, D0, {"0": "1", "1": "1"}, {m: "1<=1" for m in D1.morphism_ids})
    L = _arrow_indexed(D0, D1, F)
    assert validate_indexed(L).ok
    S = sections_category(L)
    assert validate_category(S).ok
    # oracle: triples (X0, X1, ξ: X0 → F X1) and commuting pairs of components
    triples = [(x0, x1, xi) for x0 in D0.objects for x1 in D1.objects
               for xi in D0.hom(x0, F.ob(x1))]
    assert len(S.objects) == len(triples) == 4
    maps = 0
    for (x0, x1, xi), (y0, y1, yi) in itertools.product(triples, repeat=2):
        for a0 in D0.hom(x0, y0):
            for a1 in D1.hom(x1, y1):
                maps += D0.compose(F.mor(a1), xi) == D0.compose(yi, a0)
    assert len(S.morphism_ids) == maps


def test_reindexing_along_an_identity_cone_keeps_the_section():
    L = fam_arrow()
    E = parallel_pair()
    J1 = constant_functor(E, L.base, "1")
    R = restrict(L, J1)
    legs = {x: L.base.identity("1") for x in E.objects}
    for s in sections(R).objects:
        G = reindex_section(L, J1, legs, "1", s)
        assert all(G.ob(x) == s.at(x) for x in E.objects)
        assert all(G.mor(e) == s.comp(e) for e in E.morphisms())


def _fam_reindex_oracle(L, f, y):
    """Families reindex by precomposing the index function."""
    B = L.base
    fn = B.mor_label[f]
    lab = L.fibre(B.cod(f)).obj_label[y]
    return tuple(lab[i] for i in fn.img)


def test_reindexing_over_a_discrete_shape_is_pointwise():
    L = fam_arrow()
    B = L.base
    E = discrete(2)
    J1 = FinFunctor(E, B, {"0": "1", "1": "1"}, {"id_0": B.identity("1"), "id_1": B.identity("1")})
    R = restrict(L, J1)
    for legs in cones_at(J1, "1"):
        legs = dict(zip(E.objects, legs))
        for s in sections(R).objects:
            G = reindex_section(L, J1, legs, "1", s)
            for x in E.objects:
                got = L.fibre("1").obj_label[G.ob(x)]
                assert got == _fam_reindex_oracle(L, legs[x], s.at(x))


def test_reindexing_over_a_parallel_pair_matches_hand_enumeration():
    L = fam_indexed(walking_arrow(), finset_base(2))
    B = L.base
    E = parallel_pair()
    f, g = B.hom("1", "2")
    J1 = FinFunctor(E, B, {"0": "1", "1": "2"},
                    {"id_0": B.identity("1"), "id_1": B.identity("2"), "r": f, "s": g})
    R = restrict(L, J1)
    checked = 0
    for apex in B.objects:
        for legs in cones_at(J1, apex):
            legs = dict(zip(E.objects, legs))
            for s in sections(R).objects:
                G = reindex_section(L, J1, legs, apex, s)
                for x in E.objects:
                    assert L.fibre(apex).obj_label[G.ob(x)] == \
                        _fam_reindex_oracle(L, legs[x], s.at(x))
                for e in ("r", "s"):
                    # the component of a family map is reindexed index by index
                    u = L.fibre(apex).mor_label[G.mor(e)]
                    xi = L.fibre("1").mor_label[s.comp(e)]
                    img = B.mor_label[legs["0"]].img
                    assert u == tuple(xi[i] for i in img)
                    checked += 1
    assert checked > 0
