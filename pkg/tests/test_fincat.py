import copy

import pytest
from hypothesis import given, settings, strategies as st

from fibcat.fincat import (FinFunctor, FinNatTrans, comma_category, constant_functor, discrete,
                           find_isomorphism, identity_functor, make_category, opposite,
                           parallel_pair, product_category, product_projections, tabulate,
                           terminal_category, validate_category, validate_functor,
                           validate_nat_trans, walking_arrow)
from fibcat.concrete import FinSetCat

from helpers import full_finset, naive_axioms, small_categories


def mutated(c, cell, value):
    d = copy.copy(c)
    d.compose_table = dict(c.compose_table)
    d.compose_table[cell] = value
    return d


def test_terminal_category_is_valid():
    assert validate_category(terminal_category()).ok


def test_parallel_pair_is_valid():
    c = parallel_pair()
    assert validate_category(c).ok
    assert len(c.objects) == 2 and len(c.morphism_ids) == 4


def test_mutated_composition_cell_is_cited():
    c = full_finset(2)
    assert not naive_axioms(c)
    # pick a composite with a different candidate of the same type
    for (g, f), h in sorted(c.compose_table.items()):
        alts = [m for m in c.hom(c.dom(h), c.cod(h)) if m != h]
        if alts:
            break
    bad = mutated(c, (g, f), alts[0])
    rep = validate_category(bad)
    assert not rep.ok
    assert naive_axioms(bad)
    assert any((g, f) == v.witness[:2] or (g in v.witness and f in v.witness)
               or alts[0] in v.witness for v in rep.violations)


@given(small_categories)
@settings(max_examples=40, deadline=None)
def test_validator_agrees_with_triple_loop(c):
    assert validate_category(c).ok == (not naive_axioms(c))


@given(small_categories, st.data())
@settings(max_examples=40, deadline=None)
def test_random_mutations_are_rejected(c, data):
    cells = sorted(k for k, v in c.compose_table.items()
                   if len(c.hom(c.dom(v), c.cod(v))) > 1)
    if not cells:
        return
    cell = data.draw(st.sampled_from(cells))
    h = c.compose_table[cell]
    other = data.draw(st.sampled_from([m for m in c.hom(c.dom(h), c.cod(h)) if m != h]))
    bad = mutated(c, cell, other)
    if naive_axioms(bad):
        assert not validate_category(bad).ok


def test_opposite_of_terminal_is_itself():
    t = terminal_category()
    assert opposite(t) == t


def test_opposite_reverses_walking_arrow():
    o = opposite(walking_arrow())
    assert o.dom("a") == "1" and o.cod("a") == "0"


@given(small_categories)
@settings(max_examples=40, deadline=None)
def test_opposite_is_an_involution(c):
    oo = opposite(opposite(c))
    assert oo == c
    assert validate_category(opposite(c)).ok
    for (g, f), h in c.compose_table.items():
        assert opposite(c).compose(f, g) == h


def test_product_with_terminal_is_isomorphic():
    d = parallel_pair()
    assert find_isomorphism(product_category(terminal_category(), d), d) is not None


def test_discrete_product_is_discrete():
    p = product_category(discrete(2), discrete(3))
    assert find_isomorphism(p, discrete(6)) is not None


def test_commutative_square_counts():
    sq = product_category(walking_arrow(), walking_arrow())
    assert validate_category(sq).ok
    # oracle: morphisms are pairs of morphisms, so 3 * 3
    assert (len(sq.objects), len(sq.morphism_ids)) == (4, 9)


@given(small_categories, small_categories)
@settings(max_examples=25, deadline=None)
def test_product_category_is_valid_and_projects(c, d):
    cd = product_category(c, d)
    assert validate_category(cd).ok
    assert len(cd.objects) == len(c.objects) * len(d.objects)
    for p in product_projections(c, d, cd):
        assert validate_functor(p).ok


def test_comma_of_terminal_identities_is_terminal():
    t = terminal_category()
    cat, _, _ = comma_category(identity_functor(t), identity_functor(t))
    assert find_isomorphism(cat, t) is not None


def test_slice_under_the_source_of_the_walking_arrow():
    c = walking_arrow()
    x = FinFunctor(terminal_category(), c, {"*": "0"}, {"id_*": "id_0"})
    cat, pa, pb = comma_category(x, identity_functor(c))
    # oracle: one object per arrow out of 0
    assert len(cat.objects) == sum(len(c.hom("0", b)) for b in c.objects) == 2
    assert validate_category(cat).ok
    assert validate_functor(pa).ok and validate_functor(pb).ok


def test_comma_over_a_discrete_category():
    d = discrete(2)
    cat, _, _ = comma_category(identity_functor(d), identity_functor(d))
    assert find_isomorphism(cat, d) is not None


@given(small_categories)
@settings(max_examples=25, deadline=None)
def test_comma_projections_are_functors(c):
    cat, pa, pb = comma_category(identity_functor(c), identity_functor(c))
    assert validate_category(cat).ok
    assert validate_functor(pa).ok and validate_functor(pb).ok


@given(small_categories)
@settings(max_examples=30, deadline=None)
def test_identity_and_constant_functors_are_valid(c):
    assert validate_functor(identity_functor(c)).ok
    assert validate_functor(constant_functor(c, c, c.objects[0])).ok


def test_mutated_functor_image_is_cited():
    c = full_finset(2)
    F = identity_functor(c).frozen()
    om, mm = F.materialize()
    # swap one endomorphism image for another on the same object
    f = "2>2:10"
    mm = dict(mm)
    mm[f] = "2>2:00"
    bad = FinFunctor(c, c, om, mm)
    rep = validate_functor(bad)
    assert not rep.ok
    assert any(f in v.witness for v in rep.violations)


def test_naturality_failure_is_cited():
    c = walking_arrow()
    F = identity_functor(c)
    good = FinNatTrans(F, F, {"0": "id_0", "1": "id_1"})
    assert validate_nat_trans(good).ok
    two = make_category(["0", "1"], [("a", "0", "1"), ("b", "0", "1")])
    G = FinFunctor(c, two, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1", "a": "a"})
    H = FinFunctor(c, two, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1", "a": "b"})
    rep = validate_nat_trans(FinNatTrans(G, H, {"0": "id_0", "1": "id_1"}))
    assert rep.codes() == ["naturality"]
    assert rep.violations[0].witness == ("a",)


def test_tabulated_finset_matches_hand_written():
    t = tabulate(FinSetCat(2))
    assert validate_category(t).ok
    assert find_isomorphism(t, full_finset(2)) is not None


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_discrete_is_valid(n):
    assert validate_category(discrete(n)).ok
