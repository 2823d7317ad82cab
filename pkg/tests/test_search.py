import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fibcat.concrete import FinSetCat, Fn, PowerCategory
from fibcat.errors import NotFound
from fibcat.fincat import (FinFunctor, discrete, identity_functor, make_category, parallel_pair,
                           terminal_category)
from fibcat.search import (check_bijection_natural, find_colimit, find_initial,
                           find_left_adjoint, find_limit, find_right_adjoint, find_terminal,
                           initial_under)

from helpers import functors, left_adjoint_exists, small_categories, tiny_categories


def test_terminal_category_has_initial_and_terminal():
    t = terminal_category()
    assert find_initial(t)[0] == "*"
    assert find_terminal(t)[0] == "*"


def test_discrete_two_has_no_initial():
    with pytest.raises(NotFound):
        find_initial(discrete(2))


def test_finset_skeleton_initial_and_terminal():
    C = FinSetCat(2)
    # oracle: count hom-sets directly
    init = [a for a in C.objects if all(len(list(C.hom(a, b))) == 1 for b in C.objects)]
    term = [a for a in C.objects if all(len(list(C.hom(b, a))) == 1 for b in C.objects)]
    assert (init, term) == ([0], [1])
    assert find_initial(C)[0] == 0
    assert find_terminal(C)[0] == 1


def test_empty_limit_is_terminal():
    J = FinFunctor(discrete(0), FinSetCat(4), {}, {})
    assert find_limit(J).apex == 1


def test_product_of_two_and_two():
    E = discrete(2)
    C = FinSetCat(4)
    J = FinFunctor(E, C, {"0": 2, "1": 2}, {"id_0": C.identity(2), "id_1": C.identity(2)})
    cone = find_limit(J)
    assert cone.apex == 4
    # the legs pair up to a bijection onto 2 x 2
    pairs = {(cone.legs["0"].img[k], cone.legs["1"].img[k]) for k in range(4)}
    assert pairs == set(itertools.product(range(2), repeat=2))


def test_equalizer_of_identity_and_swap_is_empty():
    C = FinSetCat(4)
    E = parallel_pair()
    swap = Fn(2, 2, (1, 0))
    J = FinFunctor(E, C, {"0": 2, "1": 2},
                   {"id_0": C.identity(2), "id_1": C.identity(2), "r": C.identity(2), "s": swap})
    # oracle: the equalizer is the set of fixed points of swap
    assert find_limit(J).apex == sum(1 for i in range(2) if swap.img[i] == i) == 0


def test_coproduct_is_sum():
    C = FinSetCat(4)
    J = FinFunctor(discrete(2), C, {"0": 1, "1": 2}, {"id_0": C.identity(1), "id_1": C.identity(2)})
    assert find_colimit(J).apex == 3


def test_identity_has_identity_adjoint():
    c = make_category(["0", "1"], [("a", "0", "1")])
    w = find_left_adjoint(identity_functor(c))
    assert all(w.left.ob(x) == x for x in c.objects)
    assert all(w.unit.at(x) == c.identity(x) for x in c.objects)
    assert w.triangle_report().ok


def test_left_adjoint_of_finset_to_point_picks_empty_set():
    C = FinSetCat(2)
    t = terminal_category()
    G = FinFunctor(C, t, lambda _: "*", lambda _: "id_*")
    w = find_left_adjoint(G)
    assert w.left.ob("*") == 0


def test_diagonal_has_disjoint_union_as_left_adjoint():
    # the bounded skeleton is not closed under sums, so check each reflection
    D = FinSetCat(4)
    CC = PowerCategory(D, 2)
    G = FinFunctor(D, CC, lambda d: (d, d), lambda f: (f, f))
    for a, b in itertools.product(range(3), repeat=2):
        r = initial_under(G, (a, b))
        assert r.obj == a + b
        # the unit is a pair of injections with disjoint images covering a + b
        u1, u2 = r.unit
        assert sorted(u1.img + u2.img) == list(range(a + b))


@given(tiny_categories, tiny_categories, st.data())
@settings(max_examples=30, deadline=None)
def test_left_adjoint_search_matches_hom_bijection_oracle(D, C, data):
    Gs = list(itertools.islice(functors(D, C), 40))
    om, mm = data.draw(st.sampled_from(Gs))
    G = FinFunctor(D, C, om, mm)
    try:
        w = find_left_adjoint(G)
        found = True
    except NotFound:
        found = False
    assert found == left_adjoint_exists(om.__getitem__, mm.__getitem__, D, C)
    if found:
        assert w.triangle_report().ok


@given(tiny_categories, tiny_categories, st.data())
@settings(max_examples=30, deadline=None)
def test_left_and_right_adjoints_correspond_under_opposite(D, C, data):
    Gs = list(itertools.islice(functors(D, C), 40))
    om, mm = data.draw(st.sampled_from(Gs))
    G = FinFunctor(D, C, om, mm)
    try:
        left = find_left_adjoint(G)
    except NotFound:
        left = None
    try:
        right = find_right_adjoint(G.op())
    except NotFound:
        right = None
    assert (left is None) == (right is None)
    if left is not None:
        assert left.left.materialize() == right.right.materialize()
        assert right.triangle_report().ok


@given(small_categories, st.data())
@settings(max_examples=30, deadline=None)
def test_limits_have_unique_mediating_morphisms(C, data):
    x = data.draw(st.sampled_from(C.objects))
    y = data.draw(st.sampled_from(C.objects))
    E = discrete(2)
    J = FinFunctor(E, C, {"0": x, "1": y}, {"id_0": C.identity(x), "id_1": C.identity(y)})
    try:
        cone = find_limit(J)
    except NotFound:
        return
    # every cone factors exactly once, counted by brute force
    for a in C.objects:
        for l0 in C.hom(a, x):
            for l1 in C.hom(a, y):
                n = sum(1 for m in C.hom(a, cone.apex)
                        if C.compose(cone.legs["0"], m) == l0 and C.compose(cone.legs["1"], m) == l1)
                assert n == 1


def test_identity_family_is_a_natural_bijection():
    rep = check_bijection_natural([0, 1], lambda i: range(3), lambda i: range(3), lambda i, x: x,
                                  actions=[(0, 1, lambda x: x, lambda x: x)])
    assert rep.ok


def test_size_mismatch_cites_the_index():
    rep = check_bijection_natural(["a", "b"], lambda i: range(2 if i == "a" else 3),
                                  lambda i: range(2), lambda i, x: x % 2)
    assert not rep.ok
    assert rep.violations[0].code == "size-mismatch"
    assert rep.violations[0].witness == ("b",)
