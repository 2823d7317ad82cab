import itertools
from dataclasses import replace

import pytest

from fibcat.concrete import F2LinCat, FinSetCat, PSetCat
from fibcat.dialectica import (FinSetOp, build_dial_pf, build_fam_instance, dial_obj,
                               dial_pf_exponential, dial_pf_hom_count, dialectica_hom,
                               fam_exponential, fam_objects, fibredness_check, verify_closure)
from fibcat.errors import NotTractable
from fibcat.fincat import validate_category
from fibcat.indexed import validate_indexed
from fibcat.monoidal import chain, m3


def maps(a, b):
    return list(itertools.product(range(b), repeat=a))


def dial_hom_brute(U, X, V, Y):
    """Pairs (f: U -> V, F: U×Y -> X), listed one by one."""
    return [(f, F) for f in maps(U, V) for F in maps(U * Y, X)]


@pytest.fixture(scope="module")
def dial():
    return build_dial_pf(2)


def test_dial_hom_count_for_one_two_and_two_one(dial):
    assert len(dial_hom_brute(1, 2, 2, 1)) == 4
    assert len(dial.total.hom(dial_obj(1, 2), dial_obj(2, 1))) == 4


def test_dial_hom_counts_match_enumeration(dial):
    for U, X, V, Y in itertools.product(range(3), repeat=4):
        want = len(dial_hom_brute(U, X, V, Y))
        assert dial.total.hom_size(dial_obj(U, X), dial_obj(V, Y)) == want
        assert dial_pf_hom_count(U, X, V, Y) == want


def test_dial_identity_composes_neutrally(dial):
    T = dial.total
    a, b = dial_obj(1, 2), dial_obj(2, 1)
    for m in T.hom(a, b):
        assert T.compose(m, T.identity(a)) == m == T.compose(T.identity(b), m)


def test_dial_internal_hom_has_the_expected_shape(dial):
    for U, X, V, Y in itertools.product(range(3), repeat=4):
        E, fibre = dialectica_hom(dial, dial_obj(U, X), dial_obj(V, Y)).obj
        n, second = dial_pf_exponential(U, X, V, Y)
        assert E == n == len(maps(U, V)) * len(maps(U * Y, X))
        assert fibre == (U * Y,) * E == (second,) * E


def test_unit_hom_unit_is_the_unit(dial):
    assert dialectica_hom(dial, dial_obj(1, 1), dial_obj(1, 1)).obj == dial_obj(1, 1)


def test_sixty_four_on_both_sides(dial):
    a, b = dial_obj(2, 2), dial_obj(2, 2)
    asm = dialectica_hom(dial, a, b)
    E, fibre = asm.obj
    assert (E, set(fibre)) == (64, {4})
    assert asm.first_component == asm.remark_form == 64
    T = dial.total
    assert len(T.hom(dial_obj(1, 1), asm.obj)) == 64 == len(T.hom(a, b))


def test_extensive_instance_fibres_are_powers_of_the_universe():
    inst = build_fam_instance(FinSetCat(2), "extensive")
    L = inst.im.L
    for s in range(3):
        assert len(L.fibre(s).objects) == len(inst.universe) ** s


def test_extensive_family_indexed_over_a_small_base_is_valid():
    inst = build_fam_instance(FinSetCat(1), "extensive", bound=1)
    assert validate_indexed(inst.im.L).ok


def test_biproduct_exponential_indexes_over_linear_maps():
    inst = build_fam_instance(F2LinCat(1), "biproduct")
    X = Y = (1, (1,))
    E, fibre = fam_exponential(inst, X, Y)
    assert E == len(inst.D.hom(1, 1)) == 2
    assert fibre == (1, 1)
    got = dialectica_hom(inst, X, Y).obj
    assert (got[0], sorted(got[1])) == (E, sorted(fibre))


def test_extensive_exponential_indexes_over_maps_into_the_sum_with_a_point():
    inst = build_fam_instance(FinSetCat(2), "extensive")
    X = Y = (1, (1,))
    E, fibre = fam_exponential(inst, X, Y)
    # Set(1, 1 ⊔ 1): one map hits the summand, the other the extra point
    assert E == len(maps(1, 2)) == 2
    assert sorted(fibre) == [0, 1]
    assert dialectica_hom(inst, X, Y).obj[0] == 2


@pytest.mark.parametrize("flavor, D", [("extensive", FinSetCat(2)), ("pset", PSetCat(2)),
                                       ("biproduct", F2LinCat(1)), ("closed", chain(2))])
def test_closed_formula_agrees_with_the_assembly(flavor, D):
    inst = build_fam_instance(D, flavor)
    objs = fam_objects(inst, 2)
    for X, Y in itertools.product(objs, repeat=2):
        a, b = fam_exponential(inst, X, Y), dialectica_hom(inst, X, Y)
        assert a[0] == b.obj[0] and sorted(a[1]) == sorted(b.obj[1])
        assert b.first_component == b.remark_form


def test_closed_flavour_is_fibred_with_function_index():
    inst = build_fam_instance(chain(2), "closed")
    assert fibredness_check(inst).ok
    for (I, xs), (J, ys) in itertools.product(fam_objects(inst, 2), repeat=2):
        assert dialectica_hom(inst, (I, xs), (J, ys)).obj[0] == J ** I


def test_biproduct_and_extensive_flavours_are_not_fibred():
    b = build_fam_instance(F2LinCat(1), "biproduct")
    e = build_fam_instance(FinSetCat(2), "extensive")
    assert "not-fibred" in fibredness_check(b).codes()
    assert "not-fibred" in fibredness_check(e).codes()
    # the first component outgrows the function set 1 ⇒ 1
    assert dialectica_hom(b, (1, (1,)), (1, (1,))).obj[0] > 1
    assert dialectica_hom(e, (1, (1,)), (1, (1,))).obj[0] > 1


def test_non_distributive_lattice_is_refused():
    with pytest.raises(NotTractable):
        build_fam_instance(m3(), "closed")


def test_closure_holds_on_small_dial_triples(dial):
    objs = [dial_obj(U, X) for U in range(2) for X in range(3)] + [(2, (1, 2))]
    for X, W, Y in itertools.product(objs, repeat=3):
        r = verify_closure(dial, X, W, Y)
        assert r.ok and r.lhs == r.rhs


def test_closure_holds_for_biproducts_of_small_dimension():
    inst = build_fam_instance(F2LinCat(1), "biproduct")
    objs = fam_objects(inst, 2)
    for X, W, Y in itertools.product(objs, repeat=3):
        assert verify_closure(inst, X, W, Y).ok


def test_closure_naturality_checked_directly_along_source_maps(dial):
    X, W, Y = dial_obj(1, 2), dial_obj(1, 1), dial_obj(1, 2)
    sources = [dial_obj(U, V) for U in range(2) for V in range(3)]
    r = verify_closure(dial, X, W, Y, sources=sources, direct_budget=10 ** 5)
    assert r.ok and r.report.checked > r.lhs


def test_mutated_complement_breaks_the_bijection():
    bad = build_fam_instance(FinSetOp(2), "dial", check=False)
    d = bad.data
    bad.data = replace(d, dbar=lambda A, B, f: A + 1 if (A, B) == (1, 1) else d.dbar(A, B, f))
    X = Y = dial_obj(1, 1)
    r = verify_closure(bad, X, dial_obj(1, 1), Y)
    assert not r.ok
    assert r.report.violations[0].witness == (X, dial_obj(1, 1), Y)


def test_total_category_of_a_small_dial_fixture_is_a_category():
    inst = build_dial_pf(1)
    from fibcat.groth import grothendieck
    G = grothendieck(inst.im.L)
    assert validate_category(G.total).ok
