import pytest

from fibcat.fixtures import mutants
from fibcat.fincat import validate_category

from helpers import naive_axioms

MUTANTS = mutants()


def test_corpus_is_large_enough_and_covers_every_validator():
    assert len(MUTANTS) >= 15
    kinds = {m.validator for m in MUTANTS}
    assert {"category", "functor", "indexed", "monoidal", "tractable"} <= kinds


@pytest.mark.parametrize("mutant", MUTANTS, ids=lambda m: m.name)
def test_mutant_is_rejected_with_its_tuple_cited(mutant):
    rep = mutant.run()
    assert not rep.ok
    hits = [v for v in rep.violations if v.code == mutant.expected]
    assert hits, rep.codes()
    assert hits[0].witness


def test_category_mutant_witnesses_agree_with_the_triple_loop():
    from fibcat.fixtures import _mutate_table, chain3
    c = _mutate_table(chain3(), ("1<=2", "0<=1"), "0<=1")
    assert naive_axioms(c)
    rep = validate_category(c)
    g, f = rep.violations[0].witness[:2]
    assert ("type", g, f) in naive_axioms(c)
