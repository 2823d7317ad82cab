import contextlib
import io
import json
import pathlib

import pytest
from hypothesis import given, settings

from fibcat.catio import (DanglingReference, category_body, diagram_from_doc, from_object, load,
                          parse, print_document, to_object)
from fibcat.cli import main
from fibcat.errors import DocSyntaxError, UnknownField
from fibcat.fincat import validate_category, validate_functor, validate_nat_trans
from fibcat.fixtures import corpus, negative_corpus
from fibcat.indexed import restrict, section_report, validate_indexed

from cli_runs import ROOT, corpus_invocations
from helpers import small_categories

FILES = sorted(ROOT.rglob("*.doc"))


def test_walking_arrow_reprints_bit_identically():
    text = (ROOT / "categories" / "walking_arrow.doc").read_text()
    assert print_document(parse(text)) == text


@pytest.mark.parametrize("path", FILES, ids=lambda p: str(p.relative_to(ROOT)))
def test_every_fixture_file_is_canonical(path):
    text = path.read_text()
    doc = parse(text)
    assert print_document(doc) == text
    assert parse(print_document(doc)) == doc


def test_shipped_files_match_the_built_in_corpus():
    docs = {**corpus(), **negative_corpus()}
    on_disk = {str(p.relative_to(ROOT)) for p in FILES}
    assert on_disk == set(docs)
    for rel, doc in docs.items():
        assert (ROOT / rel).read_text() == print_document(doc)


@pytest.mark.parametrize("path", [p for p in FILES if "negative" not in p.parts],
                         ids=lambda p: str(p.relative_to(ROOT)))
def test_every_valid_fixture_parses_and_validates(path):
    doc = load(path)
    k = doc.kind
    if k == "diagram":
        L = to_object(load(ROOT / "indexed" / (path.name.split(".")[0] + ".doc")))
        D = diagram_from_doc(doc, L)
        assert section_report(restrict(L, D.J1), D.J2).ok
        return
    obj = to_object(doc)
    check = {"category": validate_category, "functor": validate_functor,
             "nat_trans": validate_nat_trans, "indexed": validate_indexed}.get(k)
    if check is not None:
        assert check(obj).ok
    else:
        assert obj is not None


def test_negative_category_fixture_parses_but_fails_validation():
    c = to_object(load(ROOT / "negative" / "wrong_composite.doc"))
    assert not validate_category(c).ok


@given(small_categories)
@settings(max_examples=30, deadline=None)
def test_categories_survive_print_and_parse(c):
    doc = from_object(c)
    back = to_object(parse(print_document(doc)))
    assert category_body(back) == category_body(c)
    assert validate_category(back).ok == validate_category(c).ok


HEADER = "fibcat 1\nkind category\n"


def test_missing_object_is_a_dangling_reference_with_location():
    with pytest.raises(DanglingReference) as e:
        parse(HEADER + "object 0\nmorphism a 0 9\n")
    assert (e.value.line, e.value.col) == (4, 14)
    assert e.value.code == "dangling-reference"


def test_unknown_field_is_rejected_with_location():
    with pytest.raises(UnknownField) as e:
        parse(HEADER + "object 0\ncolour red\n")
    assert (e.value.line, e.value.col) == (4, 1)


def test_unclosed_block_is_a_syntax_error():
    with pytest.raises(DocSyntaxError) as e:
        parse(HEADER + "object {\n")
    assert e.value.line == 3


def test_missing_header_is_a_syntax_error():
    with pytest.raises(DocSyntaxError) as e:
        parse("kind category\n")
    assert (e.value.line, e.value.col) == (1, 1)


def test_unknown_kind_is_rejected():
    with pytest.raises(UnknownField):
        parse("fibcat 1\nkind sheaf\n")


def _run(argv, tmp_path, name="r.json"):
    out = tmp_path / name
    with contextlib.redirect_stdout(io.StringIO()) as buf:
        code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text()), buf.getvalue()


def test_validate_on_a_valid_fixture_exits_zero(tmp_path):
    code, rep, text = _run(["validate", str(ROOT / "categories" / "walking_arrow.doc")], tmp_path)
    assert code == 0 and rep["verdict"] == "valid"
    assert set(rep) == {"command", "inputs", "verdict", "witnesses", "timings"}


def test_domain_failure_exits_one(tmp_path):
    code, rep, _ = _run(["validate", str(ROOT / "negative" / "wrong_composite.doc")], tmp_path)
    assert code == 1 and rep["verdict"] == "invalid"


def test_input_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.doc"
    bad.write_text(HEADER + "object 0\nmorphism a 0 9\n")
    code, rep, text = _run(["validate", str(bad)], tmp_path)
    assert code == 2 and rep["verdict"] == "input-error"
    assert rep["witnesses"]["error"]["code"] == "dangling-reference"
    code, rep, _ = _run(["validate", str(tmp_path / "absent.doc")], tmp_path)
    assert code == 2
    with contextlib.redirect_stderr(io.StringIO()):
        assert main(["no-such-command"]) == 2


def test_colimit_with_oracle_reports_both_sides(tmp_path):
    code, rep, text = _run(["colimit", "--indexed", str(ROOT / "indexed" / "fam_arrow_wide.doc"),
                            "--diagram", str(ROOT / "diagrams" / "fam_arrow_wide.pair.doc"),
                            "--oracle"], tmp_path)
    assert code == 0
    assert "oracle" in json.dumps(rep["witnesses"])


def test_dialectica_hom_with_verification(tmp_path):
    code, rep, text = _run(["hom", "--instance", str(ROOT / "instances" / "dialpf.doc"),
                            "--lhs", "(2,2)", "--rhs", "(2,2)", "--verify"], tmp_path)
    assert code == 0
    assert "64" in text


def test_corpus_invocations_have_the_expected_exit_codes(tmp_path):
    for argv, expected in corpus_invocations():
        code, rep, _ = _run(argv, tmp_path)
        assert code != 2, argv
        if expected is not None:
            assert code == expected, argv
