# The MIT License (MIT)
#
# Copyright (c) 2024- unlevents contributors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import datetime
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unlevents.core.io import (
    Concept,
    Corpus,
    MalformedConcept,
    MalformedCorpus,
    MalformedDocument,
    extract_date,
    normalize_document,
    parse_concept,
    parse_document,
    parse_relation,
    serialize_concept,
    serialize_document,
)


def test_parse_concept():
    concept = parse_concept("Go(icl>action).@past.@entry")
    assert concept.headword == "go"
    assert concept.constraints == (("icl", "action"),)
    assert concept.attributes == ("past", "entry")
    assert concept.key == ("go", ("icl", "action"))
    assert concept.label == "go|icl>action"
    assert concept.is_a("action")


def test_parse_concept_keeps_constraint_order():
    concept = parse_concept("bank(icl>place, equ>shore)")
    assert concept.constraints == (("icl", "place"), ("equ", "shore"))
    assert concept.constraint == ("icl", "place")
    assert str(concept) == "bank(icl>place, equ>shore)"


def test_parse_bare_concept():
    concept = parse_concept("madurai")
    assert concept == Concept("madurai")
    assert concept.constraint is None
    assert concept.label == "madurai"


def test_node_drops_attributes_and_extra_constraints():
    concept = parse_concept("go(icl>action, agt>person).@past")
    assert concept.node == Concept("go", (("icl", "action"),))
    assert concept.node.key == concept.key


@pytest.mark.parametrize(
    "token",
    ["go(icl>action", "go icl>action)", "(icl>action)", ".@past", "", "go(icl)", "go()", "go(>action)"],
)
def test_malformed_concept(token):
    with pytest.raises(MalformedConcept):
        parse_concept(token)


@given(st.text())
def test_parse_concept_only_raises_malformed_concept(token):
    try:
        concept = parse_concept(token)
    except MalformedConcept:
        return
    assert concept.headword
    assert not re.search(r"[\s(),]", concept.headword)


headwords = st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)
constraints = st.tuples(
    st.from_regex(r"[a-z]{2,4}", fullmatch=True),
    st.from_regex(r"[a-z]{1,8}", fullmatch=True),
)
concepts = st.builds(
    Concept,
    headword=headwords,
    constraints=st.lists(constraints, max_size=3).map(tuple),
    attributes=st.lists(st.from_regex(r"[a-z]{1,6}", fullmatch=True), max_size=3).map(tuple),
)


@given(concepts)
def test_concept_round_trip(concept):
    assert parse_concept(serialize_concept(concept)) == concept


def test_parse_relation():
    relation = parse_relation("agt(go(icl>action, agt>person).@past, student(icl>person))")
    assert relation.label == "agt"
    assert relation.source.headword == "go"
    assert relation.source.constraints == (("icl", "action"), ("agt", "person"))
    assert relation.target == Concept("student", (("icl", "person"),))


@pytest.mark.parametrize(
    "line",
    ["agt(go(icl>action))", "agt(a, b, c)", "agent(a, b)", "a(b, c)", "agt(go(icl>action), )"],
)
def test_malformed_relation(line):
    with pytest.raises(MalformedConcept):
        parse_relation(line)


FIG2_NAMES = [
    ("ta_bbc_agricrisis_02_01_2011.utf8", datetime.date(2011, 1, 2)),
    ("ta_bbc_armydeserters_14_12_2010.utf8", datetime.date(2010, 12, 14)),
    ("ta_bbc_alagiri_19_03_2011.utf8", datetime.date(2011, 3, 19)),
    ("ta_bbc_angayarkanni_22_01_2011.utf8", datetime.date(2011, 1, 22)),
    ("ta_bbc_amitabhprotest_26_04_2010.utf8", datetime.date(2010, 4, 26)),
    ("ta_bbc_anglofrenchpact_02_11_2010.utf8", datetime.date(2010, 11, 2)),
    ("ta_bbc_anya_25_09_2010.utf8", datetime.date(2010, 9, 25)),
    ("ta_bbc_animalsacrifice_22_08_2010.utf8", datetime.date(2010, 8, 22)),
    ("ta_malar4", None),
    ("ta_bbc_leapday_29_02_2011.utf8", None),
    ("ta_old_01_01_2009_new_05_06_2010.utf8", datetime.date(2010, 6, 5)),
    ("ta_valid_01_01_2009_invalid_31_04_2010", None),
    ("ta_long_123_01_2011", None),
]


@pytest.mark.parametrize("doc_id, date", FIG2_NAMES)
def test_extract_date(doc_id, date):
    assert extract_date(doc_id) == date


def split_date(doc_id: str):
    """Reference parser: last run of 2-, 2- and 4-digit tokens"""
    tokens = re.split(r"[_.]", doc_id)
    found = None
    for i in range(len(tokens) - 2):
        day, month, year = tokens[i : i + 3]
        if (len(day), len(month), len(year)) == (2, 2, 4) and (day + month + year).isdigit():
            found = day, month, year
    if found is None:
        return None
    day, month, year = found
    try:
        return datetime.date(int(year), int(month), int(day))
    except ValueError:
        return None


name_tokens = st.one_of(
    st.from_regex(r"[a-z]{1,8}", fullmatch=True),
    st.from_regex(r"[0-9]{1,5}", fullmatch=True),
    st.builds(
        "{:02d}_{:02d}_{:04d}".format,
        st.integers(0, 35),
        st.integers(0, 14),
        st.integers(1, 2100),
    ),
)


@given(st.lists(name_tokens, min_size=1, max_size=8), st.booleans())
def test_extract_date_agrees_with_reference_parser(tokens, extension):
    doc_id = "_".join(tokens) + (".utf8" if extension else "")
    assert extract_date(doc_id) == split_date(doc_id)


def test_parse_document(corpus_dir):
    text = (corpus_dir / "ta_malar1").read_text(encoding="utf-8")
    document = parse_document(text, doc_id="ta_malar1")
    assert document.doc_id == "ta_malar1"
    assert document.date == datetime.date(2010, 7, 17)
    assert document.explicit_date
    assert [s.sentence_id for s in document.sentences] == ["s1", "s2", "s3", "s4"]
    assert len(document.sentences[2].relations) == 6
    assert document.title_concepts == []


def test_parse_document_date_from_identifier(bbc_dir):
    name = "ta_bbc_agricrisis_02_01_2011.utf8"
    document = parse_document((bbc_dir / name).read_text(encoding="utf-8"))
    assert document.date == datetime.date(2011, 1, 2)
    assert not document.explicit_date
    assert [c.headword for c in document.title_concepts] == ["crisis", "agriculture"]


def test_parse_document_title_with_spaces_inside_constraints():
    document = parse_document(
        "#DOC d\n#TITLE festival(icl>event, mod>big) temple(icl>place)\n#END\n"
    )
    assert [str(c) for c in document.title_concepts] == [
        "festival(icl>event, mod>big)",
        "temple(icl>place)",
    ]


def test_parse_document_explicitly_empty_sentence():
    document = parse_document("#DOC d\n#SENT s1\n#SENT s2\nagt(a, b)\n#END\n")
    assert [len(s.relations) for s in document.sentences] == [0, 1]


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("#SENT s1\n#END\n", 1),
        ("#DOC d\nagt(a, b)\n#END\n", 2),
        ("#DOC d\n#SENT s1\n#FOO bar\n#END\n", 3),
        ("#DOC d\n#SENT s1\nagt(go(icl>action, b)\n#END\n", 3),
        ("#DOC d\n#SENT s1\n#SENT s1\n#END\n", 3),
        ("#DOC d\n#DATE 31_02_2011\n#END\n", 2),
        ("#DOC d\n#SENT s1\nagt(a, b)\n", 3),
        ("#DOC d\n; comment\n\n#SENT s1\nthis is not a relation\n#END\n", 5),
        ("#DOC d\n#END\nagt(a, b)\n", 3),
    ],
)
def test_malformed_document(text, line):
    with pytest.raises(MalformedDocument) as excinfo:
        parse_document(text)
    assert excinfo.value.line == line


def test_document_identifier_mismatch():
    with pytest.raises(MalformedDocument) as excinfo:
        parse_document("#DOC a\n#END\n", doc_id="b")
    assert excinfo.value.line == 1


def test_document_round_trip(corpus_dir, bbc_dir):
    for path in sorted(corpus_dir.iterdir()) + sorted(bbc_dir.iterdir()):
        text = path.read_text(encoding="utf-8")
        assert serialize_document(parse_document(text)) == normalize_document(text)


def test_normalize_document():
    text = "  #DOC d\n\n; note\n#SENT s1\nagt(a,b)\n  and(b ,  c)  \n#END"
    assert normalize_document(text) == "#DOC d\n#SENT s1\nagt(a, b)\nand(b, c)\n#END\n"


def test_corpus(corpus_dir):
    documents = Corpus()(corpus_dir)
    assert len(documents) == 15
    assert [d.doc_id for d in documents] == sorted(d.doc_id for d in documents)


def test_corpus_caches_documents(corpus_dir):
    file = {"corpus": str(corpus_dir)}
    documents = Corpus()(file)
    assert file["documents"] == documents
    assert file["uri"] == "corpus"


def test_corpus_skips_hidden_files(write_document, tmp_path):
    write_document("a", "#SENT s1\nagt(a, b)")
    (tmp_path / "corpus" / ".hidden").write_text("not a document")
    assert [d.doc_id for d in Corpus()(tmp_path / "corpus")] == ["a"]


def test_malformed_corpus_lists_every_error(write_document, tmp_path):
    write_document("a", "#SENT s1\nagt(a, b)")
    write_document("b", "agt(a, b)")
    write_document("c", "#BAD")
    with pytest.raises(MalformedCorpus) as excinfo:
        Corpus()(tmp_path / "corpus")
    assert list(excinfo.value.errors) == ["b", "c"]
    assert all(isinstance(e, MalformedDocument) for e in excinfo.value.errors.values())


def test_missing_corpus(tmp_path):
    with pytest.raises(ValueError):
        Corpus()(tmp_path / "missing")
