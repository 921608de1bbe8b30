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

import itertools
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unlevents.core.io import Concept
from unlevents.pipelines.clustering import (
    EventClustering,
    cluster_segments,
    cluster_to_dict,
    cohesion,
    emit_match_log,
    load_clusters,
    save_clusters,
    scored_clustering,
    segment_similarity,
)
from unlevents.pipelines.segmentation import Segment, build_segments

HEAD_TYPES = (None, "action", "event")

LINE_REGEX = re.compile(r"^(\S+) (?:Macths|Matches) doc1 (\S+) doc2 ?(\S+)$")


def concept(headword, value=None):
    return Concept(headword, () if value is None else (("icl", value),))


def make_segment(
    doc_id,
    head="event",
    places=(),
    persons=(),
    duration=False,
    headword="strike",
    index=0,
):
    return Segment(
        doc_id=doc_id,
        index=index,
        sentence_ids=["s1"],
        head=concept(headword, head),
        places=[concept(p, "place") for p in places],
        persons=[concept(p, "person") for p in persons],
        has_duration=duration,
    )


def segments_of(documents):
    return [s for document in documents for s in build_segments(document)]


def parse_log(text):
    rows = set()
    for line in text.splitlines():
        head, doc_a, doc_b = LINE_REGEX.match(line).groups()
        rows.add((head, frozenset((doc_a, doc_b))))
    return rows


FLAGS = list(itertools.product(HEAD_TYPES, *[(False, True)] * 3))


@pytest.mark.parametrize("head,place,person,duration", FLAGS)
def test_segment_similarity_enumeration(head, place, person, duration):
    kwargs = dict(
        head=head,
        places=["madurai"] if place else [],
        persons=["student"] if person else [],
        duration=duration,
    )
    a, b = make_segment("a", **kwargs), make_segment("b", **kwargs)

    condition = {None: 0, "action": 4, "event": 5}[head]
    feature = 2 * place + 2 * person + duration if condition else 0
    assert segment_similarity(a, b).total == condition + feature
    assert segment_similarity(a, b).conjunction == 0


def test_clustering_admits_exactly_three_combinations():
    admitted = set()
    for head, place, person, duration in FLAGS:
        kwargs = dict(
            head=head,
            places=["madurai"] if place else [],
            persons=["student"] if person else [],
            duration=duration,
        )
        clusters = cluster_segments(
            [make_segment("a", **kwargs), make_segment("b", **kwargs)]
        )
        if clusters:
            admitted.add((head, place, person, duration))

    assert admitted == {
        ("event", True, True, False),
        ("event", True, True, True),
        ("action", True, True, True),
    }


def test_full_match_scores_one():
    a = make_segment("a", places=["madurai"], persons=["student"], duration=True)
    b = make_segment("b", places=["madurai"], persons=["student"], duration=True)
    assert segment_similarity(a, b).value == 1.0


def test_heads_must_be_identical():
    a = make_segment("a", places=["madurai"], persons=["student"], duration=True)
    b = make_segment(
        "b", places=["madurai"], persons=["student"], duration=True, headword="rally"
    )
    assert segment_similarity(a, b).total == 0
    assert cluster_segments([a, b]) == []


def test_transitive_closure():
    a = make_segment("a", places=["p1"], persons=["q1"])
    b = make_segment("b", places=["p1", "p2"], persons=["q1", "q2"])
    c = make_segment("c", places=["p2"], persons=["q2"])
    assert not segment_similarity(a, c).exceeds(0.8)

    (cluster,) = cluster_segments([c, a, b])
    assert cluster.members == [("a", 0), ("b", 0), ("c", 0)]
    assert [(m.doc_a, m.doc_b) for m in cluster.matches] == [("a", "b"), ("b", "c")]
    assert cluster.head == concept("strike", "event")


def test_no_segment_no_cluster():
    assert cluster_segments([]) == []
    assert emit_match_log([]) == ""


def test_segments_without_head_are_ignored():
    segment = make_segment("a")
    segment.head = None
    assert cluster_segments([segment], keep_singletons=True) == []


def test_same_document_segments_can_match():
    a = make_segment("a", places=["madurai"], persons=["student"], index=0)
    b = make_segment("a", places=["madurai"], persons=["student"], index=1)
    (cluster,) = cluster_segments([a, b])
    assert cluster.members == [("a", 0), ("a", 1)]


def test_symmetric_pair_logged_once():
    a = make_segment("a", places=["madurai"], persons=["student"])
    b = make_segment("b", places=["madurai"], persons=["student"])
    assert emit_match_log(cluster_segments([b, a])) == (
        "strike(icl>event) Matches doc1 a doc2 b\n"
    )


def test_bbc_match_log(bbc_documents):
    clusters = cluster_segments(segments_of(bbc_documents))
    assert emit_match_log(clusters).splitlines() == [
        "conduct(icl>action) Matches doc1 ta_bbc_amitabhprotest_26_04_2010.utf8 doc2 ta_bbc_animalsacrifice_22_08_2010.utf8",
        "do(icl>action) Matches doc1 ta_bbc_agricrisis_02_01_2011.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8",
        "go(icl>action) Matches doc1 ta_bbc_alagiri_19_03_2011.utf8 doc2 ta_bbc_angayarkanni_22_01_2011.utf8",
        "go(icl>action) Matches doc1 ta_bbc_alagiri_19_03_2011.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8",
        "go(icl>action) Matches doc1 ta_bbc_angayarkanni_22_01_2011.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8",
        "wait(icl>action) Matches doc1 ta_bbc_agricrisis_02_01_2011.utf8 doc2 ta_bbc_anglofrenchpact_02_11_2010.utf8",
        "wait(icl>action) Matches doc1 ta_bbc_agricrisis_02_01_2011.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8",
        "wait(icl>action) Matches doc1 ta_bbc_anglofrenchpact_02_11_2010.utf8 doc2 ta_bbc_anya_25_09_2010.utf8",
        "wait(icl>action) Matches doc1 ta_bbc_anglofrenchpact_02_11_2010.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8",
    ]


def test_bbc_verbatim_rows(bbc_documents, data_dir):
    clusters = cluster_segments(segments_of(bbc_documents))
    log = emit_match_log(clusters, verbatim=True)
    assert all(" Macths doc1 " in line for line in log.splitlines())

    expected = parse_log((data_dir / "fig2.txt").read_text(encoding="utf-8"))
    assert parse_log(log) == expected


def test_bbc_clusters(bbc_documents):
    clusters = cluster_segments(segments_of(bbc_documents))
    assert [(c.cluster_id, c.head.headword, len(c.members)) for c in clusters] == [
        (1, "conduct", 2),
        (2, "do", 2),
        (3, "go", 3),
        (4, "wait", 4),
    ]
    for cluster in clusters:
        for match in cluster.matches:
            assert match.head == cluster.head
            assert match.score.exceeds(0.8)
            assert match.segment_a in cluster.members
            assert match.segment_b in cluster.members
        assert 0.0 <= cluster.cohesion <= 1.0


def test_unmatched_segment_forms_no_cluster(bbc_documents):
    anbumani = "ta_bbc_anbumani_11_02_2011.utf8"
    clusters = cluster_segments(segments_of(bbc_documents))
    assert all(doc_id != anbumani for c in clusters for doc_id, _ in c.members)

    clusters = cluster_segments(segments_of(bbc_documents), keep_singletons=True)
    (singleton,) = [c for c in clusters if (anbumani, 0) in c.members]
    assert singleton.members == [(anbumani, 0)]
    assert singleton.matches == []
    assert singleton.head.headword == "go"


def test_corpus_clusters(documents):
    clusters = cluster_segments(segments_of(documents))
    assert [(c.cluster_id, c.head.headword) for c in clusters] == [
        (1, "competition"),
        (2, "election"),
        (3, "festival"),
        (4, "incident"),
    ]


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_clusters_invariant_under_permutation(data):
    a = make_segment("a", places=["p1"], persons=["q1"])
    b = make_segment("b", places=["p1", "p2"], persons=["q1", "q2"])
    c = make_segment("c", places=["p2"], persons=["q2"])
    d = make_segment("d", head="action", places=["p1"], persons=["q1"], duration=True)
    e = make_segment("e", head="action", places=["p1"], persons=["q1"], duration=True)
    f = make_segment("f", places=["p9"])
    segments = [a, b, c, d, e, f]

    expected = [cluster_to_dict(c) for c in cluster_segments(segments)]
    permuted = data.draw(st.permutations(segments))
    assert [cluster_to_dict(c) for c in cluster_segments(permuted)] == expected


def test_corpus_clusters_invariant_under_reversal(documents):
    segments = segments_of(documents)
    expected = [cluster_to_dict(c) for c in cluster_segments(segments)]
    assert [cluster_to_dict(c) for c in cluster_segments(segments[::-1])] == expected


def test_cohesion():
    a = make_segment("a", places=["madurai"], persons=["student"], duration=True)
    b = make_segment("b", places=["madurai"], persons=["student"])
    assert cohesion([a]) == 1.0
    assert cohesion([a, b]) == pytest.approx(0.9)


def test_scored_clustering(bbc_documents):
    clusters = cluster_segments(segments_of(bbc_documents))
    scored = scored_clustering(clusters)
    assert scored.labels == ("1", "2", "3", "4")
    for cluster in clusters:
        values = scored.clusters[str(cluster.cluster_id)]
        assert len(values) == len(cluster.members)
        assert all(0.0 <= value <= 1.0 for value in values)


def test_pipeline(bbc_documents):
    clustering = EventClustering(keep_singletons=True).instantiate({"threshold": 0.8})
    segments = segments_of(bbc_documents)
    assert [cluster_to_dict(c) for c in clustering(segments)] == [
        cluster_to_dict(c) for c in cluster_segments(segments, keep_singletons=True)
    ]


def test_pipeline_rejects_threshold():
    with pytest.raises(ValueError):
        EventClustering().instantiate({"threshold": -0.1})


def test_save_load_clusters(tmp_path, documents):
    segments = segments_of(documents)
    clusters = cluster_segments(segments)
    path = tmp_path / "clusters.jsonl"
    save_clusters(path, clusters)

    loaded = load_clusters(path, segments)
    assert [cluster_to_dict(c) for c in loaded] == [cluster_to_dict(c) for c in clusters]
    assert loaded == clusters
    assert [c.member_segments() for c in loaded] == [c.member_segments() for c in clusters]


def test_load_clusters_unknown_segment(tmp_path, documents):
    segments = segments_of(documents)
    path = tmp_path / "clusters.jsonl"
    save_clusters(path, cluster_segments(segments))
    with pytest.raises(ValueError, match="unknown segment"):
        load_clusters(path, segments[:1])
