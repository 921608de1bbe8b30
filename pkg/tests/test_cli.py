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

import json

import pytest
from typer.testing import CliRunner

from unlevents.cli.main import app
from unlevents.core.index import load_indices

runner = CliRunner()

ARTIFACTS = [
    "segments.jsonl",
    "clusters.jsonl",
    "matches.txt",
    "person.idx",
    "place.idx",
    "event.idx",
    "ranking.tsv",
    "eval.tsv",
    "manifest.json",
]


def invoke(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def snapshot(directory):
    return {path.name: path.read_bytes() for path in sorted(directory.iterdir())}


@pytest.fixture()
def out_dir(tmp_path, corpus_dir):
    out_dir = tmp_path / "out"
    result = invoke("run", corpus_dir, "--out-dir", out_dir)
    assert result.exit_code == 0, result.output
    return out_dir


def test_run(out_dir):
    assert sorted(p.name for p in out_dir.iterdir()) == sorted(ARTIFACTS)

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["threshold"] == 0.8
    assert manifest["config"]["weights"] == [1.0, 1.0, 3.0]
    assert len(manifest["inputs"]) == 15


def test_run_is_deterministic(tmp_path, corpus_dir, out_dir):
    other = tmp_path / "other"
    result = invoke("run", corpus_dir, "-o", other)
    assert result.exit_code == 0, result.output
    assert snapshot(other) == snapshot(out_dir)


def test_stages_match_run(tmp_path, corpus_dir, out_dir):
    staged = tmp_path / "staged"
    for args in [
        ("segment", corpus_dir),
        ("cluster",),
        ("index", corpus_dir),
        ("rank", corpus_dir),
        ("eval",),
    ]:
        result = invoke(*args, "--out-dir", staged)
        assert result.exit_code == 0, result.output

    assert snapshot(staged) == snapshot(out_dir)


@pytest.mark.parametrize(
    "kind,key,expected",
    [
        ("person", "student", "person_student.tsv"),
        ("place", "Madurai", "place_madurai.tsv"),
        ("event", "election", "event_election.tsv"),
    ],
)
def test_query(out_dir, data_dir, kind, key, expected):
    result = invoke("query", kind, key, "--out-dir", out_dir)
    assert result.exit_code == 0, result.output
    expected = (data_dir / "expected" / expected).read_text(encoding="utf-8")
    assert result.stdout == expected


def test_query_without_entries(out_dir):
    result = invoke("query", "person", "nobody", "--out-dir", out_dir)
    assert result.exit_code == 3
    assert "no entries" in result.output


def test_query_unknown_kind(out_dir):
    result = invoke("query", "date", "2010", "--out-dir", out_dir)
    assert result.exit_code != 0


def test_missing_artifact(tmp_path, corpus_dir):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert invoke("query", "person", "student", "--out-dir", empty).exit_code == 1
    assert invoke("cluster", "--out-dir", empty).exit_code == 1
    assert invoke("index", corpus_dir, "--out-dir", empty).exit_code == 1
    assert invoke("eval", "--out-dir", empty).exit_code == 1


def test_empty_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    result = invoke("run", corpus, "--out-dir", tmp_path / "out")
    assert result.exit_code == 2
    assert not (tmp_path / "out").exists()


def test_missing_corpus(tmp_path):
    result = invoke("run", tmp_path / "missing", "--out-dir", tmp_path / "out")
    assert result.exit_code == 1


def test_malformed_corpus(tmp_path, write_document):
    write_document("a", "#SENT s1\nagt(go(icl>action), farmer(icl>person))")
    write_document("b", "#SENT s1\nagt(go(icl>action, farmer(icl>person))")
    result = invoke("run", tmp_path / "corpus", "--out-dir", tmp_path / "out")
    assert result.exit_code == 1
    assert "malformed" in result.output


SINGLE_EVENT = """
#SENT s1
agt(election(icl>event), supporter(icl>person))
plc(election(icl>event), madurai(icl>place))
"""


def test_single_document_needs_singletons(tmp_path, write_document):
    write_document("ta_single", SINGLE_EVENT)

    out_dir = tmp_path / "out"
    result = invoke("run", tmp_path / "corpus", "--out-dir", out_dir)
    assert result.exit_code == 0, result.output
    assert all(len(index) == 0 for index in load_indices(out_dir))

    result = invoke("run", tmp_path / "corpus", "--out-dir", out_dir, "--keep-singletons")
    assert result.exit_code == 0, result.output
    persons, places, events = load_indices(out_dir)
    assert [(e.person, e.document_id) for e in persons] == [("supporter", "ta_single")]
    assert [(e.place, e.document_id) for e in places] == [("madurai", "ta_single")]
    assert [(e.event_name, e.document_id) for e in events] == [("election", "ta_single")]


def test_rank_prints_ranking(tmp_path, corpus_dir, out_dir):
    result = invoke("rank", corpus_dir, "--out-dir", out_dir)
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "rank\tevent\tscore\tdoc_count\ttotal_frequency\ttitle_count"
    assert [line.split("\t")[1] for line in lines[1:]] == [
        "election",
        "competition",
        "incident",
        "festival",
    ]


def test_verbatim_match_log(tmp_path, bbc_dir):
    out_dir = tmp_path / "out"
    result = invoke("run", bbc_dir, "--out-dir", out_dir, "--verbatim-fig2")
    assert result.exit_code == 0, result.output
    lines = (out_dir / "matches.txt").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 9
    assert all(" Macths doc1 " in line for line in lines)


def test_match_log(tmp_path, bbc_dir):
    out_dir = tmp_path / "out"
    assert invoke("run", bbc_dir, "--out-dir", out_dir).exit_code == 0
    lines = (out_dir / "matches.txt").read_text(encoding="utf-8").splitlines()
    assert lines[0] == (
        "conduct(icl>action) Matches doc1 ta_bbc_amitabhprotest_26_04_2010.utf8 "
        "doc2 ta_bbc_animalsacrifice_22_08_2010.utf8"
    )


def test_silhouette_curve(tmp_path, corpus_dir):
    out_dir = tmp_path / "out"
    assert invoke("run", corpus_dir, "--out-dir", out_dir, "--fig8").exit_code == 0
    curve = (out_dir / "fig8.csv").read_text().splitlines()
    assert curve[0] == "point,coefficient"
    # one point per clustered segment
    assert len(curve) == 1 + 17


def test_reference_check():
    result = invoke("eval", "--table1")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert len(lines) == 7
    assert "inconsistent" in lines[-1]


def test_evaluate_points(tmp_path):
    points = tmp_path / "points.yml"
    points.write_text(
        "1: [0.41, 0.46, 0.45]\n"
        "2: [0.51, 0.52, 0.55, 0.57]\n"
        "3: [0.66]\n"
        "4: [0.70, 0.71, 0.72]\n"
        "5: [0.82, 0.85, 0.80]\n"
        "6: [0.91, 0.9]\n"
    )
    result = invoke("eval", "--points", points)
    assert result.exit_code == 0, result.output
    assert "# mean\t0.678" in result.stdout.splitlines()
    assert "# band\tclear" in result.stdout.splitlines()

    result = invoke("eval", "--points", points, "--fig8")
    assert "point,coefficient" in result.stdout.splitlines()


@pytest.mark.parametrize("content", [None, "1: [0.41, 0.46\n", "- 0.41\n"])
def test_evaluate_invalid_points(tmp_path, content):
    points = tmp_path / "points.yml"
    if content is not None:
        points.write_text(content)
    result = invoke("eval", "--points", points)
    assert result.exit_code == 1
    assert "error" in result.output


def test_config_file(tmp_path, corpus_dir):
    config = tmp_path / "config.yaml"
    config.write_text("threshold: 0.7\nweights: [2, 1, 3]\nkeep_singletons: true\n")
    out_dir = tmp_path / "out"
    result = invoke("run", corpus_dir, "--out-dir", out_dir, "--config", config)
    assert result.exit_code == 0, result.output

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["threshold"] == 0.7
    assert manifest["config"]["weights"] == [2.0, 1.0, 3.0]
    assert manifest["config"]["keep_singletons"] is True


def test_options_override_config_file(tmp_path, corpus_dir):
    config = tmp_path / "config.yaml"
    config.write_text("threshold: 0.7\n")
    out_dir = tmp_path / "out"
    result = invoke(
        "segment", corpus_dir, "-o", out_dir, "--config", config, "--threshold", "0.5"
    )
    assert result.exit_code == 0, result.output
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["threshold"] == 0.5


@pytest.mark.parametrize(
    "content",
    ["threshold: 1.5\n", "unknown: 1\n", "weights: [1, 1]\n", "weights: [0, 1, 3]\n", "idf: maybe\n"],
)
def test_invalid_config_file(tmp_path, corpus_dir, content):
    config = tmp_path / "config.yaml"
    config.write_text(content)
    result = invoke("run", corpus_dir, "-o", tmp_path / "out", "--config", config)
    assert result.exit_code == 1


@pytest.mark.parametrize("weights", ["1,1", "a,b,c", "0,1,3"])
def test_invalid_weights(tmp_path, corpus_dir, weights):
    result = invoke("run", corpus_dir, "-o", tmp_path / "out", "--weights", weights)
    assert result.exit_code == 1


def test_invalid_threshold(tmp_path, corpus_dir):
    result = invoke("run", corpus_dir, "-o", tmp_path / "out", "--threshold", "1.2")
    assert result.exit_code == 1
