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

"""Event clustering pipeline"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Text, Union

import numpy as np
from pyannote.pipeline.parameter import Uniform
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from unlevents.core.io import Concept, parse_concept
from unlevents.core.pipeline import Pipeline
from unlevents.pipelines.segmentation import Segment, SegmentRef
from unlevents.pipelines.utils.scoring import PairScore, check_threshold, similarity
from unlevents.utils.metric import ScoredClustering
from unlevents.utils.serialization import read_jsonl, write_jsonl

CLUSTERS_HEADER = "CLUSTERS"


@dataclass(frozen=True)
class SegmentPairMatch:
    """Two segments sharing the same head node, scoring above threshold"""

    head: Concept
    segment_a: SegmentRef
    segment_b: SegmentRef
    score: PairScore

    @property
    def doc_a(self) -> Text:
        return self.segment_a[0]

    @property
    def doc_b(self) -> Text:
        return self.segment_b[0]


@dataclass
class EventCluster:
    cluster_id: int
    head: Concept
    members: List[SegmentRef]
    matches: List[SegmentPairMatch]
    cohesion: float
    segments: Dict[SegmentRef, Segment] = field(
        default_factory=dict, repr=False, compare=False
    )

    def member_segments(self) -> List[Segment]:
        return [self.segments[ref] for ref in self.members]


def segment_similarity(a: Segment, b: Segment, loose_features: bool = False) -> PairScore:
    """Score a pair of segments

    Same scoring as for consecutive sentences, with segment heads as the
    only head nodes and no conjunction bonus.

    Returns
    -------
    score : PairScore
        Use `score.value` for the total as a float.
    """
    return similarity(a, b, loose_features=loose_features)


def cohesion(segments: List[Segment], loose_features: bool = False) -> float:
    """Mean pairwise similarity of cluster members (self-similarity for singletons)"""
    if len(segments) == 1:
        pairs = [(segments[0], segments[0])]
    else:
        pairs = list(itertools.combinations(segments, 2))
    tenths = sum(segment_similarity(a, b, loose_features).total for a, b in pairs)
    return tenths / (10 * len(pairs))


def cluster_segments(
    segments: Iterable[Segment],
    threshold: float = 0.8,
    keep_singletons: bool = False,
    loose_features: bool = False,
) -> List[EventCluster]:
    """Cluster segments across documents

    Two segments match when they share the same head node (headword and
    first constraint) and their similarity is strictly greater than
    `threshold`. Clusters are the connected components of the match graph.

    Parameters
    ----------
    segments : iterable of Segment
        Segments of every document. Segments without head are ignored.
    threshold : float, optional
        Defaults to 0.8.
    keep_singletons : bool, optional
        Also return one-member clusters. Defaults to False.
    loose_features : bool, optional
        See `EventSegmentation`.

    Returns
    -------
    clusters : list of EventCluster
        Sorted by head headword and first document, numbered from 1.
    """

    segments = sorted((s for s in segments if s.head is not None), key=lambda s: s.ref)
    num_segments = len(segments)
    if num_segments == 0:
        return []

    by_head = defaultdict(list)
    for i, segment in enumerate(segments):
        by_head[segment.head.key].append(i)

    edges = []
    for indices in by_head.values():
        for i, j in itertools.combinations(indices, 2):
            score = segment_similarity(segments[i], segments[j], loose_features)
            if score.exceeds(threshold):
                edges.append((i, j, score))

    rows = np.array([i for i, _, _ in edges], dtype=np.int64)
    cols = np.array([j for _, j, _ in edges], dtype=np.int64)
    graph = coo_matrix(
        (np.ones(len(edges), dtype=np.int8), (rows, cols)),
        shape=(num_segments, num_segments),
    )
    _, labels = connected_components(graph, directed=False)

    components = defaultdict(list)
    for i, label in enumerate(labels):
        components[label].append(i)

    matches_by_label = defaultdict(list)
    for i, j, score in edges:
        matches_by_label[labels[i]].append(
            SegmentPairMatch(
                head=segments[i].head.node,
                segment_a=segments[i].ref,
                segment_b=segments[j].ref,
                score=score,
            )
        )

    clusters = []
    for label, indices in components.items():
        if len(indices) < 2 and not keep_singletons:
            continue
        members = [segments[i] for i in indices]
        clusters.append(
            EventCluster(
                cluster_id=0,
                head=members[0].head.node,
                members=[s.ref for s in members],
                matches=sorted(
                    matches_by_label[label],
                    key=lambda m: (m.segment_a, m.segment_b),
                ),
                cohesion=cohesion(members, loose_features),
                segments={s.ref: s for s in members},
            )
        )

    clusters.sort(key=lambda c: (c.head.headword, str(c.head), c.members[0]))
    for cluster_id, cluster in enumerate(clusters, 1):
        cluster.cluster_id = cluster_id

    return clusters


def emit_match_log(clusters: Iterable[EventCluster], verbatim: bool = False) -> Text:
    """Human-readable match log, one line per matching document pair

        go(icl>action) Matches doc1 ta_bbc_alagiri_19_03_2011.utf8 doc2 ta_bbc_armydeserters_14_12_2010.utf8

    Identical lines are only emitted once. With `verbatim`, reproduces the
    historical "Macths" spelling and missing space before the second
    document.
    """
    template = "{} Macths doc1 {} doc2{}" if verbatim else "{} Matches doc1 {} doc2 {}"
    rows = {
        (str(match.head), match.doc_a, match.doc_b)
        for cluster in clusters
        for match in cluster.matches
    }
    return "".join(template.format(*row) + "\n" for row in sorted(rows))


def scored_clustering(clusters: Iterable[EventCluster], loose_features: bool = False) -> ScoredClustering:
    """One point per cluster member, scored by its mean similarity to the other members

    Members of singleton clusters are scored by self-similarity.
    """
    points = {}
    for cluster in clusters:
        members = cluster.member_segments()
        values = []
        for i, segment in enumerate(members):
            others = [m for j, m in enumerate(members) if j != i] or [segment]
            tenths = sum(segment_similarity(segment, o, loose_features).total for o in others)
            values.append(tenths / (10 * len(others)))
        points[str(cluster.cluster_id)] = values
    return ScoredClustering(points)


class EventClustering(Pipeline):
    """Event clustering

    Parameters
    ----------
    keep_singletons : bool, optional
        Keep one-member clusters. Defaults to False.
    loose_features : bool, optional
        See `EventSegmentation`.

    Hyper-parameters
    ----------------
    threshold : float in range [0.0, 1.0]
        Same-head segments whose similarity exceeds this threshold match.
    """

    def __init__(self, keep_singletons: bool = False, loose_features: bool = False):
        super().__init__()
        self.keep_singletons = keep_singletons
        self.loose_features = loose_features
        self.threshold = Uniform(0.0, 1.0)

    def default_parameters(self):
        return {"threshold": 0.8}

    def check_parameters(self):
        check_threshold(self.threshold)

    def apply(self, segments: Iterable[Segment]) -> List[EventCluster]:
        return cluster_segments(
            segments,
            threshold=self.threshold,
            keep_singletons=self.keep_singletons,
            loose_features=self.loose_features,
        )


def cluster_to_dict(cluster: EventCluster) -> Dict:
    return {
        "cluster_id": cluster.cluster_id,
        "head": str(cluster.head),
        "members": [list(ref) for ref in cluster.members],
        "matches": [
            {
                "segment_a": list(match.segment_a),
                "segment_b": list(match.segment_b),
                "condition": match.score.condition,
                "feature": match.score.feature,
            }
            for match in cluster.matches
        ],
        "cohesion": cluster.cohesion,
    }


def save_clusters(path: Union[Text, Path], clusters: Iterable[EventCluster]) -> None:
    write_jsonl(path, CLUSTERS_HEADER, map(cluster_to_dict, clusters))


def load_clusters(path: Union[Text, Path], segments: Iterable[Segment]) -> List[EventCluster]:
    """Load clusters saved with `save_clusters`, attaching their member `segments`"""

    segments = {segment.ref: segment for segment in segments}

    clusters = []
    for row in read_jsonl(path, CLUSTERS_HEADER):
        head = parse_concept(row["head"])
        members = [(doc_id, index) for doc_id, index in row["members"]]
        missing = [ref for ref in members if ref not in segments]
        if missing:
            raise ValueError(
                f"cluster {row['cluster_id']} refers to unknown segment(s) {missing}."
            )
        clusters.append(
            EventCluster(
                cluster_id=row["cluster_id"],
                head=head,
                members=members,
                matches=[
                    SegmentPairMatch(
                        head=head,
                        segment_a=tuple(match["segment_a"]),
                        segment_b=tuple(match["segment_b"]),
                        score=PairScore(
                            condition=match["condition"], feature=match["feature"]
                        ),
                    )
                    for match in row["matches"]
                ],
                cohesion=row["cohesion"],
                segments={ref: segments[ref] for ref in members},
            )
        )
    return clusters
