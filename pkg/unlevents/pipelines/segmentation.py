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

"""Event segmentation pipeline"""

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Text, Tuple, Union

from pyannote.pipeline.parameter import Uniform

from unlevents.core.io import (
    Concept,
    Relation,
    Sentence,
    UnlDocument,
    parse_concept,
    parse_relation,
)
from unlevents.core.pipeline import Pipeline
from unlevents.pipelines.utils.scoring import (
    CONJUNCTIONS,
    PERSON,
    PLACE,
    TIME,
    TIME_RELATIONS,
    PairScore,
    check_threshold,
    is_head_candidate,
    similarity,
    with_conjunction,
)
from unlevents.utils.serialization import read_jsonl, write_jsonl

SegmentRef = Tuple[Text, int]

SEGMENTS_HEADER = "SEGMENTS"


def unique(concepts: Iterable[Concept]) -> List[Concept]:
    """Keep first occurrence of each (headword, first constraint) node"""
    seen, kept = set(), []
    for concept in concepts:
        if concept.key not in seen:
            seen.add(concept.key)
            kept.append(concept)
    return kept


@dataclass(frozen=True)
class SentenceFeatures:
    """Scoring-relevant view of a sentence"""

    sentence_id: Text
    concepts: Tuple[Concept, ...]
    heads: Tuple[Concept, ...]
    persons: Tuple[Concept, ...]
    places: Tuple[Concept, ...]
    times: Tuple[Concept, ...]
    has_duration: bool
    conjunctions: Tuple[Relation, ...]
    opens_with_conjunction: bool


def time_concepts(relations: Sequence[Relation]) -> List[Concept]:
    """Targets of tim/dur relations and concepts constrained as time"""
    times = []
    for relation in relations:
        if relation.label in TIME_RELATIONS:
            times.append(relation.target)
        times.extend(c for c in (relation.source, relation.target) if c.is_a(TIME))
    return unique(times)


def sentence_features(sentence: Sentence) -> SentenceFeatures:
    concepts = list(sentence.iter_concepts())
    relations = sentence.relations
    return SentenceFeatures(
        sentence_id=sentence.sentence_id,
        concepts=tuple(concepts),
        heads=tuple(unique(c for c in concepts if is_head_candidate(c))),
        persons=tuple(unique(c for c in concepts if c.is_a(PERSON))),
        places=tuple(unique(c for c in concepts if c.is_a(PLACE))),
        times=tuple(time_concepts(relations)),
        has_duration=any(r.label == "dur" for r in relations)
        or any("dur" in c.attributes for c in concepts),
        conjunctions=tuple(r for r in relations if r.label in CONJUNCTIONS),
        opens_with_conjunction=bool(relations) and relations[0].label in CONJUNCTIONS,
    )


def conjunction_linked(a: SentenceFeatures, b: SentenceFeatures) -> bool:
    """Whether an and/or relation ties sentence `a` to the following sentence `b`

    This is the case when `b` opens with an and/or relation, or when an
    and/or relation of either sentence has an endpoint found in the other.
    """

    if b.opens_with_conjunction:
        return True

    for this, other in ((a, b), (b, a)):
        keys = {concept.key for concept in other.concepts}
        for relation in this.conjunctions:
            if relation.source.key in keys or relation.target.key in keys:
                return True

    return False


def score_features(
    a: SentenceFeatures, b: SentenceFeatures, loose_features: bool = False
) -> PairScore:
    return with_conjunction(
        similarity(a, b, loose_features=loose_features), conjunction_linked(a, b)
    )


def pair_score(a: Sentence, b: Sentence, loose_features: bool = False) -> PairScore:
    """Score a pair of consecutive sentences

    Parameters
    ----------
    a, b : Sentence
        Consecutive sentences, `b` following `a`.
    loose_features : bool, optional
        Count place, person and duration features even when no head node is
        shared. Defaults to False.

    Returns
    -------
    score : PairScore
        Condition (event 0.5 or action 0.4), feature (place 0.2, person 0.2,
        duration 0.1) and conjunction (0.1) scores. Use `score.value` for the
        total as a float.
    """
    return score_features(
        sentence_features(a), sentence_features(b), loose_features=loose_features
    )


@dataclass
class Segment:
    """Maximal run of consecutive sentences describing a single event"""

    doc_id: Text
    index: int
    sentence_ids: List[Text]
    head: Optional[Concept]
    concepts: List[Concept] = field(default_factory=list)
    relations: List[Relation] = field(default_factory=list)
    persons: List[Concept] = field(default_factory=list)
    places: List[Concept] = field(default_factory=list)
    times: List[Concept] = field(default_factory=list)
    has_duration: bool = False

    @property
    def ref(self) -> SegmentRef:
        return self.doc_id, self.index

    @property
    def heads(self) -> Tuple[Concept, ...]:
        return () if self.head is None else (self.head,)


def select_head(relations: Sequence[Relation]) -> Optional[Concept]:
    """Most frequent event or action node, first occurrence wins ties"""

    counts: Counter = Counter()
    first: Dict = dict()
    for position, concept in enumerate(
        c for r in relations for c in (r.source, r.target)
    ):
        if is_head_candidate(concept):
            counts[concept.key] += 1
            first.setdefault(concept.key, (position, concept))

    if not counts:
        return None

    key = min(counts, key=lambda k: (-counts[k], first[k][0]))
    return first[key][1]


def make_segment(
    doc_id: Text, index: int, sentences: Sequence[Sentence], features: Sequence[SentenceFeatures]
) -> Segment:
    relations = [r for sentence in sentences for r in sentence.relations]
    concepts = []
    for concept in (c for r in relations for c in (r.source, r.target)):
        if concept not in concepts:
            concepts.append(concept)
    return Segment(
        doc_id=doc_id,
        index=index,
        sentence_ids=[s.sentence_id for s in sentences],
        head=select_head(relations),
        concepts=concepts,
        relations=relations,
        persons=unique(c for f in features for c in f.persons),
        places=unique(c for f in features for c in f.places),
        times=unique(c for f in features for c in f.times),
        has_duration=any(f.has_duration for f in features),
    )


def build_segments(
    document: UnlDocument, threshold: float = 0.8, loose_features: bool = False
) -> List[Segment]:
    """Split document into event segments

    Sentence i+1 joins the segment of sentence i when their pair score is
    strictly greater than `threshold`, or when they are linked by an and/or
    relation. Segments are contiguous and cover every sentence exactly once.
    """

    sentences = document.sentences
    features = [sentence_features(sentence) for sentence in sentences]

    groups: List[List[int]] = []
    for i in range(len(sentences)):
        if i > 0:
            score = score_features(features[i - 1], features[i], loose_features)
            if score.exceeds(threshold) or score.conjunction > 0:
                groups[-1].append(i)
                continue
        groups.append([i])

    return [
        make_segment(
            document.doc_id,
            index,
            [sentences[i] for i in group],
            [features[i] for i in group],
        )
        for index, group in enumerate(groups)
    ]


class EventSegmentation(Pipeline):
    """Event segmentation

    Parameters
    ----------
    loose_features : bool, optional
        Count place, person and duration features even when consecutive
        sentences share no head node. Defaults to False.

    Hyper-parameters
    ----------------
    threshold : float in range [0.0, 1.0]
        Consecutive sentences whose score exceeds this threshold are merged.
    """

    def __init__(self, loose_features: bool = False):
        super().__init__()
        self.loose_features = loose_features
        self.threshold = Uniform(0.0, 1.0)

    def default_parameters(self):
        return {"threshold": 0.8}

    def check_parameters(self):
        check_threshold(self.threshold)

    def apply(self, document: UnlDocument) -> List[Segment]:
        """Apply event segmentation

        Parameters
        ----------
        document : UnlDocument
            Parsed document.

        Returns
        -------
        segments : list of Segment
            Segments, in document order.
        """
        return build_segments(
            document, threshold=self.threshold, loose_features=self.loose_features
        )


def segment_to_dict(segment: Segment) -> Dict:
    return {
        "doc_id": segment.doc_id,
        "index": segment.index,
        "sentence_ids": list(segment.sentence_ids),
        "head": None if segment.head is None else str(segment.head),
        "concepts": [str(c) for c in segment.concepts],
        "relations": [str(r) for r in segment.relations],
        "persons": [str(c) for c in segment.persons],
        "places": [str(c) for c in segment.places],
        "times": [str(c) for c in segment.times],
        "has_duration": segment.has_duration,
    }


def segment_from_dict(row: Dict) -> Segment:
    return Segment(
        doc_id=row["doc_id"],
        index=row["index"],
        sentence_ids=list(row["sentence_ids"]),
        head=None if row["head"] is None else parse_concept(row["head"]),
        concepts=[parse_concept(c) for c in row["concepts"]],
        relations=[parse_relation(r) for r in row["relations"]],
        persons=[parse_concept(c) for c in row["persons"]],
        places=[parse_concept(c) for c in row["places"]],
        times=[parse_concept(c) for c in row["times"]],
        has_duration=row["has_duration"],
    )


def save_segments(path: Union[Text, Path], segments: Iterable[Segment]) -> None:
    write_jsonl(path, SEGMENTS_HEADER, map(segment_to_dict, segments))


def load_segments(path: Union[Text, Path]) -> List[Segment]:
    return [segment_from_dict(row) for row in read_jsonl(path, SEGMENTS_HEADER)]
