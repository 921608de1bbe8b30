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

"""Main events, sub-events and their time"""

import datetime
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Text, Tuple, Union

from unlevents.core.io import Concept, UnlDocument, extract_date
from unlevents.pipelines.clustering import EventCluster
from unlevents.pipelines.segmentation import Segment, SegmentRef
from unlevents.pipelines.utils.scoring import ACTION, EVENT, TIME

POS_TAGS = {EVENT: "noun-event", ACTION: "verb-action"}

EXPLICIT = "explicit"
BEFORE = "before"
AFTER = "after"
PUBLISHED = "published"
UNKNOWN = "unknown"

EventTable = Dict[Text, "EventEntry"]
Documents = Union[Mapping[Text, UnlDocument], Iterable[UnlDocument]]


@dataclass
class EventEntry:
    """Aggregated view of every clustered segment sharing a head node"""

    head: Concept
    pos: Text
    frequency: int = 0
    concept_nodes: List[Concept] = field(default_factory=list)
    relations: List = field(default_factory=list)
    segments: List[SegmentRef] = field(default_factory=list)
    sentence_ids: Dict[Text, List[Text]] = field(default_factory=dict)
    occurrences: Dict[Text, int] = field(default_factory=dict)

    @property
    def key(self) -> Text:
        return self.head.label

    @property
    def doc_ids(self) -> List[Text]:
        return sorted(self.sentence_ids)


@dataclass
class EventOccurrence:
    """What a document says about a main event"""

    doc_id: Text
    segments: List[Segment] = field(repr=False)
    sub_events: List[Concept] = field(default_factory=list)
    persons: List[Text] = field(default_factory=list)
    places: List[Text] = field(default_factory=list)
    times: List[Tuple[Optional[datetime.date], Text]] = field(default_factory=list)
    sentence_ids: List[Text] = field(default_factory=list)

    @property
    def resolved_times(self) -> List[datetime.date]:
        """Distinct resolved dates, in order of appearance"""
        dates = []
        for date, _ in self.times:
            if date is not None and date not in dates:
                dates.append(date)
        return dates

    @property
    def time(self) -> Optional[datetime.date]:
        dates = self.resolved_times
        return dates[0] if dates else None

    @property
    def qualifier(self) -> Text:
        for date, qualifier in self.times:
            if date is not None:
                return qualifier
        return UNKNOWN


@dataclass
class EventRecord:
    main_event: Concept
    frequency: int
    occurrences: List[EventOccurrence] = field(default_factory=list)
    sub_events: List[Concept] = field(default_factory=list)

    @property
    def doc_ids(self) -> List[Text]:
        return [o.doc_id for o in self.occurrences]

    @property
    def sentence_ids(self) -> Dict[Text, List[Text]]:
        return {o.doc_id: o.sentence_ids for o in self.occurrences}

    @property
    def persons(self) -> List[Text]:
        return _merge(o.persons for o in self.occurrences)

    @property
    def places(self) -> List[Text]:
        return _merge(o.places for o in self.occurrences)

    @property
    def times(self) -> List[datetime.date]:
        return sorted({date for o in self.occurrences for date in o.resolved_times})

    @property
    def num_persons(self) -> int:
        return len(self.persons)

    @property
    def num_places(self) -> int:
        return len(self.places)


def _merge(lists: Iterable[Sequence[Text]]) -> List[Text]:
    merged = []
    for items in lists:
        merged.extend(item for item in items if item not in merged)
    return merged


def _as_mapping(documents: Optional[Documents]) -> Dict[Text, UnlDocument]:
    if documents is None:
        return dict()
    if isinstance(documents, Mapping):
        return dict(documents)
    return {document.doc_id: document for document in documents}


def _sentence_order(document: Optional[UnlDocument]) -> Dict[Text, int]:
    if document is None:
        return dict()
    return {s.sentence_id: i for i, s in enumerate(document.sentences)}


def build_event_table(
    clusters: Iterable[EventCluster], documents: Optional[Documents] = None
) -> EventTable:
    """Index clustered segments by head node

    Parameters
    ----------
    clusters : iterable of EventCluster
        Clusters, with their member segments attached.
    documents : iterable of UnlDocument, optional
        When provided, sentence identifiers are listed in document order.

    Returns
    -------
    table : dict
        "headword|key>value" label to EventEntry, sorted by label.
        `frequency` is the number of clustered segments headed by the node.
    """

    documents = _as_mapping(documents)
    table: EventTable = dict()

    for cluster in clusters:
        for segment in cluster.member_segments():
            head = segment.head.node
            _, pos = head.constraint or (None, None)
            entry = table.setdefault(
                head.label, EventEntry(head=head, pos=POS_TAGS.get(pos, "other"))
            )
            entry.frequency += 1
            entry.segments.append(segment.ref)
            for concept in segment.concepts:
                if concept.node not in entry.concept_nodes:
                    entry.concept_nodes.append(concept.node)
            entry.relations.extend(segment.relations)
            entry.occurrences[segment.doc_id] = entry.occurrences.get(segment.doc_id, 0) + 1
            sentence_ids = entry.sentence_ids.setdefault(segment.doc_id, [])
            sentence_ids.extend(s for s in segment.sentence_ids if s not in sentence_ids)

    for entry in table.values():
        entry.segments.sort()
        for doc_id, sentence_ids in entry.sentence_ids.items():
            order = _sentence_order(documents.get(doc_id))
            if order:
                sentence_ids.sort(key=lambda s: order.get(s, len(order)))
        entry.sentence_ids = dict(sorted(entry.sentence_ids.items()))
        entry.occurrences = dict(sorted(entry.occurrences.items()))

    return dict(sorted(table.items()))


def _tim_concepts(segment: Segment) -> List[Concept]:
    """Targets of tim relations, then time concepts that are not durations"""
    durations = {r.target.key for r in segment.relations if r.label == "dur"}
    concepts = [r.target for r in segment.relations if r.label == "tim"]
    concepts.extend(
        concept
        for concept in segment.times
        if concept.is_a(TIME) and concept.key not in durations
    )
    return concepts


def resolve_time(
    document: Optional[UnlDocument], segment: Segment
) -> Tuple[Optional[datetime.date], Text]:
    """Resolve when the event described by `segment` happened

    In order of preference:
    - an explicit date carried by the target of a tim relation, or by a time
      concept that is not a duration ("explicit")
    - the publication date, when the head node is marked as past ("before")
      or future ("after")
    - the publication date ("published")

    Returns
    -------
    date : datetime.date or None
    qualifier : str
        One of "explicit", "before", "after", "published" or "unknown".
    """

    for concept in _tim_concepts(segment):
        date = extract_date(concept.headword)
        if date is not None:
            return date, EXPLICIT

    published = None if document is None else document.date
    if published is None:
        return None, UNKNOWN

    if segment.head is not None:
        attributes = {
            attribute
            for concept in segment.concepts
            if concept.key == segment.head.key
            for attribute in concept.attributes
        }
        if "past" in attributes:
            return published, BEFORE
        if "future" in attributes:
            return published, AFTER

    return published, PUBLISHED


def _segments_by_head(clusters: Iterable[EventCluster]) -> Dict[Text, List[Segment]]:
    segments: Dict[Text, List[Segment]] = dict()
    for cluster in clusters:
        segments.setdefault(cluster.head.label, []).extend(cluster.member_segments())
    for members in segments.values():
        members.sort(key=lambda s: s.ref)
    return segments


def identify_main_events(
    table: EventTable,
    clusters: Iterable[EventCluster],
    documents: Optional[Documents] = None,
) -> List[EventRecord]:
    """Main events are clustered nodes constrained as events

    Parameters
    ----------
    table : EventTable
        Output of `build_event_table`.
    clusters : iterable of EventCluster
        Clusters the table was built from.
    documents : iterable of UnlDocument, optional
        Used to resolve time from publication dates.

    Returns
    -------
    records : list of EventRecord
        Sorted by decreasing frequency, then headword. Sub-events are left
        empty (see `attach_sub_events`).
    """

    documents = _as_mapping(documents)
    segments = _segments_by_head(clusters)

    entries = sorted(
        (entry for entry in table.values() if entry.head.is_a(EVENT)),
        key=lambda entry: (-entry.frequency, entry.head.headword),
    )

    records = []
    for entry in entries:
        occurrences: Dict[Text, EventOccurrence] = dict()
        for segment in segments.get(entry.key, []):
            occurrence = occurrences.setdefault(
                segment.doc_id, EventOccurrence(doc_id=segment.doc_id, segments=[])
            )
            occurrence.segments.append(segment)
            occurrence.persons = _merge(
                [occurrence.persons, [c.headword for c in segment.persons]]
            )
            occurrence.places = _merge(
                [occurrence.places, [c.headword for c in segment.places]]
            )
            occurrence.times.append(resolve_time(documents.get(segment.doc_id), segment))
            occurrence.sentence_ids = _merge(
                [occurrence.sentence_ids, segment.sentence_ids]
            )

        records.append(
            EventRecord(
                main_event=entry.head,
                frequency=entry.frequency,
                occurrences=[occurrences[doc_id] for doc_id in sorted(occurrences)],
            )
        )

    return records


def attach_sub_events(
    mains: List[EventRecord], table: EventTable, clusters: Iterable[EventCluster]
) -> List[EventRecord]:
    """Attach sub-events to main events

    Sub-events of a main event are the action nodes found in the segments
    it heads, deduplicated by headword and ordered by first occurrence.
    A sub-event may be attached to several main events.
    """

    segments = {
        ref: segment
        for cluster in clusters
        for ref, segment in cluster.segments.items()
    }

    for record in mains:
        entry = table.get(record.main_event.label)
        refs = set() if entry is None else set(entry.segments)
        for occurrence in record.occurrences:
            occurrence.segments = [
                segments.get(segment.ref, segment)
                for segment in occurrence.segments
                if segment.ref in refs
            ]
            occurrence.sub_events = []
            for segment in occurrence.segments:
                for concept in segment.concepts:
                    if (
                        concept.is_a(ACTION)
                        and concept.headword != record.main_event.headword
                        and concept.headword not in [c.headword for c in occurrence.sub_events]
                    ):
                        occurrence.sub_events.append(concept.node)

        record.sub_events = []
        for occurrence in record.occurrences:
            for concept in occurrence.sub_events:
                if concept.headword not in [c.headword for c in record.sub_events]:
                    record.sub_events.append(concept)

    return mains
