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

"""Person, place and event indices

Each index row links a key (person, place or main event) to a main event
occurrence in one document: sub-events, co-occurring persons or places,
resolved time and sentence identifiers. Everything is case-folded.
"""

import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import (
    TYPE_CHECKING,
    ClassVar,
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Text,
    Tuple,
    Type,
    Union,
)

import pandas as pd

from unlevents.core.io import format_date
from unlevents.utils.serialization import (
    FormatVersionMismatch,
    read_jsonl,
    write_jsonl,
)

if TYPE_CHECKING:
    from unlevents.pipelines.event_identification import EventOccurrence, EventRecord

INDEX_KINDS = ("person", "place", "event")


class IndexWarning(UserWarning):
    ...


class KeyNotFound(KeyError):
    ...


@dataclass
class PersonIndexEntry:
    person: Text
    event_name: Text
    sub_events: List[Text] = field(default_factory=list)
    document_id: Text = ""
    places: List[Text] = field(default_factory=list)
    time: Optional[Text] = None
    sentences: List[Text] = field(default_factory=list)

    KIND: ClassVar[Text] = "person"
    COLUMNS: ClassVar[Tuple[Text, ...]] = (
        "Person", "Event_Name", "Sub_Event", "Document_ID", "Places", "Time", "Sentence",
    )

    @property
    def key(self) -> Text:
        return self.person


@dataclass
class PlaceIndexEntry:
    place: Text
    event_name: Text
    sub_events: List[Text] = field(default_factory=list)
    document_id: Text = ""
    persons: List[Text] = field(default_factory=list)
    time: Optional[Text] = None
    sentences: List[Text] = field(default_factory=list)

    KIND: ClassVar[Text] = "place"
    COLUMNS: ClassVar[Tuple[Text, ...]] = (
        "Place", "Event_Name", "Sub_Event", "Document_ID", "Person", "Time", "Sentence",
    )

    @property
    def key(self) -> Text:
        return self.place


@dataclass
class EventIndexEntry:
    event_name: Text
    sub_events: List[Text] = field(default_factory=list)
    document_id: Text = ""
    persons: List[Text] = field(default_factory=list)
    places: List[Text] = field(default_factory=list)
    time: Optional[Text] = None
    sentences: List[Text] = field(default_factory=list)

    KIND: ClassVar[Text] = "event"
    COLUMNS: ClassVar[Tuple[Text, ...]] = (
        "Event_Name", "Sub_Event", "Document_ID", "Persons", "Places", "Time", "Sentence",
    )

    @property
    def key(self) -> Text:
        return self.event_name


IndexEntry = Union[PersonIndexEntry, PlaceIndexEntry, EventIndexEntry]

ENTRY_CLASSES: Dict[Text, Type] = {
    "person": PersonIndexEntry,
    "place": PlaceIndexEntry,
    "event": EventIndexEntry,
}


def _sort_key(entry: IndexEntry) -> Tuple[Text, Text, Text]:
    return entry.key, entry.event_name, entry.document_id


def _headwords(items: Iterable[Text]) -> Text:
    return "[" + ", ".join(items) + "]"


def _sentences(items: Iterable[Text]) -> Text:
    return "[" + ",".join(items) + "]"


class EventIndex:
    """Sorted collection of index entries of a single kind

    Parameters
    ----------
    kind : {"person", "place", "event"}
    entries : iterable of index entries, optional

    Usage
    -----
    >>> persons, places, events = build_indices(records)
    >>> persons.query("student")
    [PersonIndexEntry(person='student', event_name='competition', ...), ...]
    """

    def __init__(self, kind: Text, entries: Iterable[IndexEntry] = ()):
        if kind not in ENTRY_CLASSES:
            raise ValueError(f"kind must be one of {INDEX_KINDS} (is {kind!r}).")
        self.kind = kind
        self.entry_class = ENTRY_CLASSES[kind]
        self.entries: List[IndexEntry] = sorted(entries, key=_sort_key)

    def __iter__(self) -> Iterator[IndexEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EventIndex)
            and self.kind == other.kind
            and self.entries == other.entries
        )

    def keys(self) -> List[Text]:
        return sorted({entry.key for entry in self.entries})

    def query(self, key: Text) -> List[IndexEntry]:
        """Every entry for `key`, sorted by (event name, document)

        Raises
        ------
        KeyNotFound
            When there is no entry for `key`.
        """
        key = key.casefold()
        entries = [entry for entry in self.entries if entry.key == key]
        if not entries:
            raise KeyNotFound(key)
        return entries

    def to_dataframe(self, entries: Optional[Iterable[IndexEntry]] = None) -> pd.DataFrame:
        """Tabular view, with list-valued cells rendered as "[a, b]" """
        rows = []
        for entry in self.entries if entries is None else entries:
            row = []
            for name, value in asdict(entry).items():
                if name == "sentences":
                    value = _sentences(value)
                elif isinstance(value, list):
                    value = _headwords(value)
                elif value is None:
                    value = ""
                row.append(value)
            rows.append(row)
        return pd.DataFrame(rows, columns=list(self.entry_class.COLUMNS))

    def to_tsv(self, entries: Optional[Iterable[IndexEntry]] = None) -> Text:
        return self.to_dataframe(entries).to_csv(sep="\t", index=False)

    def save(self, path: Union[Text, Path]) -> None:
        # rows keep index column order
        write_jsonl(
            path,
            f"INDEX {self.kind}",
            (asdict(entry) for entry in self.entries),
            sort_keys=False,
        )

    @classmethod
    def load(cls, path: Union[Text, Path], kind: Text) -> "EventIndex":
        entry_class = ENTRY_CLASSES[kind]
        rows = read_jsonl(path, f"INDEX {kind}")
        try:
            entries = [entry_class(**row) for row in rows]
        except TypeError as e:
            raise FormatVersionMismatch(f"{path}: unexpected {kind} index row ({e})") from e
        index = cls(kind)
        # keep saved order
        index.entries = entries
        return index


def _time(occurrence: "EventOccurrence", event_name: Text) -> Optional[Text]:
    dates = occurrence.resolved_times
    if len(dates) > 1:
        warnings.warn(
            IndexWarning(
                f"{event_name!r} has {len(dates)} different times in "
                f"{occurrence.doc_id}: only the first one is indexed."
            )
        )
    return format_date(dates[0]) if dates else None


def build_indices(
    records: Iterable["EventRecord"],
) -> Tuple[EventIndex, EventIndex, EventIndex]:
    """Build person, place and event indices

    Parameters
    ----------
    records : iterable of EventRecord
        Main events, with their sub-events attached.

    Returns
    -------
    persons, places, events : EventIndex
        One row per (key, main event, document).
    """

    persons, places, events = [], [], []

    for record in records:
        event_name = record.main_event.headword.casefold()
        for occurrence in record.occurrences:
            document_id = occurrence.doc_id.casefold()
            sub_events = [c.headword.casefold() for c in occurrence.sub_events]
            occurrence_persons = [p.casefold() for p in occurrence.persons]
            occurrence_places = [p.casefold() for p in occurrence.places]
            time = _time(occurrence, event_name)
            sentences = list(occurrence.sentence_ids)

            events.append(
                EventIndexEntry(
                    event_name=event_name,
                    sub_events=sub_events,
                    document_id=document_id,
                    persons=occurrence_persons,
                    places=occurrence_places,
                    time=time,
                    sentences=sentences,
                )
            )
            persons.extend(
                PersonIndexEntry(
                    person=person,
                    event_name=event_name,
                    sub_events=list(sub_events),
                    document_id=document_id,
                    places=list(occurrence_places),
                    time=time,
                    sentences=list(sentences),
                )
                for person in occurrence_persons
            )
            places.extend(
                PlaceIndexEntry(
                    place=place,
                    event_name=event_name,
                    sub_events=list(sub_events),
                    document_id=document_id,
                    persons=list(occurrence_persons),
                    time=time,
                    sentences=list(sentences),
                )
                for place in occurrence_places
            )

    return (
        EventIndex("person", persons),
        EventIndex("place", places),
        EventIndex("event", events),
    )


def query(index: EventIndex, key: Text) -> List[IndexEntry]:
    """Every entry of `index` for `key` (see EventIndex.query)"""
    return index.query(key)


def index_path(directory: Union[Text, Path], kind: Text) -> Path:
    return Path(directory) / f"{kind}.idx"


def save_indices(
    indices: Iterable[EventIndex], directory: Union[Text, Path]
) -> None:
    """Save indices as person.idx, place.idx and event.idx in `directory`"""
    for index in indices:
        index.save(index_path(directory, index.kind))


def load_indices(
    directory: Union[Text, Path]
) -> Tuple[EventIndex, EventIndex, EventIndex]:
    """Load indices saved with `save_indices`

    Raises
    ------
    FormatVersionMismatch
        When an index file is missing or carries an unexpected header.
    IoFailure
        When an index file cannot be read.
    """
    persons, places, events = (
        EventIndex.load(index_path(directory, kind), kind) for kind in INDEX_KINDS
    )
    return persons, places, events
