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

"""Event extraction pipeline"""

import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from unlevents.core.index import EventIndex, build_indices
from unlevents.core.io import Corpus, CorpusFile, EmptyCorpus, UnlDocument
from unlevents.core.pipeline import Pipeline
from unlevents.pipelines.clustering import (
    EventCluster,
    EventClustering,
    scored_clustering,
)
from unlevents.pipelines.event_identification import (
    EventRecord,
    EventTable,
    attach_sub_events,
    build_event_table,
    identify_main_events,
)
from unlevents.pipelines.ranking import EventRanking, RankedEvent, RankingWarning
from unlevents.pipelines.segmentation import EventSegmentation, Segment
from unlevents.utils.metric import ScoredClustering


@dataclass
class EventExtractionOutput:
    documents: List[UnlDocument]
    segments: List[Segment]
    clusters: List[EventCluster]
    table: EventTable
    events: List[EventRecord]
    indices: Tuple[EventIndex, EventIndex, EventIndex]
    ranking: List[RankedEvent] = field(default_factory=list)
    evaluation: Optional[ScoredClustering] = None


class EventExtraction(Pipeline):
    """Event extraction pipeline

    Segments every document of a UNL corpus into events, clusters segments
    across documents, identifies main events and sub-events, indexes them by
    person, place and event, and ranks main events.

    Parameters
    ----------
    loose_features : bool, optional
        Count place, person and duration features even when no head node is
        shared. Defaults to False.
    keep_singletons : bool, optional
        Keep one-member clusters. Defaults to False.
    idf : bool, optional
        Rank with inverse document frequency instead of document count.
        Defaults to False.

    Usage
    -----
    >>> pipeline = EventExtraction()
    >>> pipeline.instantiate(pipeline.default_parameters())
    >>> output = pipeline("/path/to/corpus")
    >>> persons, places, events = output.indices
    >>> persons.query("student")

    Hyper-parameters
    ----------------
    segmentation.threshold
    clustering.threshold
    ranking.w_df
    ranking.w_tf
    ranking.w_title
    """

    def __init__(
        self,
        loose_features: bool = False,
        keep_singletons: bool = False,
        idf: bool = False,
    ):
        super().__init__()
        self.loose_features = loose_features
        self.keep_singletons = keep_singletons
        self.idf = idf

        self.segmentation = EventSegmentation(loose_features=loose_features)
        self.clustering = EventClustering(
            keep_singletons=keep_singletons, loose_features=loose_features
        )
        self.ranking = EventRanking(idf=idf)

    def default_parameters(self):
        return {
            "segmentation": self.segmentation.default_parameters(),
            "clustering": self.clustering.default_parameters(),
            "ranking": self.ranking.default_parameters(),
        }

    def apply(
        self, file: CorpusFile, hook: Optional[Callable] = None
    ) -> EventExtractionOutput:
        """Apply event extraction

        Parameters
        ----------
        file : CorpusFile
            Corpus directory (or mapping, see `Corpus.validate_file`).
        hook : callable, optional
            Callback called after each major steps of the pipeline as follows:
                hook(step_name,      # human-readable name of current step
                     step_artefact,  # artifact generated by current step
                     file=file)      # corpus being processed
            Segmentation calls `hook` once per document with additional
            `completed` and `total` keyword arguments.

        Returns
        -------
        output : EventExtractionOutput

        Raises
        ------
        MalformedCorpus
            When any document cannot be parsed.
        EmptyCorpus
            When the corpus holds no document.
        """

        file = Corpus.validate_file(file)

        # setup hook (e.g. for debugging purposes)
        hook = self.setup_hook(file, hook=hook)

        documents = Corpus()(file)
        if not documents:
            raise EmptyCorpus(f"corpus {file['uri']} holds no document.")
        hook("documents", documents)

        segments: List[Segment] = []
        num_documents = len(documents)
        for d, document in enumerate(documents):
            hook("segmentation", None, total=num_documents, completed=d)
            segments.extend(self.segmentation(document))
        hook("segmentation", None, total=num_documents, completed=num_documents)
        hook("segments", segments)

        clusters = self.clustering(segments)
        hook("clustering", clusters)

        table = build_event_table(clusters, documents)
        hook("event_table", table)

        events = identify_main_events(table, clusters, documents)
        events = attach_sub_events(events, table, clusters)
        hook("events", events)

        indices = build_indices(events)
        hook("indexing", indices)

        try:
            ranking = self.ranking(table, documents)
        except EmptyCorpus as e:
            warnings.warn(RankingWarning(f"Nothing to rank: {e}"))
            ranking = []
        hook("ranking", ranking)

        evaluation = scored_clustering(clusters, loose_features=self.loose_features)
        hook("evaluation", evaluation)

        return EventExtractionOutput(
            documents=documents,
            segments=segments,
            clusters=clusters,
            table=table,
            events=events,
            indices=indices,
            ranking=ranking,
            evaluation=evaluation,
        )
