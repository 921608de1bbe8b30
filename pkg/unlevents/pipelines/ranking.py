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

"""Event ranking pipeline"""

import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional, Sequence, Text, Tuple

import pandas as pd
from pyannote.pipeline.parameter import Uniform

from unlevents.core.io import EmptyCorpus, UnlDocument
from unlevents.core.pipeline import Pipeline
from unlevents.pipelines.event_identification import EventTable
from unlevents.pipelines.utils.scoring import EVENT

DEFAULT_WEIGHTS = (1.0, 1.0, 3.0)


class RankingWarning(UserWarning):
    ...


@dataclass(frozen=True)
class RankedEvent:
    event_name: Text
    doc_count: int
    total_frequency: int
    title_count: int
    score: float
    rank: int = 0


def title_hits(event: Text, documents: Iterable[UnlDocument]) -> int:
    """Number of documents whose title mentions `event`"""
    event = event.casefold()
    return sum(
        any(concept.headword.casefold() == event for concept in document.title_concepts)
        for document in documents
    )


def check_weights(weights: Sequence[float]) -> Tuple[float, float, float]:
    if len(weights) != 3:
        raise ValueError(
            f"weights must be (df, tf, title) weights (got {len(weights)} values)."
        )
    if any(w <= 0 or not math.isfinite(w) for w in weights):
        raise ValueError(f"weights must be strictly positive (are {list(weights)}).")
    return tuple(float(w) for w in weights)


def rank_events(
    table: EventTable,
    documents: Sequence[UnlDocument],
    weights: Sequence[float] = DEFAULT_WEIGHTS,
    idf: bool = False,
) -> List[RankedEvent]:
    """Rank main events

    score = w_df * doc_count + w_tf * total_frequency + w_title * title_count

    Parameters
    ----------
    table : EventTable
        Output of `build_event_table`. Only event nodes are ranked.
    documents : list of UnlDocument
        Whole corpus, used for title hits.
    weights : (w_df, w_tf, w_title) tuple, optional
        Strictly positive weights. Defaults to (1, 1, 3).
    idf : bool, optional
        Use w_df * log(num_documents / doc_count) as first term, favoring
        events reported by few documents. Defaults to False.

    Returns
    -------
    ranking : list of RankedEvent
        By decreasing score, ties broken by event name. Ranks start at 1.

    Raises
    ------
    EmptyCorpus
        When there is no main event to rank.
    """

    w_df, w_tf, w_title = check_weights(weights)

    entries = [entry for entry in table.values() if entry.head.is_a(EVENT)]
    if not entries:
        raise EmptyCorpus("there is no main event to rank.")

    documents = list(documents)
    num_documents = max(
        [len(documents)] + [len(entry.doc_ids) for entry in entries]
    )

    unranked = []
    for entry in entries:
        event_name = entry.head.headword
        doc_count = len(entry.doc_ids)
        title_count = title_hits(event_name, documents)
        df = math.log(num_documents / doc_count) if idf else doc_count
        unranked.append(
            RankedEvent(
                event_name=event_name,
                doc_count=doc_count,
                total_frequency=entry.frequency,
                title_count=title_count,
                score=w_df * df + w_tf * entry.frequency + w_title * title_count,
            )
        )

    unranked.sort(key=lambda event: (-event.score, event.event_name))
    return [
        RankedEvent(**{**asdict(event), "rank": rank})
        for rank, event in enumerate(unranked, 1)
    ]


def ranking_to_tsv(ranking: Iterable[RankedEvent]) -> Text:
    columns = ["rank", "event", "score", "doc_count", "total_frequency", "title_count"]
    rows = [
        [e.rank, e.event_name, e.score, e.doc_count, e.total_frequency, e.title_count]
        for e in ranking
    ]
    return pd.DataFrame(rows, columns=columns).to_csv(
        sep="\t", index=False, float_format="%.4f"
    )


class EventRanking(Pipeline):
    """Event ranking

    Parameters
    ----------
    idf : bool, optional
        Use inverse document frequency instead of document count.
        Defaults to False.

    Hyper-parameters
    ----------------
    w_df, w_tf, w_title : float in range ]0.0, 10.0]
        Weights of document count, total frequency and title hits.
    """

    def __init__(self, idf: bool = False):
        super().__init__()
        self.idf = idf
        self.w_df = Uniform(0.0, 10.0)
        self.w_tf = Uniform(0.0, 10.0)
        self.w_title = Uniform(0.0, 10.0)

    def default_parameters(self):
        w_df, w_tf, w_title = DEFAULT_WEIGHTS
        return {"w_df": w_df, "w_tf": w_tf, "w_title": w_title}

    @property
    def weights(self) -> Tuple[float, float, float]:
        return self.w_df, self.w_tf, self.w_title

    def check_parameters(self):
        check_weights(self.weights)

    def apply(
        self, table: EventTable, documents: Optional[Sequence[UnlDocument]] = None
    ) -> List[RankedEvent]:
        return rank_events(table, documents or [], weights=self.weights, idf=self.idf)
