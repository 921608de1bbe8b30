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

"""Pair scoring

Scores are kept as integer tenths so that threshold comparisons are exact:
0.5 + 0.2 + 0.2 is 9 tenths, never 0.8999999999999999.
"""

from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Iterable, Protocol, Sequence, Set, Text

from unlevents.core.io import Concept

# weights, in tenths
EVENT_WEIGHT = 5
ACTION_WEIGHT = 4
PLACE_WEIGHT = 2
PERSON_WEIGHT = 2
DURATION_WEIGHT = 1
CONJUNCTION_WEIGHT = 1

EVENT = "event"
ACTION = "action"
PERSON = "person"
PLACE = "place"
TIME = "time"

CONJUNCTIONS = ("and", "or")
TIME_RELATIONS = ("tim", "dur")


class Scorable(Protocol):
    heads: Sequence[Concept]
    persons: Sequence[Concept]
    places: Sequence[Concept]
    has_duration: bool


@dataclass(frozen=True)
class PairScore:
    """Similarity between two sentences or two segments, in tenths"""

    condition: int = 0
    feature: int = 0
    conjunction: int = 0

    @property
    def total(self) -> int:
        return self.condition + self.feature + self.conjunction

    @property
    def value(self) -> float:
        return self.total / 10

    def exceeds(self, threshold: float) -> bool:
        """Strict, exact comparison with a decimal threshold"""
        return self.total > to_tenths(threshold)

    def __float__(self) -> float:
        return self.value


def to_tenths(threshold: float) -> Decimal:
    return Decimal(str(threshold)) * 10


def check_threshold(threshold: float, name: Text = "threshold") -> None:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"{name} must be in [0, 1] (is {threshold}).")


def is_head_candidate(concept: Concept) -> bool:
    return concept.is_a(EVENT) or concept.is_a(ACTION)


def headwords(concepts: Iterable[Concept]) -> Set[Text]:
    return {concept.headword for concept in concepts}


def condition_score(heads_a: Iterable[Concept], heads_b: Iterable[Concept]) -> int:
    """Shared head node: event (0.5) wins over action (0.4)"""
    shared = {c.key for c in heads_a} & {c.key for c in heads_b}
    constraints = {constraint for _, constraint in shared}
    if ("icl", EVENT) in constraints:
        return EVENT_WEIGHT
    if ("icl", ACTION) in constraints:
        return ACTION_WEIGHT
    return 0


def feature_score(a: Scorable, b: Scorable) -> int:
    score = 0
    if headwords(a.places) & headwords(b.places):
        score += PLACE_WEIGHT
    if headwords(a.persons) & headwords(b.persons):
        score += PERSON_WEIGHT
    if a.has_duration and b.has_duration:
        score += DURATION_WEIGHT
    return score


def similarity(
    a: Scorable, b: Scorable, loose_features: bool = False
) -> PairScore:
    """Condition and feature scores between `a` and `b`

    Features only count once a head node is shared, unless `loose_features`.
    """
    condition = condition_score(a.heads, b.heads)
    feature = feature_score(a, b) if condition > 0 or loose_features else 0
    return PairScore(condition=condition, feature=feature)


def with_conjunction(score: PairScore, linked: bool) -> PairScore:
    return replace(score, conjunction=CONJUNCTION_WEIGHT if linked else 0)
