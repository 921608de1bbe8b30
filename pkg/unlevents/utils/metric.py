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

"""Silhouette evaluation of event clusters

Each clustered segment is a point on the real line (its mean similarity to
the other members of its cluster) and distances are absolute differences.
"""

from dataclasses import asdict, dataclass
from decimal import ROUND_DOWN, ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Text, Tuple, Union

import numpy as np
import pandas as pd
import yaml
from scipy.spatial.distance import cdist

from unlevents.utils.serialization import IoFailure

# (lower bound, band) pairs, by decreasing lower bound
QUALITY_BANDS = (
    (0.7, "excellent"),
    (0.5, "clear"),
    (0.25, "noisy"),
    (float("-inf"), "no-significant-centers"),
)

# scored points of six event clusters over multiple news articles
SAMPLE_CLUSTERING = {
    "1": [0.41, 0.46, 0.45],
    "2": [0.51, 0.52, 0.55, 0.57],
    "3": [0.66],
    "4": [0.70, 0.71, 0.72],
    "5": [0.82, 0.85, 0.80],
    "6": [0.91, 0.9],
}


class NegativeDistance(ValueError):
    ...


class SingleCluster(ValueError):
    """Raised when silhouette is requested with less than two clusters"""


class ScoredClustering:
    """Clusters of scored points

    Parameters
    ----------
    clusters : Mapping
        Cluster label to list of point values. Labels are kept in order.

    Usage
    -----
    >>> clustering = ScoredClustering({"1": [0.41, 0.46], "2": [0.66]})
    >>> mean_silhouette(clustering)
    """

    def __init__(self, clusters: Mapping[Any, Sequence[float]]):
        self.clusters: Dict[Text, np.ndarray] = dict()
        for label, values in clusters.items():
            values = np.asarray(values, dtype=float).reshape(-1)
            if len(values) == 0:
                raise ValueError(f"cluster {label} is empty.")
            if not np.all(np.isfinite(values)):
                raise ValueError(f"cluster {label} contains non-finite values.")
            self.clusters[str(label)] = values

    @classmethod
    def from_yaml(cls, path: Union[Text, Path]) -> "ScoredClustering":
        """Load clustering from a YAML mapping of cluster label to point values

        Raises
        ------
        IoFailure
            When `path` cannot be read.
        ValueError
            When `path` is not a YAML mapping of cluster label to values.
        """
        try:
            with open(path, "r", encoding="utf-8") as fp:
                clusters = yaml.load(fp, Loader=yaml.SafeLoader)
        except OSError as e:
            raise IoFailure(f"cannot read {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ValueError(f"{path} is not valid YAML: {e}") from e
        if not isinstance(clusters, Mapping):
            raise ValueError(f"{path} must contain a mapping of cluster label to values.")
        return cls(clusters)

    @property
    def labels(self) -> Tuple[Text, ...]:
        return tuple(self.clusters)

    def __iter__(self) -> Iterator[Tuple[Text, int, float]]:
        for label, values in self.clusters.items():
            for index, value in enumerate(values):
                yield label, index, float(value)

    def __len__(self) -> int:
        return sum(len(values) for values in self.clusters.values())

    def __repr__(self) -> Text:
        clusters = {label: values.tolist() for label, values in self.clusters.items()}
        return f"ScoredClustering({clusters})"


@dataclass(frozen=True)
class SilhouetteRow:
    """Silhouette of a single point

    `a` is the mean distance to the other points of its cluster (0 for
    singletons), `b` the mean distance to the nearest other cluster.
    """

    sample: float
    a: float
    b: float
    coefficient: float


def silhouette(a: float, b: float) -> float:
    """Silhouette coefficient (b - a) / max(a, b)

    Parameters
    ----------
    a : float
        Mean distance to the other points of the same cluster.
    b : float
        Mean distance to the points of the nearest other cluster.

    Returns
    -------
    s : float
        In [-1, 1]. 0 when both distances are 0.
    """
    if a < 0 or b < 0:
        raise NegativeDistance(f"distances must be non-negative (a={a}, b={b}).")
    denominator = max(a, b)
    if denominator == 0:
        return 0.0
    return (b - a) / denominator


def _distances(point: float, values: np.ndarray, metric: Text) -> np.ndarray:
    return cdist(np.array([[point]]), values.reshape(-1, 1), metric=metric)[0]


def point_silhouette(
    point: float,
    clustering: ScoredClustering,
    label: Optional[Text] = None,
    metric: Text = "cityblock",
) -> SilhouetteRow:
    """Silhouette of a single point

    Parameters
    ----------
    point : float
        Point value.
    clustering : ScoredClustering
        Clustering `point` belongs to.
    label : str, optional
        Label of the cluster `point` belongs to. Only needed when the same
        value appears in several clusters.
    metric : str, optional
        Any scipy.spatial.distance.cdist metric. Defaults to "cityblock",
        i.e. absolute difference.

    Returns
    -------
    row : SilhouetteRow
        Point, `a` and `b` distances and coefficient. The coefficient is 1
        for points of singleton clusters.
    """

    if len(clustering.clusters) < 2:
        raise SingleCluster("silhouette needs at least two clusters.")

    if label is None:
        owners = [l for l, values in clustering.clusters.items() if np.any(values == point)]
        if not owners:
            raise ValueError(f"{point} does not belong to any cluster.")
        if len(owners) > 1:
            raise ValueError(f"{point} belongs to clusters {owners}: use `label`.")
        label = owners[0]

    own = clustering.clusters[str(label)]
    matches = np.flatnonzero(own == point)
    if len(matches) == 0:
        raise ValueError(f"{point} does not belong to cluster {label}.")
    others = np.delete(own, matches[0])

    a = float(np.mean(_distances(point, others, metric))) if len(others) else 0.0
    b = min(
        float(np.mean(_distances(point, values, metric)))
        for other, values in clustering.clusters.items()
        if other != str(label)
    )
    return SilhouetteRow(sample=float(point), a=a, b=b, coefficient=silhouette(a, b))


def silhouette_samples(
    clustering: ScoredClustering, metric: Text = "cityblock"
) -> pd.DataFrame:
    """Silhouette coefficient of every point

    Returns
    -------
    samples : pd.DataFrame
        One row per point, with "cluster", "point", "a", "b" and
        "coefficient" columns.
    """

    labels = list(clustering.clusters)
    num_clusters = len(labels)
    if num_clusters < 2:
        raise SingleCluster("silhouette needs at least two clusters.")

    values = np.concatenate(list(clustering.clusters.values()))
    cluster_idx = np.concatenate(
        [np.full(len(v), k) for k, v in enumerate(clustering.clusters.values())]
    )
    num_points = len(values)

    distance = cdist(values.reshape(-1, 1), values.reshape(-1, 1), metric=metric)

    # (num_points, num_clusters) sum of distances to each cluster
    membership = (cluster_idx[:, np.newaxis] == np.arange(num_clusters)).astype(float)
    sums = distance @ membership
    sizes = membership.sum(axis=0)

    points = np.arange(num_points)
    own_size = sizes[cluster_idx]
    a = np.where(
        own_size > 1, sums[points, cluster_idx] / np.maximum(own_size - 1, 1), 0.0
    )

    means = sums / sizes
    means[points, cluster_idx] = np.inf
    b = np.min(means, axis=1)

    rows = [
        SilhouetteRow(
            sample=float(p), a=float(a_), b=float(b_), coefficient=silhouette(a_, b_)
        )
        for p, a_, b_ in zip(values, a, b)
    ]

    samples = pd.DataFrame([asdict(row) for row in rows])
    samples = samples.rename(columns={"sample": "point"})
    samples.insert(0, "cluster", [labels[k] for k in cluster_idx])
    return samples


def mean_silhouette(clustering: ScoredClustering, metric: Text = "cityblock") -> float:
    return float(silhouette_samples(clustering, metric=metric)["coefficient"].mean())


def quality_band(s: float) -> Text:
    """Interpretation of a (mean) silhouette coefficient"""
    for lower_bound, band in QUALITY_BANDS:
        if s >= lower_bound:
            return band
    return QUALITY_BANDS[-1][1]


@dataclass(frozen=True)
class ReferenceRow:
    point: float
    a: float
    b: float
    printed: Text


# published (point, a, b, coefficient) rows for multiple news articles
REFERENCE_TABLE = (
    ReferenceRow(0.45, 0.025, 0.093, "0.731"),
    ReferenceRow(0.57, 0.036, 0.045, "0.2"),
    ReferenceRow(0.66, 0.0, 0.62, "1"),
    ReferenceRow(0.72, 0.02, 0.06, "0.66"),
    ReferenceRow(0.82, 0.02, 0.1, "0.8"),
    ReferenceRow(0.91, 0.05, 0.09, "0.8"),
)


def agrees_with_printed(computed: float, printed: Text, tolerance: float = 0.005) -> bool:
    """Whether `computed` matches a coefficient printed with limited precision

    Agreement means being within `tolerance`, or rounding or truncating to
    the printed digits.
    """
    if abs(computed - float(printed)) <= tolerance:
        return True
    printed = Decimal(printed)
    exponent = Decimal(1).scaleb(printed.as_tuple().exponent)
    value = Decimal(repr(computed))
    return printed in (
        value.quantize(exponent, rounding=ROUND_HALF_UP),
        value.quantize(exponent, rounding=ROUND_DOWN),
    )


def check_reference_table(rows: Sequence[ReferenceRow] = REFERENCE_TABLE) -> pd.DataFrame:
    """Recompute published coefficients from their (a, b) distances"""
    computed = [silhouette(row.a, row.b) for row in rows]
    return pd.DataFrame(
        {
            "point": [row.point for row in rows],
            "a": [row.a for row in rows],
            "b": [row.b for row in rows],
            "printed": [row.printed for row in rows],
            "computed": computed,
            "consistent": [
                agrees_with_printed(c, row.printed) for c, row in zip(computed, rows)
            ],
        }
    )


def silhouette_report(clustering: Optional[ScoredClustering]) -> Text:
    """Tab-separated per-point silhouette report

    Per-point rows are followed by "#"-prefixed summary lines (mean
    coefficient and quality band) and by the reference table check.
    """

    lines = []
    if clustering is not None and len(clustering.clusters) >= 2:
        samples = silhouette_samples(clustering)
        lines.append(samples.to_csv(sep="\t", index=False, float_format="%.3f").rstrip("\n"))
        mean = float(samples["coefficient"].mean())
        lines.append(f"# mean\t{mean:.3f}")
        lines.append(f"# band\t{quality_band(mean)}")
    else:
        lines.append("# silhouette undefined: less than two clusters")

    lines.append(reference_report())
    return "\n".join(lines) + "\n"


def reference_report() -> Text:
    lines = ["# reference\tpoint\ta\tb\tprinted\tcomputed\tstatus"]
    for row in check_reference_table().itertuples(index=False):
        status = "ok" if row.consistent else "inconsistent: printed coefficient disagrees with (b - a) / max(a, b)"
        lines.append(
            f"# reference\t{row.point:g}\t{row.a:g}\t{row.b:g}\t{row.printed}\t{row.computed:.3f}\t{status}"
        )
    return "\n".join(lines)


def silhouette_curve(clustering: ScoredClustering) -> Text:
    """Comma-separated (point, coefficient) pairs, sorted by point"""
    samples = silhouette_samples(clustering)[["point", "coefficient"]]
    samples = samples.sort_values(["point", "coefficient"], kind="mergesort")
    return samples.to_csv(index=False, float_format="%.3f")
