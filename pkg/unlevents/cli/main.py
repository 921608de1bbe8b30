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

"""unlevents command line interface

    unlevents run CORPUS_DIR --out-dir out/
    unlevents query person student --out-dir out/

`run` is equivalent to `segment`, `cluster`, `index`, `rank` and `eval`
called in that order on the same output directory.

Exit codes: 0 on success, 1 on malformed input, missing artifact or
invalid configuration, 2 on empty corpus, 3 when a query has no entries.
"""

from contextlib import contextmanager
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Annotated, Iterable, List, Optional, Sequence, Tuple

import typer
from rich.console import Console
from rich.markup import escape

from unlevents.cli.config import ConfigError, PipelineConfig, load_config, parse_weights
from unlevents.core.index import (
    EventIndex,
    KeyNotFound,
    build_indices,
    index_path,
    save_indices,
)
from unlevents.core.io import Corpus, EmptyCorpus, MalformedCorpus, UnlDocument
from unlevents.pipelines import EventClustering, EventExtraction, EventRanking, EventSegmentation
from unlevents.pipelines.clustering import (
    EventCluster,
    emit_match_log,
    load_clusters,
    save_clusters,
    scored_clustering,
)
from unlevents.pipelines.event_identification import (
    EventTable,
    attach_sub_events,
    build_event_table,
    identify_main_events,
)
from unlevents.pipelines.ranking import RankedEvent, ranking_to_tsv
from unlevents.pipelines.segmentation import Segment, load_segments, save_segments
from unlevents.pipelines.utils.hook import ArtifactHook, Hooks, ProgressHook
from unlevents.utils.metric import (
    ScoredClustering,
    reference_report,
    silhouette_curve,
    silhouette_report,
)
from unlevents.utils.reproducibility import file_digests, update_manifest
from unlevents.utils.serialization import (
    FormatVersionMismatch,
    IoFailure,
    MissingArtifact,
    require,
    write_text,
)

SEGMENTS = "segments.jsonl"
CLUSTERS = "clusters.jsonl"
MATCHES = "matches.txt"
RANKING = "ranking.tsv"
EVALUATION = "eval.tsv"
CURVE = "fig8.csv"

EXIT_FAILURE = 1
EXIT_EMPTY_CORPUS = 2
EXIT_NO_ENTRIES = 3

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Event extraction, indexing and ranking over UNL news corpora.",
)

console = Console(stderr=True)


class IndexKind(str, Enum):
    person = "person"
    place = "place"
    event = "event"


CorpusArgument = Annotated[
    Path, typer.Argument(help="Directory of UNL documents, one file per document.")
]
OutDirOption = Annotated[
    Path, typer.Option("--out-dir", "-o", help="Directory where artifacts are written.")
]
ConfigOption = Annotated[
    Optional[Path], typer.Option("--config", help="YAML configuration file.")
]
ThresholdOption = Annotated[
    Optional[float],
    typer.Option("--threshold", help="Segmentation and clustering threshold in [0, 1]."),
]
WeightsOption = Annotated[
    Optional[str],
    typer.Option("--weights", help="Ranking weights as 'df,tf,title', e.g. '1,1,3'."),
]
IdfOption = Annotated[
    bool, typer.Option("--idf", help="Rank with inverse document frequency.")
]
LooseFeaturesOption = Annotated[
    bool,
    typer.Option(
        "--loose-features",
        help="Score place, person and duration even when no head node is shared.",
    ),
]
KeepSingletonsOption = Annotated[
    bool, typer.Option("--keep-singletons", help="Keep one-member clusters.")
]
VerbatimOption = Annotated[
    bool,
    typer.Option(
        "--verbatim-fig2", help="Write the match log with its historical spelling."
    ),
]
CurveOption = Annotated[
    bool, typer.Option("--fig8", help="Also write (point, coefficient) pairs to fig8.csv.")
]


@contextmanager
def exit_codes():
    """Turn library exceptions into diagnostics and exit codes"""
    try:
        yield

    except MalformedCorpus as e:
        for name, error in e.errors.items():
            console.print(f"[red]malformed[/red] {escape(name)}: {escape(str(error))}")
        raise typer.Exit(EXIT_FAILURE)

    except EmptyCorpus as e:
        console.print(f"[red]empty corpus:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_EMPTY_CORPUS)

    except KeyNotFound:
        typer.echo("no entries", err=True)
        raise typer.Exit(EXIT_NO_ENTRIES)

    except (MissingArtifact, FormatVersionMismatch, IoFailure, ConfigError, ValueError) as e:
        console.print(f"[red]error:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_FAILURE)


def resolve_config(
    config_file: Optional[Path],
    threshold: Optional[float],
    weights: Optional[str],
    idf: bool,
    loose_features: bool,
    keep_singletons: bool,
    verbatim_fig2: bool,
    fig8: bool,
) -> PipelineConfig:
    return load_config(
        config_file,
        threshold=threshold,
        weights=None if weights is None else parse_weights(weights),
        # flags can only switch options on
        idf=idf or None,
        loose_features=loose_features or None,
        keep_singletons=keep_singletons or None,
        verbatim_fig2=verbatim_fig2 or None,
        fig8=fig8 or None,
    )


def load_corpus(corpus_dir: Path) -> Tuple[List[UnlDocument], dict]:
    documents = Corpus()(corpus_dir)
    if not documents:
        raise EmptyCorpus(f"{corpus_dir} holds no document.")
    digests = file_digests(Corpus.list_files(corpus_dir))
    return documents, digests


def prepare(out_dir: Path) -> Path:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoFailure(f"cannot create {out_dir}: {e}") from e
    return out_dir


def load_artifacts(out_dir: Path) -> Tuple[List[Segment], List[EventCluster]]:
    segments = load_segments(require(out_dir / SEGMENTS))
    clusters = load_clusters(require(out_dir / CLUSTERS), segments)
    return segments, clusters


def write_segments(out_dir: Path, segments: Iterable[Segment]):
    save_segments(out_dir / SEGMENTS, segments)


def write_clusters(out_dir: Path, clusters: Sequence[EventCluster], config: PipelineConfig):
    save_clusters(out_dir / CLUSTERS, clusters)
    write_text(out_dir / MATCHES, emit_match_log(clusters, verbatim=config.verbatim_fig2))


def write_indices(out_dir: Path, indices: Sequence[EventIndex]):
    save_indices(indices, out_dir)


def write_ranking(out_dir: Path, ranking: Sequence[RankedEvent]):
    write_text(out_dir / RANKING, ranking_to_tsv(ranking))


def write_evaluation(out_dir: Path, evaluation: ScoredClustering, config: PipelineConfig):
    write_text(out_dir / EVALUATION, silhouette_report(evaluation))
    if config.fig8:
        if len(evaluation.clusters) < 2:
            console.print("[yellow]fig8.csv skipped: less than two clusters[/yellow]")
        else:
            write_text(out_dir / CURVE, silhouette_curve(evaluation))


def events_from(
    documents: Sequence[UnlDocument], clusters: Sequence[EventCluster]
) -> Tuple[EventTable, list]:
    table = build_event_table(clusters, documents)
    events = identify_main_events(table, clusters, documents)
    return table, attach_sub_events(events, table, clusters)


@app.command()
def run(
    corpus_dir: CorpusArgument,
    out_dir: OutDirOption = Path("out"),
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Run every stage, from UNL documents to indices, ranking and evaluation."""

    with exit_codes():
        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        documents, digests = load_corpus(corpus_dir)

        pipeline = EventExtraction(
            loose_features=config.loose_features,
            keep_singletons=config.keep_singletons,
            idf=config.idf,
        )
        pipeline.instantiate(config.parameters())

        prepare(out_dir)
        writers = {
            "segments": partial(write_segments, out_dir),
            "clustering": partial(write_clusters, out_dir, config=config),
            "indexing": partial(write_indices, out_dir),
            "ranking": partial(write_ranking, out_dir),
            "evaluation": partial(write_evaluation, out_dir, config=config),
        }
        with Hooks(
            ProgressHook(transient=True, console=console), ArtifactHook(writers)
        ) as hook:
            output = pipeline({"documents": documents, "uri": corpus_dir.name}, hook=hook)

        update_manifest(out_dir, config.to_dict(), digests)

    console.print(
        f"{len(output.documents)} documents, {len(output.segments)} segments, "
        f"{len(output.clusters)} clusters, {len(output.events)} main events"
    )


@app.command()
def segment(
    corpus_dir: CorpusArgument,
    out_dir: OutDirOption = Path("out"),
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Split every document into event segments."""

    with exit_codes():
        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        documents, digests = load_corpus(corpus_dir)

        segmentation = EventSegmentation(loose_features=config.loose_features)
        segmentation.instantiate(config.parameters()["segmentation"])
        segments = [s for document in documents for s in segmentation(document)]

        write_segments(prepare(out_dir), segments)
        update_manifest(out_dir, config.to_dict(), digests)


@app.command()
def cluster(
    out_dir: OutDirOption = Path("out"),
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Cluster segments across documents and write the match log."""

    with exit_codes():
        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        segments = load_segments(require(out_dir / SEGMENTS))

        clustering = EventClustering(
            keep_singletons=config.keep_singletons,
            loose_features=config.loose_features,
        )
        clustering.instantiate(config.parameters()["clustering"])

        write_clusters(out_dir, clustering(segments), config)
        update_manifest(out_dir, config.to_dict())


@app.command()
def index(
    corpus_dir: CorpusArgument,
    out_dir: OutDirOption = Path("out"),
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Build person, place and event indices."""

    with exit_codes():
        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        documents, digests = load_corpus(corpus_dir)
        _, clusters = load_artifacts(out_dir)

        _, events = events_from(documents, clusters)
        write_indices(out_dir, build_indices(events))
        update_manifest(out_dir, config.to_dict(), digests)


@app.command()
def rank(
    corpus_dir: CorpusArgument,
    out_dir: OutDirOption = Path("out"),
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Rank main events."""

    with exit_codes():
        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        documents, digests = load_corpus(corpus_dir)
        _, clusters = load_artifacts(out_dir)

        table = build_event_table(clusters, documents)
        ranking = EventRanking(idf=config.idf)
        ranking.instantiate(config.parameters()["ranking"])
        try:
            ranked = ranking(table, documents)
        except EmptyCorpus as e:
            console.print(f"[yellow]nothing to rank:[/yellow] {escape(str(e))}")
            ranked = []

        write_ranking(out_dir, ranked)
        update_manifest(out_dir, config.to_dict(), digests)

    typer.echo(ranking_to_tsv(ranked), nl=False)


@app.command(name="eval")
def evaluate(
    out_dir: OutDirOption = Path("out"),
    table1: Annotated[
        bool,
        typer.Option("--table1", help="Only check published silhouette coefficients."),
    ] = False,
    points: Annotated[
        Optional[Path],
        typer.Option("--points", help="Evaluate a YAML clustering of scored points instead."),
    ] = None,
    config_file: ConfigOption = None,
    threshold: ThresholdOption = None,
    weights: WeightsOption = None,
    idf: IdfOption = False,
    loose_features: LooseFeaturesOption = False,
    keep_singletons: KeepSingletonsOption = False,
    verbatim_fig2: VerbatimOption = False,
    fig8: CurveOption = False,
):
    """Silhouette evaluation of event clusters."""

    with exit_codes():
        if table1:
            typer.echo(reference_report())
            return

        if points is not None:
            clustering = ScoredClustering.from_yaml(points)
            typer.echo(silhouette_report(clustering), nl=False)
            if fig8:
                typer.echo(silhouette_curve(clustering), nl=False)
            return

        config = resolve_config(
            config_file, threshold, weights, idf, loose_features,
            keep_singletons, verbatim_fig2, fig8,
        )
        _, clusters = load_artifacts(out_dir)

        evaluation = scored_clustering(clusters, loose_features=config.loose_features)
        write_evaluation(out_dir, evaluation, config)
        update_manifest(out_dir, config.to_dict())


@app.command()
def query(
    kind: Annotated[IndexKind, typer.Argument(help="Index to query.")],
    key: Annotated[str, typer.Argument(help="Person, place or event headword.")],
    out_dir: OutDirOption = Path("out"),
):
    """Print index entries for KEY as tab-separated values."""

    with exit_codes():
        path = require(index_path(out_dir, kind.value))
        index = EventIndex.load(path, kind.value)
        entries = index.query(key)

    typer.echo(index.to_tsv(entries), nl=False)


def main():
    app()


if __name__ == "__main__":
    main()
