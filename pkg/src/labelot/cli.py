"""Command-line entry points for the assignment engine.

Experiment subcommands (assign, nn, omit, costs) take a single JSON config
file describing corpus, labels, provider, cost kind, schedule, solver and
mode; metrics scores an existing clustering file. serve, fixture and
stub-embedder support interactive use and testing.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .assignment import Clustering, read_clustering
from .corpus import load_corpus
from .errors import InputError, LabelotError
from .harness import ExperimentConfig, build_costs, run_assign, run_label_omission, run_nn_baseline
from .matio import write_matrix
from .metrics import evaluate


def _load_config(config_path: str, output_dir: str | None) -> ExperimentConfig:
    config = ExperimentConfig.from_json(config_path)
    if output_dir is not None:
        config = ExperimentConfig(
            **{**config.__dict__, "output_dir": str(Path(output_dir).resolve())}
        )
    return config


def _echo_metrics(metrics) -> None:
    if metrics is None:
        click.echo("metrics: skipped (no gold labels in corpus)")
        return
    for key, value in metrics.to_dict().items():
        click.echo(f"{key}={value}")


@click.group()
def main() -> None:
    """Label-guided topic assignment via optimal transport."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_dir", default=None, help="override the config output_dir")
def assign(config_path: str, output_dir: str | None) -> None:
    """Run the full pipeline in the configured mode."""
    try:
        config = _load_config(config_path, output_dir)
        output = run_assign(config)
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    n = len(output.clustering.assignments)
    assigned = len(output.clustering.assigned_ids())
    click.echo(f"assigned {assigned}/{n} documents across {len(output.label_ids)} labels")
    _echo_metrics(output.metrics)
    if config.output_dir:
        click.echo(f"artifacts: {config.output_dir}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_dir", default=None)
def nn(config_path: str, output_dir: str | None) -> None:
    """Greedy nearest-label baseline over the same costs."""
    try:
        config = _load_config(config_path, output_dir)
        output = run_nn_baseline(config)
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"assigned {len(output.clustering.assignments)} documents greedily")
    _echo_metrics(output.metrics)
    if config.output_dir:
        click.echo(f"artifacts: {config.output_dir}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_dir", default=None)
def omit(config_path: str, output_dir: str | None) -> None:
    """Label-omission protocol: drop a label, assign partially, evaluate."""
    try:
        config = _load_config(config_path, output_dir)
        report = run_label_omission(config)
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    for run in report["runs"]:
        m = run["metrics"]
        line = f"omitted={run['omitted_label']} p={run['p']:.4f}"
        if m:
            line += f" p1={m['p1']:.4f} assigned_fraction={m['assigned_fraction']:.4f}"
        click.echo(line)
    if report["mean"]:
        click.echo("mean: " + json.dumps(report["mean"]))


@main.command()
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--gold", "gold_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="gold clustering JSONL")
@click.option("--corpus", "corpus_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="corpus JSONL carrying gold_label fields")
def metrics(pred_path: str, gold_path: str | None, corpus_path: str | None) -> None:
    """Score a clustering file against gold labels."""
    if (gold_path is None) == (corpus_path is None):
        raise click.ClickException("pass exactly one of --gold or --corpus")
    try:
        pred = read_clustering(pred_path)
        if corpus_path is not None:
            gold_map = {d.id: d.gold_label for d in load_corpus(corpus_path) if d.gold_label}
        else:
            gold_map = {
                k: v for k, v in read_clustering(gold_path).assignments.items() if v is not None
            }
        if not gold_map:
            raise InputError("gold side has no labeled documents")
        missing = set(gold_map) - set(pred.assignments)
        if missing:
            raise InputError(f"prediction is missing {len(missing)} gold documents")
        pred_sub = Clustering({i: pred.assignments[i] for i in gold_map})
        report = evaluate(pred_sub, Clustering(gold_map))
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(report.to_dict(), indent=2))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def costs(config_path: str, out_path: str) -> None:
    """Build the cost matrix only and write it as a matrix file."""
    try:
        config = ExperimentConfig.from_json(config_path)
        docs = load_corpus(config.corpus)
        from .corpus import load_labels

        specs = load_labels(config.labels)
        cost = build_costs(config, docs, specs)
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    write_matrix(out_path, cost.values)
    click.echo(f"wrote {cost.rows}x{cost.cols} cost matrix to {out_path}")


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--port", default=None, type=int)
@click.option("--data-dir", default=None, type=click.Path(file_okay=False))
def serve(config_path: str | None, port: int | None, data_dir: str | None) -> None:
    """Start the HTTP session service."""
    import uvicorn

    from .service import build_store, create_app, load_service_config

    try:
        settings = load_service_config(config_path)
    except (LabelotError, OSError) as exc:
        raise click.ClickException(str(exc))
    if port is not None:
        settings["port"] = port
    if data_dir is not None:
        settings["data_dir"] = data_dir
    app = create_app(build_store(settings))
    uvicorn.run(app, host="127.0.0.1", port=settings["port"], log_level="warning")


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--docs", "n_docs", default=200, type=int)
@click.option("--clusters", "n_clusters", default=4, type=int)
@click.option("--dim", default=8, type=int)
@click.option("--separation", default=10.0, type=float)
@click.option("--seed", default=7, type=int)
def fixture(out_dir: str, n_docs: int, n_clusters: int, dim: int, separation: float, seed: int) -> None:
    """Generate the synthetic Gaussian-cluster corpus fixture."""
    from .fixtures import generate_fixture

    try:
        paths = generate_fixture(out_dir, n_docs, n_clusters, dim, separation, seed)
    except LabelotError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(paths, indent=2))


@main.command("stub-embedder")
@click.option("--map", "map_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--port", default=8041, type=int)
def stub_embedder(map_path: str, port: int) -> None:
    """Serve deterministic embeddings from a fixture map (testing only)."""
    import uvicorn

    from .fixtures import make_stub_app

    uvicorn.run(make_stub_app(map_path), host="127.0.0.1", port=port, log_level="warning")


if __name__ == "__main__":
    main()
