"""End-to-end experiment driver: costs -> batched assignment -> hardening ->
evaluation, with artifacts written under a run directory.

Three protocols are exposed: plain assignment (complete or partial), the
greedy nearest-label baseline, and the label-omission robustness protocol
that drops one gold label and runs partial assignment with p matching the
surviving fraction of documents.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assignment import (
    UNASSIGNED,
    BatchSchedule,
    Clustering,
    batched_complete_assign,
    batched_partial_assign,
    harden_complete,
    harden_partial,
    write_clustering,
)
from .corpus import Document, LabelSpec, load_corpus, load_labels, render_label
from .costs import EmbeddingMatrix, ScoreMatrix, ce_costs, l2_costs, seed_doc_label_embeddings
from .errors import ConfigError, EvaluationError, LabelotError
from .matio import read_matrix, write_matrix
from .metrics import MetricsReport, evaluate
from .providers import ProviderConfig, fetch_embeddings
from .transport import CostMatrix, SolverConfig, TransportPlan

COST_KINDS = ("l2", "ce", "seed-doc")


@dataclass(frozen=True)
class OmissionSpec:
    """Label-omission protocol parameters.

    labels: explicit label ids to drop, one run each; when None, `repeats`
    labels are drawn seeded-randomly (without replacement) from the top_k
    most frequent gold labels.
    """

    repeats: int = 3
    seed: int = 0
    top_k: int = 5
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.repeats < 1:
            raise ConfigError(f"omission repeats must be >= 1, got {self.repeats!r}")
        if self.top_k < 1:
            raise ConfigError(f"omission top_k must be >= 1, got {self.top_k!r}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one run needs; loadable from a single JSON file.

    provider maps "documents" and optionally "labels" to provider configs;
    the labels provider is needed only for cost="l2". cost="ce" instead
    reads a score matrix from `scores`; cost="seed-doc" derives label
    vectors from each label's seed documents (first `seed_k` of them).
    """

    corpus: str
    labels: str
    cost: str = "l2"
    provider: dict = field(default_factory=dict)
    scores: str | None = None
    seed_k: int = 5
    schedule: BatchSchedule = field(default_factory=BatchSchedule)
    solver: SolverConfig = field(default_factory=SolverConfig)
    mode: str = "complete"
    p: float | None = None
    omission: OmissionSpec = field(default_factory=OmissionSpec)
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.cost not in COST_KINDS:
            raise ConfigError(f"cost must be one of {COST_KINDS}, got {self.cost!r}")
        if self.mode not in ("complete", "partial"):
            raise ConfigError(f"mode must be 'complete' or 'partial', got {self.mode!r}")
        if self.mode == "partial":
            if self.p is None or not 0 < self.p <= 1:
                raise ConfigError(f"partial mode requires p in (0, 1], got {self.p!r}")
        elif self.p is not None:
            raise ConfigError("complete mode takes no p; use mode='partial'")
        if self.solver.mass_p is not None:
            raise ConfigError("set the transported fraction via top-level 'p', not solver.mass_p")
        if self.cost == "ce" and not self.scores:
            raise ConfigError("cost 'ce' requires a 'scores' matrix path")
        if self.cost in ("l2", "seed-doc") and "documents" not in self.provider:
            raise ConfigError(f"cost {self.cost!r} requires a 'documents' provider")
        if self.cost == "l2" and "labels" not in self.provider:
            raise ConfigError("cost 'l2' requires a 'labels' provider")

    @classmethod
    def from_dict(cls, obj: dict, base_dir: str | Path | None = None) -> "ExperimentConfig":
        known = {
            "corpus", "labels", "cost", "provider", "scores", "seed_k",
            "schedule", "solver", "mode", "p", "omission", "output_dir",
        }
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"config has unknown fields {sorted(unknown)}")
        for req in ("corpus", "labels"):
            if req not in obj:
                raise ConfigError(f"config requires {req!r}")
        base = Path(base_dir) if base_dir is not None else None

        def resolve(p: str | None) -> str | None:
            if p is None or base is None:
                return p
            return str((base / p).resolve()) if not Path(p).is_absolute() else p

        provider = {}
        for key, sub in obj.get("provider", {}).items():
            if key not in ("documents", "labels"):
                raise ConfigError(f"provider section has unknown key {key!r}")
            sub = dict(sub)
            if sub.get("path"):
                sub["path"] = resolve(sub["path"])
            if sub.get("cache_dir"):
                sub["cache_dir"] = resolve(sub["cache_dir"])
            provider[key] = ProviderConfig.from_dict(sub)
        return cls(
            corpus=resolve(obj["corpus"]),
            labels=resolve(obj["labels"]),
            cost=obj.get("cost", "l2"),
            provider=provider,
            scores=resolve(obj.get("scores")),
            seed_k=obj.get("seed_k", 5),
            schedule=BatchSchedule(**obj.get("schedule", {})),
            solver=SolverConfig(**obj.get("solver", {})),
            mode=obj.get("mode", "complete"),
            p=obj.get("p"),
            omission=OmissionSpec(**obj.get("omission", {})),
            output_dir=resolve(obj.get("output_dir")),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {path}: invalid JSON ({exc.msg})") from exc
        return cls.from_dict(obj, base_dir=path.parent)


@dataclass(frozen=True)
class RunOutput:
    """What a pipeline run produced; plan is None for the greedy baseline."""

    clustering: Clustering
    metrics: MetricsReport | None
    plan: TransportPlan | None
    doc_ids: tuple[str, ...]
    label_ids: tuple[str, ...]


@contextmanager
def _stage(name: str):
    """Re-raise engine errors annotated with the pipeline stage that failed."""
    try:
        yield
    except LabelotError as exc:
        raise type(exc)(f"[stage: {name}] {exc}") from exc


@dataclass(frozen=True)
class CostInputs:
    """Raw per-label ingredients, acquired once over the full label set.

    Dropping labels later only subsets these (embedding rows or score
    columns); per-document renormalization of ce costs then happens over the
    surviving labels, matching a run that never saw the dropped label.
    """

    kind: str
    doc_vectors: EmbeddingMatrix | None = None
    label_vectors: EmbeddingMatrix | None = None
    scores: ScoreMatrix | None = None


def acquire_cost_inputs(
    config: ExperimentConfig, docs: list[Document], specs: list[LabelSpec]
) -> CostInputs:
    """Fetch or load whatever the configured cost kind needs, label-complete."""
    if config.cost == "ce":
        with _stage("scores"):
            scores = ScoreMatrix(read_matrix(config.scores))
            if scores.rows != len(docs) or scores.cols != len(specs):
                raise ConfigError(
                    f"score matrix is {scores.rows}x{scores.cols}, corpus needs {len(docs)}x{len(specs)}"
                )
        return CostInputs(kind="ce", scores=scores)
    with _stage("document embeddings"):
        doc_vectors = fetch_embeddings(
            [d.budgeted_text() for d in docs], config.provider["documents"]
        )
    if config.cost == "seed-doc":
        with _stage("seed-document label embeddings"):
            label_vectors = seed_doc_label_embeddings(
                doc_vectors, [d.id for d in docs], specs, k=config.seed_k
            )
    else:
        with _stage("label embeddings"):
            label_vectors = fetch_embeddings(
                [render_label(s) for s in specs], config.provider["labels"]
            )
    return CostInputs(kind=config.cost, doc_vectors=doc_vectors, label_vectors=label_vectors)


def cost_matrix_from_inputs(inputs: CostInputs, keep: list[int] | None = None) -> CostMatrix:
    """Cost matrix over all labels, or over the `keep` label indices only."""
    with _stage("costs"):
        if inputs.kind == "ce":
            values = inputs.scores.values
            if keep is not None:
                values = values[:, keep]
            return ce_costs(ScoreMatrix(values))
        label_values = inputs.label_vectors.values
        if keep is not None:
            label_values = label_values[keep]
        return l2_costs(inputs.doc_vectors, EmbeddingMatrix(label_values))


def build_costs(config: ExperimentConfig, docs: list[Document], specs: list[LabelSpec]) -> CostMatrix:
    """Cost matrix for the configured cost kind."""
    return cost_matrix_from_inputs(acquire_cost_inputs(config, docs, specs))


def _gold_subsets(pred: Clustering, docs: list[Document]) -> tuple[Clustering, Clustering] | None:
    """Restrict pred and gold to documents that carry a gold label."""
    gold_map = {d.id: d.gold_label for d in docs if d.gold_label is not None}
    if not gold_map:
        return None
    pred_sub = {i: pred.assignments[i] for i in gold_map}
    return Clustering(pred_sub), Clustering(gold_map)


def evaluate_against_gold(pred: Clustering, docs: list[Document]) -> MetricsReport | None:
    """Metrics over gold-labeled documents, or None when the corpus has no
    gold labels at all."""
    subsets = _gold_subsets(pred, docs)
    if subsets is None:
        return None
    with _stage("evaluation"):
        return evaluate(*subsets)


def _write_artifacts(out_dir: str | Path, output: RunOutput, extra: dict | None = None) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    if output.plan is not None:
        write_matrix(out / "plan.edtm", output.plan.values)
        paths["plan"] = str(out / "plan.edtm")
    write_clustering(output.clustering, out / "clustering.jsonl")
    paths["clustering"] = str(out / "clustering.jsonl")
    report: dict = {
        "n_documents": len(output.doc_ids),
        "n_labels": len(output.label_ids),
        "metrics": output.metrics.to_dict() if output.metrics else None,
    }
    if output.plan is not None:
        report["solver"] = {
            "converged": output.plan.converged,
            "iterations": output.plan.iterations,
            "residual": output.plan.residual,
        }
    if extra:
        report.update(extra)
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    paths["report"] = str(out / "report.json")
    return paths


def _assign_over(
    config: ExperimentConfig,
    cost: CostMatrix,
    docs: list[Document],
    specs: list[LabelSpec],
    mode: str,
    p: float | None,
) -> RunOutput:
    doc_ids = tuple(d.id for d in docs)
    label_ids = tuple(s.id for s in specs)
    if mode == "partial":
        cfg = SolverConfig(
            lam=config.solver.lam,
            max_iters=config.solver.max_iters,
            tolerance=config.solver.tolerance,
            mass_p=p,
        )
        with _stage("assignment"):
            plan = batched_partial_assign(cost, config.schedule, cfg)
        with _stage("hardening"):
            clustering = harden_partial(plan, p, doc_ids=doc_ids, label_ids=label_ids)
    else:
        with _stage("assignment"):
            plan = batched_complete_assign(cost, config.schedule, config.solver)
        with _stage("hardening"):
            clustering = harden_complete(plan, doc_ids=doc_ids, label_ids=label_ids)
    metrics = evaluate_against_gold(clustering, docs)
    return RunOutput(clustering, metrics, plan, doc_ids, label_ids)


def run_assign(config: ExperimentConfig) -> RunOutput:
    """Full pipeline in the configured mode; writes plan, clustering and
    report under output_dir when one is set."""
    with _stage("corpus"):
        docs = load_corpus(config.corpus)
    with _stage("labels"):
        specs = load_labels(config.labels)
    cost = build_costs(config, docs, specs)
    output = _assign_over(config, cost, docs, specs, config.mode, config.p)
    if config.output_dir:
        _write_artifacts(config.output_dir, output, extra={"mode": config.mode, "p": config.p})
    return output


def run_nn_baseline(config: ExperimentConfig) -> RunOutput:
    """Greedy baseline: every document takes its single cheapest label.

    No transport plan exists; ties break toward the lowest label index,
    matching the hardening rule.
    """
    with _stage("corpus"):
        docs = load_corpus(config.corpus)
    with _stage("labels"):
        specs = load_labels(config.labels)
    cost = build_costs(config, docs, specs)
    label_ids = [s.id for s in specs]
    best = np.argmin(cost.values, axis=1)  # first min wins: lowest label index
    clustering = Clustering({d.id: label_ids[int(best[i])] for i, d in enumerate(docs)})
    metrics = evaluate_against_gold(clustering, docs)
    output = RunOutput(clustering, metrics, None, tuple(d.id for d in docs), tuple(label_ids))
    if config.output_dir:
        _write_artifacts(config.output_dir, output, extra={"mode": "nn"})
    return output


def _pick_omitted_labels(config: ExperimentConfig, docs: list[Document], specs: list[LabelSpec]) -> list[str]:
    freq: dict[str, int] = {}
    for d in docs:
        if d.gold_label is not None:
            freq[d.gold_label] = freq.get(d.gold_label, 0) + 1
    if not freq:
        raise ConfigError("label omission requires gold labels in the corpus")
    spec_ids = {s.id for s in specs}
    om = config.omission
    if om.labels is not None:
        for lab in om.labels:
            if lab not in freq:
                raise ConfigError(f"omitted label {lab!r} does not appear in the gold labeling")
            if lab not in spec_ids:
                raise ConfigError(f"omitted label {lab!r} is not in the label set")
        return list(om.labels)
    # most frequent first; ties broken by id so the draw is reproducible
    ranked = sorted(freq, key=lambda lab: (-freq[lab], lab))
    pool = [lab for lab in ranked[: om.top_k] if lab in spec_ids]
    if not pool:
        raise ConfigError("no frequent gold label matches the label set")
    rng = np.random.default_rng(om.seed)
    take = min(om.repeats, len(pool))
    return [pool[i] for i in rng.choice(len(pool), size=take, replace=False)]


def run_label_omission(config: ExperimentConfig) -> dict:
    """Drop one label per run, reassign partially, and evaluate the survivors.

    For each omitted label l_e the retained mass is p = 1 - freq(l_e)/n: the
    documents that do not belong to l_e are the ones expected to still get
    labels. Returns per-run metrics plus their mean.
    """
    with _stage("corpus"):
        docs = load_corpus(config.corpus)
    with _stage("labels"):
        specs = load_labels(config.labels)
    if len(specs) < 2:
        raise ConfigError("label omission needs at least 2 labels")
    n = len(docs)
    inputs = acquire_cost_inputs(config, docs, specs)
    runs = []
    for run_idx, omitted in enumerate(_pick_omitted_labels(config, docs, specs)):
        keep = [i for i, s in enumerate(specs) if s.id != omitted]
        kept_specs = [specs[i] for i in keep]
        cost = cost_matrix_from_inputs(inputs, keep)
        freq = sum(1 for d in docs if d.gold_label == omitted)
        p = 1.0 - freq / n
        output = _assign_over(config, cost, docs, kept_specs, "partial", p)
        entry = {
            "omitted_label": omitted,
            "p": p,
            "metrics": output.metrics.to_dict() if output.metrics else None,
        }
        if config.output_dir:
            run_dir = Path(config.output_dir) / f"omit-{run_idx}-{omitted}"
            entry["artifacts"] = _write_artifacts(run_dir, output, extra={"mode": "partial", "p": p})
        runs.append(entry)
    metric_keys = ("purity", "inverse_purity", "p1", "mi_nats", "assigned_fraction", "n_evaluated")
    scored = [r["metrics"] for r in runs if r["metrics"] is not None]
    mean = (
        {k: float(np.mean([m[k] for m in scored])) for k in metric_keys} if scored else None
    )
    report = {"runs": runs, "mean": mean}
    if config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "omission_report.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return report
