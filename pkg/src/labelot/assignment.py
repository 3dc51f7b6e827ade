"""Batched plan construction over a document corpus and hardening to clusters.

The batched driver splits documents into shuffled batches per epoch, solves
each batch against the full label set with uniform marginals, accumulates the
per-batch plans into one global plan, and normalizes. Hardening turns the
soft plan into discrete document -> label assignments, either for every
document or only for the fraction p with the strongest row marginals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from .errors import HardeningError, InputError, LabelotError
from .transport import CostMatrix, Marginal, SolverConfig, TransportPlan, sinkhorn_complete, sinkhorn_partial

# sentinel for documents left out of a partial assignment
UNASSIGNED = None


@dataclass(frozen=True)
class BatchSchedule:
    """How documents are split across solver calls.

    batch_size: documents per solve (default 500)
    epochs: full passes over the corpus, reshuffled each time (default 3)
    shuffle_seed: seed for the per-epoch permutation; fixes the output exactly
    """

    batch_size: int = 500
    epochs: int = 3
    shuffle_seed: int = 0

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise InputError(f"batch_size must be >= 1, got {self.batch_size!r}")
        if self.epochs < 1:
            raise InputError(f"epochs must be >= 1, got {self.epochs!r}")


@dataclass(frozen=True)
class Clustering:
    """Discrete assignment of document ids to label ids.

    assignments maps each document id to a label id, or to UNASSIGNED (None)
    for documents a partial assignment left out. assigned_fraction is derived,
    never supplied.
    """

    assignments: dict
    assigned_fraction: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.assignments:
            raise InputError("clustering must cover at least one document")
        assigned = sum(1 for v in self.assignments.values() if v is not UNASSIGNED)
        object.__setattr__(self, "assigned_fraction", assigned / len(self.assignments))

    def assigned_ids(self) -> list:
        return [d for d, v in self.assignments.items() if v is not UNASSIGNED]


def _epoch_batches(n: int, schedule: BatchSchedule):
    """Yield (epoch, batch_index, row_indices); a fresh shuffle per epoch."""
    rng = np.random.default_rng(schedule.shuffle_seed)
    for epoch in range(schedule.epochs):
        perm = rng.permutation(n)
        for bi, start in enumerate(range(0, n, schedule.batch_size)):
            yield epoch, bi, perm[start : start + schedule.batch_size]


def _batched_assign(cost: CostMatrix, schedule: BatchSchedule, cfg: SolverConfig, partial: bool) -> TransportPlan:
    n, m = cost.rows, cost.cols
    label_marginal = Marginal.uniform(m)
    accumulated = np.zeros((n, m))
    all_converged = True
    total_iterations = 0
    worst_residual = 0.0
    for epoch, bi, rows in _epoch_batches(n, schedule):
        batch_cost = CostMatrix(cost.values[rows])
        doc_marginal = Marginal.uniform(len(rows))
        try:
            if partial:
                plan = sinkhorn_partial(batch_cost, doc_marginal, label_marginal, cfg)
            else:
                plan = sinkhorn_complete(batch_cost, doc_marginal, label_marginal, cfg)
        except LabelotError as exc:
            raise type(exc)(f"epoch {epoch}, batch {bi}: {exc}") from exc
        accumulated[rows] += plan.values
        all_converged = all_converged and plan.converged
        total_iterations += plan.iterations
        worst_residual = max(worst_residual, plan.residual)
    target_mass = float(cfg.mass_p) if partial else 1.0
    values = accumulated * (target_mass / accumulated.sum())
    return TransportPlan(
        values=values,
        total_mass=float(values.sum()),
        converged=all_converged,
        iterations=total_iterations,
        residual=worst_residual,
    )


def batched_complete_assign(cost: CostMatrix, schedule: BatchSchedule, cfg: SolverConfig) -> TransportPlan:
    """Global document-label plan from per-batch balanced solves.

    Each batch uses uniform marginals over its documents and over all labels.
    Per-batch plans are accumulated across every batch of every epoch and the
    result is scaled to total mass 1. Deterministic given shuffle_seed. The
    returned diagnostics aggregate over batches: converged means every batch
    converged, iterations is the total sweep count, residual the worst batch.
    """
    if cfg.mass_p is not None:
        raise InputError("complete assignment takes cfg.mass_p=None; use batched_partial_assign")
    return _batched_assign(cost, schedule, cfg, partial=False)


def batched_partial_assign(cost: CostMatrix, schedule: BatchSchedule, cfg: SolverConfig) -> TransportPlan:
    """Global plan from per-batch partial solves, scaled to total mass mass_p.

    Every batch moves the same fraction cfg.mass_p of its unit mass; the
    accumulated plan is scaled so its total is cfg.mass_p, keeping row
    marginals comparable across batch layouts.
    """
    if cfg.mass_p is None:
        raise InputError("partial assignment requires cfg.mass_p in (0, 1]")
    return _batched_assign(cost, schedule, cfg, partial=True)


def _resolve_ids(count: int, ids: Sequence[Hashable] | None, kind: str) -> Sequence[Hashable]:
    if ids is None:
        return range(count)
    if len(ids) != count:
        raise InputError(f"{kind} id list has {len(ids)} entries, plan expects {count}")
    return ids


def harden_complete(
    plan: TransportPlan,
    doc_ids: Sequence[Hashable] | None = None,
    label_ids: Sequence[Hashable] | None = None,
) -> Clustering:
    """Assign every document the label holding the largest share of its row.

    Ties break toward the lowest label index. Ids default to row/column
    indices; pass doc_ids/label_ids to emit corpus identifiers instead.
    """
    docs = _resolve_ids(plan.rows, doc_ids, "document")
    labels = _resolve_ids(plan.cols, label_ids, "label")
    zero_rows = np.flatnonzero(~np.any(plan.values > 0, axis=1))
    if zero_rows.size:
        raise HardeningError(f"plan row {int(zero_rows[0])} is all zeros; no label to pick")
    best = np.argmax(plan.values, axis=1)  # first max wins: lowest label index
    return Clustering({docs[i]: labels[int(best[i])] for i in range(plan.rows)})


def harden_partial(
    plan: TransportPlan,
    p: float,
    doc_ids: Sequence[Hashable] | None = None,
    label_ids: Sequence[Hashable] | None = None,
) -> Clustering:
    """Assign only the floor(p*n) documents with the largest row marginals.

    Selected documents get their rowwise argmax label; the rest map to
    UNASSIGNED. Ties in the marginal break toward the lower document index,
    label ties toward the lower label index.
    """
    if not 0 < p <= 1:
        raise InputError(f"p must lie in (0, 1], got {p!r}")
    docs = _resolve_ids(plan.rows, doc_ids, "document")
    labels = _resolve_ids(plan.cols, label_ids, "label")
    n = plan.rows
    # nudge before floor so p*n that is an integer up to float error stays that integer
    k = int(np.floor(p * n + 1e-9))
    x_d = plan.row_marginal()
    order = np.argsort(-x_d, kind="stable")  # stable: equal marginals keep index order
    chosen = set(int(i) for i in order[:k])
    best = np.argmax(plan.values, axis=1)
    assignments = {
        docs[i]: (labels[int(best[i])] if i in chosen else UNASSIGNED) for i in range(n)
    }
    return Clustering(assignments)


def write_clustering(clustering: Clustering, path: str | Path) -> None:
    """Write one JSON object per line: {"id": ..., "label": <label or null>}."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, label in clustering.assignments.items():
            fh.write(json.dumps({"id": doc_id, "label": label}, ensure_ascii=False) + "\n")


def read_clustering(path: str | Path) -> Clustering:
    """Read a clustering written by write_clustering."""
    assignments = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                doc_id = obj["id"]
                label = obj["label"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise InputError(f"bad clustering line {line_no}: {exc}") from exc
            if doc_id in assignments:
                raise InputError(f"duplicate document id {doc_id!r} at line {line_no}")
            assignments[doc_id] = label
    if not assignments:
        raise InputError(f"clustering file {path} is empty")
    return Clustering(assignments)
