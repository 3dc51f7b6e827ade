"""Disk-backed session store and job execution for the HTTP service.

Each session lives in its own directory under the data dir: the uploaded
corpus, the current label specs (plus every prior version), and one
directory per assignment job. A job snapshots the label specs when it
starts, runs the pipeline in a worker thread, writes its artifacts and a
results snapshot into its own directory, and only then moves the session's
"latest results" pointer. Readers therefore never see a half-written run.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..assignment import UNASSIGNED, BatchSchedule
from ..corpus import Document, LabelSpec, load_corpus, parse_corpus, write_corpus, write_labels
from ..errors import InputError, LabelotError
from ..harness import ExperimentConfig, RunOutput, run_assign
from ..providers import ProviderConfig
from ..transport import SolverConfig


@dataclass
class JobState:
    """In-memory view of one assignment job."""

    id: str
    status: str = "running"  # running | done | failed
    stage: str = "starting"
    message: str = ""
    mode: str = "complete"
    p: float | None = None


@dataclass
class Session:
    id: str
    dir: Path
    documents: list[Document]
    specs: list[LabelSpec] = field(default_factory=list)
    labels_version: int = 0
    jobs: dict[str, JobState] = field(default_factory=dict)
    running_job_id: str | None = None
    latest_job_id: str | None = None
    next_job_number: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock)


def _confidence_sorted(entries: list[dict]) -> list[dict]:
    return sorted(entries, key=lambda e: (-e["confidence"], e["id"]))


def build_results_snapshot(
    job: JobState, output: RunOutput, documents: list[Document], specs: list[LabelSpec]
) -> dict:
    """Cluster view for analysts: documents grouped per label, sorted by the
    plan row marginal (the confidence proxy), with an UNASSIGNED bucket."""
    doc_by_id = {d.id: d for d in documents}
    if output.plan is not None:
        marginal = dict(zip(output.doc_ids, output.plan.row_marginal().tolist()))
    else:
        marginal = {d: 0.0 for d in output.doc_ids}
    spec_by_id = {s.id: s for s in specs}
    grouped: dict[str, list[dict]] = {s.id: [] for s in specs}
    unassigned: list[dict] = []
    for doc_id, label in output.clustering.assignments.items():
        doc = doc_by_id[doc_id]
        entry = {
            "id": doc_id,
            "text": doc.text,
            "gold_label": doc.gold_label,
            "confidence": marginal[doc_id],
        }
        if label is UNASSIGNED:
            unassigned.append(entry)
        else:
            grouped[label].append(entry)
    return {
        "job_id": job.id,
        "mode": job.mode,
        "p": job.p,
        "groups": [
            {
                "label_id": s.id,
                "label_name": spec_by_id[s.id].name,
                "documents": _confidence_sorted(grouped[s.id]),
            }
            for s in specs
        ],
        "unassigned": _confidence_sorted(unassigned),
        "metrics": output.metrics.to_dict() if output.metrics else None,
    }


class SessionStore:
    """All sessions, backed by one directory per session on disk."""

    def __init__(self, data_dir: str | Path, provider: ProviderConfig, default_cost: str = "l2"):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.provider = provider
        self.default_cost = default_cost
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._next_session_number = 1
        self._load_existing()

    # -- persistence ------------------------------------------------------

    def _load_existing(self) -> None:
        for session_dir in sorted(self.data_dir.iterdir()) if self.data_dir.exists() else []:
            corpus_path = session_dir / "corpus.jsonl"
            if not session_dir.is_dir() or not corpus_path.exists():
                continue
            session = Session(
                id=session_dir.name,
                dir=session_dir,
                documents=load_corpus(corpus_path),
            )
            meta_path = session_dir / "meta.json"
            if meta_path.exists():
                with open(meta_path, "r", encoding="utf-8") as fh:
                    meta = json.load(fh)
                session.labels_version = meta.get("labels_version", 0)
                session.latest_job_id = meta.get("latest_job_id")
                session.next_job_number = meta.get("next_job_number", 1)
            labels_path = session_dir / "labels.json"
            if labels_path.exists():
                with open(labels_path, "r", encoding="utf-8") as fh:
                    session.specs = [LabelSpec.from_dict(o) for o in json.load(fh)]
            self._sessions[session.id] = session
            number = session.id.split("-")[-1]
            if number.isdigit():
                self._next_session_number = max(self._next_session_number, int(number) + 1)

    def _save_meta(self, session: Session) -> None:
        meta = {
            "labels_version": session.labels_version,
            "latest_job_id": session.latest_job_id,
            "next_job_number": session.next_job_number,
        }
        tmp = session.dir / "meta.json.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(meta, fh)
        tmp.replace(session.dir / "meta.json")

    # -- sessions ---------------------------------------------------------

    def create_session(self, corpus_text: str) -> Session:
        documents = parse_corpus(corpus_text.splitlines())
        with self._lock:
            session_id = f"session-{self._next_session_number:04d}"
            self._next_session_number += 1
            session_dir = self.data_dir / session_id
            session_dir.mkdir(parents=True)
            write_corpus(documents, session_dir / "corpus.jsonl")
            session = Session(id=session_id, dir=session_dir, documents=documents)
            self._save_meta(session)
            self._sessions[session_id] = session
            return session

    def list_sessions(self) -> list[Session]:
        with self._lock:
            return sorted(self._sessions.values(), key=lambda s: s.id)

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(session_id)
            return self._sessions[session_id]

    # -- labels -----------------------------------------------------------

    def put_labels(self, session: Session, specs: list[LabelSpec]) -> None:
        doc_ids = {d.id for d in session.documents}
        seen: set[str] = set()
        for spec in specs:
            if spec.id in seen:
                raise InputError(f"duplicate label id {spec.id!r}")
            seen.add(spec.id)
            for seed in spec.seed_doc_ids or ():
                if seed not in doc_ids:
                    raise InputError(f"label {spec.id!r} references unknown seed document {seed!r}")
        with session.lock:
            session.specs = list(specs)
            session.labels_version += 1
            write_labels(session.specs, session.dir / f"labels_v{session.labels_version}.json")
            write_labels(session.specs, session.dir / "labels.json")
            self._save_meta(session)

    # -- jobs -------------------------------------------------------------

    def start_job(
        self,
        session: Session,
        mode: str,
        p: float | None,
        cost: str | None = None,
        solver: dict | None = None,
        schedule: dict | None = None,
    ) -> JobState:
        """Launch an assignment job; raises RuntimeError when one is running."""
        if not session.specs:
            raise InputError("session has no labels; PUT labels before assigning")
        # validate the overrides before the job is registered, so a bad
        # request can never leave the session stuck in the running state
        parsed_schedule = BatchSchedule(**(schedule or {}))
        parsed_solver = SolverConfig(**(solver or {}))
        with session.lock:
            if session.running_job_id is not None:
                raise RuntimeError(f"job {session.running_job_id} is already running")
            job_id = f"job-{session.next_job_number:04d}"
            session.next_job_number += 1
            job = JobState(id=job_id, mode=mode, p=p)
            session.jobs[job_id] = job
            session.running_job_id = job_id
            # snapshot: the running job must not see later label edits
            job_dir = session.dir / "jobs" / job_id
            job_dir.mkdir(parents=True)
            specs_snapshot = list(session.specs)
            write_labels(specs_snapshot, job_dir / "labels.json")
            self._save_meta(session)
        try:
            config = ExperimentConfig(
                corpus=str(session.dir / "corpus.jsonl"),
                labels=str(job_dir / "labels.json"),
                cost=cost or self.default_cost,
                provider={"documents": self.provider, "labels": self.provider},
                schedule=parsed_schedule,
                solver=parsed_solver,
                mode=mode,
                p=p,
                output_dir=str(job_dir / "artifacts"),
            )
            thread = threading.Thread(
                target=self._run_job,
                args=(session, job, config, specs_snapshot, job_dir),
                daemon=True,
            )
            thread.start()
        except Exception as exc:
            with session.lock:
                job.status = "failed"
                job.message = str(exc)
                session.running_job_id = None
            raise
        return job

    def _run_job(
        self,
        session: Session,
        job: JobState,
        config: ExperimentConfig,
        specs_snapshot: list[LabelSpec],
        job_dir: Path,
    ) -> None:
        try:
            job.stage = "pipeline"
            output = run_assign(config)
            job.stage = "snapshot"
            snapshot = build_results_snapshot(job, output, session.documents, specs_snapshot)
            tmp = job_dir / "results.json.tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(snapshot, fh, ensure_ascii=False)
            tmp.replace(job_dir / "results.json")
            with session.lock:
                job.status = "done"
                job.stage = "finished"
                session.latest_job_id = job.id
                session.running_job_id = None
                self._save_meta(session)
        except LabelotError as exc:
            with session.lock:
                job.status = "failed"
                job.message = str(exc)
                session.running_job_id = None
        except Exception as exc:  # job thread must never die silently
            with session.lock:
                job.status = "failed"
                job.message = f"unexpected {type(exc).__name__}: {exc}"
                session.running_job_id = None

    def get_results(self, session: Session, job_id: str | None = None) -> dict:
        """Latest (or a specific) finished results snapshot."""
        target = job_id or session.latest_job_id
        if target is None:
            raise KeyError("no finished job yet")
        results_path = session.dir / "jobs" / target / "results.json"
        if not results_path.exists():
            raise KeyError(target)
        with open(results_path, "r", encoding="utf-8") as fh:
            return json.load(fh)
