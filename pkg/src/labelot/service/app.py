"""HTTP JSON API for interactive assignment sessions.

Routes:
    POST /sessions                  create a session from an uploaded corpus
    GET  /sessions                  list sessions
    GET  /sessions/{id}             session detail incl. labels and job status
    GET  /sessions/{id}/documents   corpus text search (seed-doc picking)
    PUT  /sessions/{id}/labels      replace the label specs (versioned)
    POST /sessions/{id}/assign      start an assignment job (one at a time)
    GET  /sessions/{id}/jobs/{job}  poll job status
    GET  /sessions/{id}/results     latest finished results snapshot
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from ..corpus import LabelSpec
from ..errors import LabelotError
from .store import JobState, Session, SessionStore


def _session_summary(session: Session) -> dict:
    return {
        "id": session.id,
        "n_documents": len(session.documents),
        "n_labels": len(session.specs),
        "labels_version": session.labels_version,
        "latest_job_id": session.latest_job_id,
        "job": _job_status(session),
    }


def _job_status(session: Session) -> dict:
    if session.running_job_id is not None:
        job = session.jobs[session.running_job_id]
        return {"status": "running", "job_id": job.id, "stage": job.stage}
    if session.latest_job_id is not None or session.jobs:
        last_failed = next(
            (j for j in reversed(list(session.jobs.values())) if j.status == "failed"), None
        )
        if last_failed is not None and (
            session.latest_job_id is None or last_failed.id > session.latest_job_id
        ):
            return {"status": "failed", "job_id": last_failed.id, "message": last_failed.message}
        if session.latest_job_id is not None:
            return {"status": "done", "job_id": session.latest_job_id}
    return {"status": "idle"}


def _job_view(job: JobState) -> dict:
    view = {"job_id": job.id, "status": job.status, "stage": job.stage, "mode": job.mode, "p": job.p}
    if job.message:
        view["message"] = job.message
    return view


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="label transport service")
    app.state.store = store
    # the browser client is served from its own origin; single-analyst
    # local tool, so a blanket allowance is fine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def _get_session(session_id: str) -> Session:
        try:
            return store.get_session(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        corpus_text = body.get("corpus_jsonl")
        if not isinstance(corpus_text, str) or not corpus_text.strip():
            raise HTTPException(status_code=400, detail="body must carry non-empty 'corpus_jsonl'")
        try:
            session = store.create_session(corpus_text)
        except LabelotError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _session_summary(session)

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [_session_summary(s) for s in store.list_sessions()]}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        out = _session_summary(session)
        out["labels"] = [s.to_dict() for s in session.specs]
        return out

    @app.get("/sessions/{session_id}/documents")
    def search_documents(session_id: str, q: str = "", limit: int = 50):
        session = _get_session(session_id)
        needle = q.lower()
        hits = []
        for doc in session.documents:
            if needle and needle not in doc.text.lower() and needle not in doc.id.lower():
                continue
            hits.append({"id": doc.id, "text": doc.text, "gold_label": doc.gold_label})
            if len(hits) >= max(1, limit):
                break
        return {"documents": hits, "total_documents": len(session.documents)}

    @app.put("/sessions/{session_id}/labels")
    def put_labels(session_id: str, body: list[dict]):
        session = _get_session(session_id)
        try:
            specs = [LabelSpec.from_dict(obj) for obj in body]
            store.put_labels(session, specs)
        except LabelotError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"labels": [s.to_dict() for s in session.specs], "labels_version": session.labels_version}

    @app.post("/sessions/{session_id}/assign", status_code=202)
    def start_assignment(session_id: str, body: dict | None = None):
        session = _get_session(session_id)
        body = body or {}
        mode = body.get("mode", "complete")
        try:
            job = store.start_job(
                session,
                mode=mode,
                p=body.get("p"),
                cost=body.get("cost"),
                solver=body.get("solver"),
                schedule=body.get("schedule"),
            )
        except RuntimeError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except LabelotError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _job_view(job)

    @app.get("/sessions/{session_id}/jobs/{job_id}")
    def get_job(session_id: str, job_id: str):
        session = _get_session(session_id)
        job = session.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        return _job_view(job)

    @app.get("/sessions/{session_id}/results")
    def get_results(session_id: str, job_id: str | None = None):
        session = _get_session(session_id)
        try:
            return store.get_results(session, job_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="no finished results for this session")

    return app
