"""HTTP API tests: session CRUD, label versioning, jobs, and results."""

import json
import threading
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

import labelot.service.store as store_module
from labelot import ProviderConfig
from labelot.service import create_app
from labelot.service.store import SessionStore

TINY_CORPUS = (
    '{"id": "doc-a", "text": "alpha alpha alpha"}\n'
    '{"id": "doc-b", "text": "bravo bravo bravo"}\n'
    '{"id": "doc-c", "text": "charlie charlie charlie"}\n'
)


@pytest.fixture
def api(stub_server, tmp_path):
    provider = ProviderConfig(
        kind="remote", endpoint=f"{stub_server}/embed", cache_dir=str(tmp_path / "cache")
    )
    store = SessionStore(data_dir=tmp_path / "data", provider=provider)
    with TestClient(create_app(store)) as client:
        yield client


@pytest.fixture
def fixture_corpus(fixture_paths) -> str:
    return Path(fixture_paths["corpus"]).read_text()


@pytest.fixture
def fixture_label_specs(fixture_paths) -> list:
    return json.loads(Path(fixture_paths["labels"]).read_text())


def make_session(api, corpus: str) -> str:
    resp = api.post("/sessions", json={"corpus_jsonl": corpus})
    assert resp.status_code == 201, resp.text
    return resp.json()["id"]


def wait_for_job(api, session_id: str, job_id: str, timeout: float = 60.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = api.get(f"/sessions/{session_id}/jobs/{job_id}").json()
        if job["status"] in ("done", "failed"):
            return job
        time.sleep(0.02)
    raise AssertionError(f"job {job_id} still {job['status']} after {timeout}s")


def run_fixture_job(api, session_id: str, body: dict | None = None) -> dict:
    resp = api.post(f"/sessions/{session_id}/assign", json=body or {})
    assert resp.status_code == 202, resp.text
    job = wait_for_job(api, session_id, resp.json()["job_id"])
    assert job["status"] == "done", job
    return job


class TestSessionCrud:
    def test_create_and_get(self, api):
        session_id = make_session(api, TINY_CORPUS)
        detail = api.get(f"/sessions/{session_id}").json()
        assert detail["n_documents"] == 3
        assert detail["labels"] == []
        assert detail["job"]["status"] == "idle"

    def test_list_sessions(self, api):
        first = make_session(api, TINY_CORPUS)
        second = make_session(api, TINY_CORPUS)
        listed = [s["id"] for s in api.get("/sessions").json()["sessions"]]
        assert listed == sorted([first, second])

    def test_duplicate_document_ids_rejected(self, api):
        corpus = '{"id": "dup", "text": "x"}\n{"id": "dup", "text": "y"}\n'
        resp = api.post("/sessions", json={"corpus_jsonl": corpus})
        assert resp.status_code == 400
        assert "dup" in resp.json()["detail"]

    def test_malformed_line_names_line_number(self, api):
        corpus = '{"id": "ok", "text": "x"}\nnot json at all\n'
        resp = api.post("/sessions", json={"corpus_jsonl": corpus})
        assert resp.status_code == 400
        assert "line 2" in resp.json()["detail"]

    def test_empty_corpus_rejected(self, api):
        resp = api.post("/sessions", json={"corpus_jsonl": "   \n"})
        assert resp.status_code == 400

    def test_unknown_session_404(self, api):
        assert api.get("/sessions/session-9999").status_code == 404

    def test_document_search(self, api):
        session_id = make_session(api, TINY_CORPUS)
        hits = api.get(
            f"/sessions/{session_id}/documents", params={"q": "bravo"}
        ).json()["documents"]
        assert [h["id"] for h in hits] == ["doc-b"]
        limited = api.get(
            f"/sessions/{session_id}/documents", params={"limit": 2}
        ).json()
        assert len(limited["documents"]) == 2
        assert limited["total_documents"] == 3


class TestLabels:
    def test_put_and_version(self, api):
        session_id = make_session(api, TINY_CORPUS)
        specs = [{"id": "l1", "name": "Alpha topics"}]
        resp = api.put(f"/sessions/{session_id}/labels", json=specs)
        assert resp.status_code == 200
        assert resp.json()["labels_version"] == 1
        resp = api.put(f"/sessions/{session_id}/labels", json=specs * 1)
        assert resp.json()["labels_version"] == 2

    def test_empty_name_rejected(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.put(f"/sessions/{session_id}/labels", json=[{"id": "l1", "name": ""}])
        assert resp.status_code == 400

    def test_unknown_seed_doc_named(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.put(
            f"/sessions/{session_id}/labels",
            json=[{"id": "l1", "name": "A", "seed_doc_ids": ["doc-zz"]}],
        )
        assert resp.status_code == 400
        assert "doc-zz" in resp.json()["detail"]

    def test_valid_seed_docs_accepted(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.put(
            f"/sessions/{session_id}/labels",
            json=[{"id": "l1", "name": "A", "seed_doc_ids": ["doc-a", "doc-b"]}],
        )
        assert resp.status_code == 200
        assert resp.json()["labels"][0]["seed_doc_ids"] == ["doc-a", "doc-b"]

    def test_duplicate_label_ids_rejected(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.put(
            f"/sessions/{session_id}/labels",
            json=[{"id": "l1", "name": "A"}, {"id": "l1", "name": "B"}],
        )
        assert resp.status_code == 400

    def test_unknown_spec_field_rejected(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.put(
            f"/sessions/{session_id}/labels", json=[{"id": "l1", "name": "A", "color": "red"}]
        )
        assert resp.status_code == 400


class TestJobs:
    def test_assign_requires_labels(self, api):
        session_id = make_session(api, TINY_CORPUS)
        resp = api.post(f"/sessions/{session_id}/assign", json={})
        assert resp.status_code == 400

    def test_complete_assignment_groups(self, api, fixture_corpus, fixture_label_specs):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
        run_fixture_job(api, session_id)
        results = api.get(f"/sessions/{session_id}/results").json()
        assert len(results["groups"]) == 4
        assert all(len(g["documents"]) > 0 for g in results["groups"])
        assert results["unassigned"] == []
        assert results["metrics"]["p1"] >= 0.95
        for group in results["groups"]:
            confidences = [d["confidence"] for d in group["documents"]]
            assert confidences == sorted(confidences, reverse=True)

    def test_partial_assignment_unassigned_bucket(self, api, fixture_corpus, fixture_label_specs):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
        run_fixture_job(api, session_id, {"mode": "partial", "p": 0.7})
        results = api.get(f"/sessions/{session_id}/results").json()
        assert len(results["unassigned"]) == 200 - int(0.7 * 200)
        assigned = sum(len(g["documents"]) for g in results["groups"])
        assert assigned == int(0.7 * 200)

    def test_bad_solver_override_is_clean_400(self, api, fixture_corpus, fixture_label_specs):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
        resp = api.post(
            f"/sessions/{session_id}/assign", json={"solver": {"lam": -2.0}}
        )
        assert resp.status_code == 400
        # session is not stuck: a valid run still goes through
        run_fixture_job(api, session_id)

    def test_results_404_before_any_job(self, api):
        session_id = make_session(api, TINY_CORPUS)
        assert api.get(f"/sessions/{session_id}/results").status_code == 404

    def test_unknown_job_404(self, api):
        session_id = make_session(api, TINY_CORPUS)
        assert api.get(f"/sessions/{session_id}/jobs/job-0042").status_code == 404

    def test_rerun_reproduces_snapshot(self, api, fixture_corpus, fixture_label_specs):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
        first_job = run_fixture_job(api, session_id)
        first = api.get(
            f"/sessions/{session_id}/results", params={"job_id": first_job["job_id"]}
        ).json()
        second_job = run_fixture_job(api, session_id)
        second = api.get(
            f"/sessions/{session_id}/results", params={"job_id": second_job["job_id"]}
        ).json()
        assert first_job["job_id"] != second_job["job_id"]
        first.pop("job_id")
        second.pop("job_id")
        assert first == second

    def test_concurrent_start_conflicts_and_snapshot_isolation(
        self, api, fixture_corpus, fixture_label_specs, monkeypatch
    ):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)

        release = threading.Event()
        real_run = store_module.run_assign

        def gated_run(config):
            assert release.wait(timeout=30)
            return real_run(config)

        monkeypatch.setattr(store_module, "run_assign", gated_run)
        started = api.post(f"/sessions/{session_id}/assign", json={})
        assert started.status_code == 202
        job_id = started.json()["job_id"]
        try:
            conflict = api.post(f"/sessions/{session_id}/assign", json={})
            assert conflict.status_code == 409
            # label edits during the run apply to later jobs, not this one
            renamed = [dict(s, name=s["name"] + " renamed") for s in fixture_label_specs]
            resp = api.put(f"/sessions/{session_id}/labels", json=renamed)
            assert resp.status_code == 200
        finally:
            release.set()
        job = wait_for_job(api, session_id, job_id)
        assert job["status"] == "done"
        results = api.get(f"/sessions/{session_id}/results").json()
        names = [g["label_name"] for g in results["groups"]]
        assert all(not n.endswith(" renamed") for n in names)
        # the next job picks up the edited labels
        after = run_fixture_job(api, session_id)
        results = api.get(f"/sessions/{session_id}/results").json()
        names = [g["label_name"] for g in results["groups"]]
        assert all(n.endswith(" renamed") for n in names)

    def test_failed_job_preserves_previous_results(
        self, api, fixture_corpus, fixture_label_specs, monkeypatch
    ):
        session_id = make_session(api, fixture_corpus)
        api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
        good_job = run_fixture_job(api, session_id)
        baseline = api.get(f"/sessions/{session_id}/results").json()

        from labelot import ProviderError

        def exploding_run(config):
            raise ProviderError("embedding backend went away")

        monkeypatch.setattr(store_module, "run_assign", exploding_run)
        resp = api.post(f"/sessions/{session_id}/assign", json={})
        assert resp.status_code == 202
        failed = wait_for_job(api, session_id, resp.json()["job_id"])
        assert failed["status"] == "failed"
        assert "embedding backend went away" in failed["message"]
        # previous snapshot still served
        results = api.get(f"/sessions/{session_id}/results").json()
        assert results == baseline
        assert results["job_id"] == good_job["job_id"]
        # session summary surfaces the failure
        detail = api.get(f"/sessions/{session_id}").json()
        assert detail["job"]["status"] == "failed"


class TestPersistence:
    def test_store_reload_preserves_sessions_and_results(
        self, stub_server, tmp_path, fixture_corpus, fixture_label_specs
    ):
        provider = ProviderConfig(
            kind="remote", endpoint=f"{stub_server}/embed", cache_dir=str(tmp_path / "cache")
        )
        data_dir = tmp_path / "data"
        store = SessionStore(data_dir=data_dir, provider=provider)
        with TestClient(create_app(store)) as api:
            session_id = make_session(api, fixture_corpus)
            api.put(f"/sessions/{session_id}/labels", json=fixture_label_specs)
            run_fixture_job(api, session_id)
            before = api.get(f"/sessions/{session_id}/results").json()

        reloaded = SessionStore(data_dir=data_dir, provider=provider)
        with TestClient(create_app(reloaded)) as api:
            detail = api.get(f"/sessions/{session_id}").json()
            assert detail["n_documents"] == 200
            assert detail["labels_version"] == 1
            assert [s["id"] for s in detail["labels"]] == [
                s["id"] for s in fixture_label_specs
            ]
            after = api.get(f"/sessions/{session_id}/results").json()
            assert after == before
            # ids keep counting up instead of colliding with existing dirs
            fresh = make_session(api, TINY_CORPUS)
            assert fresh != session_id
