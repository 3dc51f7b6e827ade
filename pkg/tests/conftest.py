"""Shared fixtures: the synthetic corpus and a live stub embedding server."""

from __future__ import annotations

import socket
import sys
import threading
import time

import pytest
import uvicorn

from labelot.fixtures import generate_fixture, make_stub_app


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # gate lines are printed inside the tests, where capture hides them on
    # green runs; echo them here so the final report always carries them
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "GATE_LINES", []) if mod is not None else []
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixture_paths(tmp_path_factory) -> dict:
    out = tmp_path_factory.mktemp("gaussfix")
    return generate_fixture(out)


@pytest.fixture(scope="session")
def stub_server(fixture_paths):
    """Run the stub embedder on a real port; yields its base URL."""
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    app = make_stub_app(fixture_paths["stub_map"])
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("stub embedder did not start")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


@pytest.fixture(scope="session")
def file_provider(fixture_paths: dict) -> dict:
    return {
        "documents": {"kind": "file", "path": fixture_paths["doc_vectors"]},
        "labels": {"kind": "file", "path": fixture_paths["label_vectors"]},
    }
