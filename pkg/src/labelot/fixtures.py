"""Synthetic fixtures: a separable Gaussian corpus and a stub embedding server.

The generated corpus has one keyword per cluster woven into every document
text, and the stub server embeds unknown texts by keyword lookup. Renaming a
label keeps its geometry as long as the keyword survives in the rendered
prompt, which makes the fixture usable for interactive relabeling flows, not
just batch runs.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .corpus import Document, LabelSpec, write_corpus, write_labels
from .errors import InputError
from .matio import write_matrix

KEYWORDS = (
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliet", "kilo", "lima",
)

_FILLERS = (
    "report on the {kw} situation with extended {kw} coverage",
    "notes about {kw} happenings and other {kw} news",
    "a long piece describing {kw} events in the {kw} community",
    "summary of recent {kw} developments for {kw} readers",
    "weekly {kw} digest with highlights from the {kw} scene",
)


def generate_fixture(
    out_dir: str | Path,
    n_docs: int = 200,
    n_clusters: int = 4,
    dim: int = 8,
    separation: float = 10.0,
    seed: int = 7,
) -> dict:
    """Write corpus, labels, embedding matrices and a stub vector map.

    Documents form n_clusters isotropic Gaussian clouds (sigma 1) whose
    centroids sit pairwise `separation` apart; label vectors are the exact
    centroids. Returns the paths of everything written.
    """
    if n_clusters > len(KEYWORDS):
        raise InputError(f"at most {len(KEYWORDS)} clusters supported, got {n_clusters}")
    if dim < n_clusters:
        raise InputError("dim must be >= n_clusters so centroids can be orthogonal")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    # orthogonal corners scaled so every centroid pair is `separation` apart
    centroids = np.zeros((n_clusters, dim))
    for k in range(n_clusters):
        centroids[k, k] = separation / np.sqrt(2.0)

    cluster_of = np.arange(n_docs) % n_clusters
    vectors = centroids[cluster_of] + rng.standard_normal((n_docs, dim))

    docs = []
    for i in range(n_docs):
        kw = KEYWORDS[cluster_of[i]]
        body = _FILLERS[i % len(_FILLERS)].format(kw=kw)
        docs.append(
            Document(
                id=f"doc-{i:04d}",
                text=f"{kw} document {i}: {body}",
                gold_label=f"label-{cluster_of[i]}",
            )
        )
    specs = [
        LabelSpec(id=f"label-{k}", name=KEYWORDS[k]) for k in range(n_clusters)
    ]

    corpus_path = out / "corpus.jsonl"
    labels_path = out / "labels.json"
    doc_vectors_path = out / "doc_vectors.edtm"
    label_vectors_path = out / "label_vectors.edtm"
    stub_map_path = out / "stub_map.json"

    write_corpus(docs, corpus_path)
    write_labels(specs, labels_path)
    write_matrix(doc_vectors_path, vectors)
    write_matrix(label_vectors_path, centroids)
    stub_map = {
        "dim": dim,
        "texts": {doc.budgeted_text(): np.float32(vectors[i]).tolist() for i, doc in enumerate(docs)},
        "keywords": {KEYWORDS[k]: np.float32(centroids[k]).tolist() for k in range(n_clusters)},
    }
    with open(stub_map_path, "w", encoding="utf-8") as fh:
        json.dump(stub_map, fh)
    return {
        "corpus": str(corpus_path),
        "labels": str(labels_path),
        "doc_vectors": str(doc_vectors_path),
        "label_vectors": str(label_vectors_path),
        "stub_map": str(stub_map_path),
        "n_docs": n_docs,
        "n_clusters": n_clusters,
        "dim": dim,
    }


def _hash_vector(text: str, dim: int) -> list[float]:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    return np.float32(rng.standard_normal(dim)).tolist()


def make_stub_app(stub_map_path: str | Path):
    """FastAPI app embedding texts from a stored map.

    Lookup order: exact text match, then case-insensitive keyword substring
    (first keyword in map order wins), then a deterministic hash vector.
    GET /stats exposes how many embed calls were served, which lets tests
    verify that client-side caching avoided the network.
    """
    from fastapi import FastAPI

    with open(stub_map_path, "r", encoding="utf-8") as fh:
        stub_map = json.load(fh)
    dim = int(stub_map["dim"])
    exact = dict(stub_map["texts"])
    keywords = dict(stub_map["keywords"])

    app = FastAPI()
    state = {"calls": 0}

    def embed_one(text: str) -> list[float]:
        if text in exact:
            return exact[text]
        lowered = text.lower()
        for kw, vec in keywords.items():
            if kw.lower() in lowered:
                return vec
        return _hash_vector(text, dim)

    @app.post("/embed")
    def embed(body: dict):
        state["calls"] += 1
        texts = body.get("texts")
        if not isinstance(texts, list):
            from fastapi import HTTPException

            raise HTTPException(status_code=400, detail="body must carry a 'texts' list")
        return {"vectors": [embed_one(t) for t in texts]}

    @app.get("/stats")
    def stats():
        return {"calls": state["calls"]}

    return app
