"""Embedding acquisition: local matrix files or a remote embedding service.

The remote protocol is a single HTTP POST with body {"texts": [...]} whose
response carries {"vectors": [[...], ...]}, one vector per input text in
order. Remote results are cached on disk, keyed by a hash of the endpoint
and the exact text list; cache files use the shared matrix format, so every
returned matrix is float32-quantized and repeat fetches are bitwise equal.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import requests

from .costs import EmbeddingMatrix
from .errors import ConfigError, InputError, ProviderError
from .matio import read_matrix, write_matrix


@dataclass(frozen=True)
class ProviderConfig:
    """Where embeddings come from.

    kind: "file" (path points at a matrix file, one row per corpus text) or
        "remote" (endpoint speaks the POST protocol above)
    headers: extra HTTP headers, e.g. an authorization token
    cache_dir: directory for remote-result caching; None disables the cache
    max_retries: attempts per request before giving up
    backoff: initial retry delay in seconds, doubled per attempt
    """

    kind: str
    path: str | None = None
    endpoint: str | None = None
    headers: dict = field(default_factory=dict)
    cache_dir: str | None = None
    max_retries: int = 3
    backoff: float = 0.25
    timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.kind not in ("file", "remote"):
            raise ConfigError(f"provider kind must be 'file' or 'remote', got {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ConfigError("file provider requires 'path'")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError("remote provider requires 'endpoint'")
        if self.max_retries < 1:
            raise ConfigError(f"max_retries must be >= 1, got {self.max_retries!r}")

    @classmethod
    def from_dict(cls, obj: dict) -> "ProviderConfig":
        known = {"kind", "path", "endpoint", "headers", "cache_dir", "max_retries", "backoff", "timeout"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"provider config has unknown fields {sorted(unknown)}")
        if "kind" not in obj:
            raise ConfigError("provider config requires 'kind'")
        return cls(**obj)


def _cache_path(cfg: ProviderConfig, texts: list[str]) -> Path:
    digest = hashlib.sha256()
    digest.update(json.dumps([cfg.endpoint, texts], ensure_ascii=False).encode("utf-8"))
    return Path(cfg.cache_dir) / f"{digest.hexdigest()}.edtm"


def _post_with_retry(cfg: ProviderConfig, texts: list[str]) -> list:
    last_error: Exception | None = None
    for attempt in range(cfg.max_retries):
        if attempt:
            time.sleep(cfg.backoff * (2 ** (attempt - 1)))
        try:
            resp = requests.post(
                cfg.endpoint,
                json={"texts": texts},
                headers=cfg.headers,
                timeout=cfg.timeout,
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if resp.status_code >= 500:
            last_error = ProviderError(f"embedding service returned {resp.status_code}")
            continue
        if resp.status_code != 200:
            raise ProviderError(f"embedding service rejected request: {resp.status_code} {resp.text[:200]}")
        try:
            body = resp.json()
            return body["vectors"]
        except (ValueError, KeyError) as exc:
            raise ProviderError(f"embedding service response is malformed: {exc}") from exc
    raise ProviderError(
        f"embedding service unreachable after {cfg.max_retries} attempts: {last_error}"
    )


def _validate_vectors(vectors: list, expected_count: int) -> np.ndarray:
    if not isinstance(vectors, list) or len(vectors) != expected_count:
        raise ProviderError(
            f"embedding service returned {len(vectors) if isinstance(vectors, list) else 'no'} "
            f"vectors for {expected_count} texts"
        )
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise ProviderError(f"embedding dimensions are inconsistent across responses: {sorted(dims)}")
    return np.asarray(vectors, dtype="<f4")


def fetch_embeddings(texts: list[str], provider: ProviderConfig) -> EmbeddingMatrix:
    """One embedding vector per text, in input order.

    File providers load the whole matrix from disk and only check the row
    count. Remote providers consult the cache first; a miss POSTs to the
    endpoint with retries (exponential backoff) and stores the result before
    returning it.
    """
    if not texts:
        raise InputError("fetch_embeddings needs at least one text")
    if provider.kind == "file":
        try:
            values = read_matrix(provider.path)
        except OSError as exc:
            raise ProviderError(f"embedding file {provider.path!r} unreadable: {exc}") from exc
        if values.shape[0] != len(texts):
            raise ProviderError(
                f"embedding file has {values.shape[0]} rows but the corpus has {len(texts)} texts"
            )
        return EmbeddingMatrix(values)
    cache_file = None
    if provider.cache_dir is not None:
        cache_file = _cache_path(provider, texts)
        if cache_file.exists():
            return EmbeddingMatrix(read_matrix(cache_file))
    vectors = _validate_vectors(_post_with_retry(provider, texts), len(texts))
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        write_matrix(cache_file, vectors)
        return EmbeddingMatrix(read_matrix(cache_file))
    return EmbeddingMatrix(vectors)
