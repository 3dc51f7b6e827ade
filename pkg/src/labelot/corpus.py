"""Documents, label specs and their file formats.

Corpus files hold one JSON object per line: id (string), text (string),
optional gold_label (string). Label files hold a JSON array of label specs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, InputError

# substituted into prompt templates when rendering a label
PLACEHOLDER = "LABEL"

DEFAULT_TEMPLATE = "Is this a Wikipedia article about LABEL?"

# whitespace tokens kept when budgeting document text for embedding
DEFAULT_TOKEN_BUDGET = 450


@dataclass(frozen=True)
class Document:
    """One corpus item; ids must be unique within a corpus."""

    id: str
    text: str
    gold_label: str | None = None
    token_budget: int = DEFAULT_TOKEN_BUDGET

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InputError(f"document id must be a non-empty string, got {self.id!r}")
        if not isinstance(self.text, str):
            raise InputError(f"document {self.id!r} text must be a string")
        if self.token_budget < 1:
            raise InputError(f"document {self.id!r} token_budget must be >= 1")

    def budgeted_text(self) -> str:
        """Text truncated to the first token_budget whitespace tokens."""
        tokens = self.text.split()
        if len(tokens) <= self.token_budget:
            return self.text
        return " ".join(tokens[: self.token_budget])


@dataclass(frozen=True)
class LabelSpec:
    """A topic label in any of its forms: bare name, name plus description
    terms, or name plus verified seed documents."""

    id: str
    name: str
    description_terms: tuple[str, ...] | None = None
    seed_doc_ids: tuple[str, ...] | None = None
    template: str = DEFAULT_TEMPLATE

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InputError(f"label id must be a non-empty string, got {self.id!r}")
        if not isinstance(self.name, str) or not self.name:
            raise InputError(f"label {self.id!r} must have a non-empty name")
        if self.description_terms is not None:
            object.__setattr__(self, "description_terms", tuple(self.description_terms))
        if self.seed_doc_ids is not None:
            object.__setattr__(self, "seed_doc_ids", tuple(self.seed_doc_ids))

    def to_dict(self) -> dict:
        out: dict = {"id": self.id, "name": self.name, "template": self.template}
        if self.description_terms is not None:
            out["description_terms"] = list(self.description_terms)
        if self.seed_doc_ids is not None:
            out["seed_doc_ids"] = list(self.seed_doc_ids)
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "LabelSpec":
        if not isinstance(obj, dict):
            raise InputError(f"label spec must be an object, got {type(obj).__name__}")
        unknown = set(obj) - {"id", "name", "description_terms", "seed_doc_ids", "template"}
        if unknown:
            raise InputError(f"label spec has unknown fields {sorted(unknown)}")
        try:
            return cls(
                id=obj["id"],
                name=obj["name"],
                description_terms=obj.get("description_terms"),
                seed_doc_ids=obj.get("seed_doc_ids"),
                template=obj.get("template", DEFAULT_TEMPLATE),
            )
        except KeyError as exc:
            raise InputError(f"label spec missing required field {exc}") from exc


def render_label(spec: LabelSpec) -> str:
    """Fill the spec's template: the placeholder becomes the label name, or
    the name followed by ' or '-joined description terms when any exist."""
    if PLACEHOLDER not in spec.template:
        raise ConfigError(
            f"label {spec.id!r} template has no {PLACEHOLDER!r} placeholder: {spec.template!r}"
        )
    filler = spec.name
    if spec.description_terms:
        filler = " or ".join((spec.name, *spec.description_terms))
    return spec.template.replace(PLACEHOLDER, filler)


def parse_corpus(lines) -> list[Document]:
    """Parse JSONL corpus lines; raises with a line number on any bad line."""
    docs: list[Document] = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"corpus line {line_no}: invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise InputError(f"corpus line {line_no}: expected an object")
        if "id" not in obj or "text" not in obj:
            raise InputError(f"corpus line {line_no}: needs both 'id' and 'text'")
        try:
            doc = Document(id=obj["id"], text=obj["text"], gold_label=obj.get("gold_label"))
        except InputError as exc:
            raise InputError(f"corpus line {line_no}: {exc}") from exc
        if doc.id in seen:
            raise InputError(f"corpus line {line_no}: duplicate document id {doc.id!r}")
        seen.add(doc.id)
        docs.append(doc)
    if not docs:
        raise InputError("corpus contains no documents")
    return docs


def load_corpus(path: str | Path) -> list[Document]:
    """Read a JSONL corpus file; see parse_corpus for the line contract."""
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"corpus file {path} unreadable: {exc}") from exc
    with fh:
        try:
            return parse_corpus(fh)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from exc


def write_corpus(docs: list[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            obj: dict = {"id": doc.id, "text": doc.text}
            if doc.gold_label is not None:
                obj["gold_label"] = doc.gold_label
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_labels(path: str | Path) -> list[LabelSpec]:
    """Read a JSON array of label specs; ids must be unique."""
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"labels file {path} unreadable: {exc}") from exc
    with fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"labels file {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, list) or not data:
        raise InputError(f"labels file {path} must be a non-empty JSON array")
    specs = [LabelSpec.from_dict(obj) for obj in data]
    seen: set[str] = set()
    for spec in specs:
        if spec.id in seen:
            raise InputError(f"labels file {path}: duplicate label id {spec.id!r}")
        seen.add(spec.id)
    return specs


def write_labels(specs: list[LabelSpec], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([s.to_dict() for s in specs], fh, ensure_ascii=False, indent=2)
        fh.write("\n")
