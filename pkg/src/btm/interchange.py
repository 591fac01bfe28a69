"""On-disk corpus bundle format: loading, validation, writing.

A bundle directory carries everything a topic-modeling run must export for
cross-corpus matching:

    manifest.json           corpus id, embedding dim, document count, topic
                            metadata (id, label, keywords, native size), file map
    doc_embeddings.f32le    n_docs x dim float32, little-endian, row-major
    topic_embeddings.f32le  n_topics x dim float32, rows sorted by topic id
    assignments.csv         header ``doc_id,topic_id``; row order defines the
                            document index

Topic ids are integers >= -1. Id -1 is the outlier catch-all; non-outlier ids
must be contiguous from 0. Embeddings are stored as float32 (bit-exact across
write/load round trips) and promoted to float64 inside every computation.

If the outlier topic is declared but its row is absent from
``topic_embeddings.f32le``, the loader fills the row with the mean embedding of
the natively-outlier documents. A bundle with no outlier topic at all is valid
and is flagged as such (``has_outlier`` is False); downstream stages then run
in no-outlier mode.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateDocIdError,
    FormatError,
    MissingFileError,
    OutlierUnavailableError,
    PayloadSizeError,
    UnknownTopicError,
    ZeroVectorError,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"
DOC_EMBEDDINGS_NAME = "doc_embeddings.f32le"
TOPIC_EMBEDDINGS_NAME = "topic_embeddings.f32le"
ASSIGNMENTS_NAME = "assignments.csv"
OUTLIER_ID = -1

_F32 = np.dtype("<f4")


@dataclass(frozen=True)
class TopicMeta:
    """One topic of a model: id, human label, top keywords, native size."""

    id: int
    label: str
    keywords: tuple[str, ...]
    native_size: int


@dataclass
class CorpusBundle:
    """One corpus plus its fitted topic model, immutable after construction."""

    corpus_id: str
    dim: int
    doc_ids: list[str]
    doc_embeddings: np.ndarray
    topics: list[TopicMeta]
    topic_embeddings: np.ndarray
    native_assignments: dict[str, int]
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.doc_embeddings = np.ascontiguousarray(self.doc_embeddings, dtype=_F32)
        self.topic_embeddings = np.ascontiguousarray(self.topic_embeddings, dtype=_F32)
        if self.doc_embeddings.size == 0:
            self.doc_embeddings = self.doc_embeddings.reshape(0, self.dim)
        if self.topic_embeddings.size == 0:
            self.topic_embeddings = self.topic_embeddings.reshape(0, self.dim)

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_topics(self) -> int:
        return len(self.topics)

    @property
    def topic_ids(self) -> list[int]:
        return [t.id for t in self.topics]

    @property
    def has_outlier(self) -> bool:
        return any(t.id == OUTLIER_ID for t in self.topics)

    def topic_index(self, topic_id: int) -> int:
        """Row index of a topic id in ``topic_embeddings``."""
        for i, t in enumerate(self.topics):
            if t.id == topic_id:
                return i
        raise UnknownTopicError(f"corpus '{self.corpus_id}': unknown topic id {topic_id}")

    def topic_labels(self) -> dict[int, str]:
        return {t.id: t.label for t in self.topics}

    def validate(self) -> None:
        """Check every bundle invariant; raise a specific error on the first violation."""
        if self.dim <= 0:
            raise FormatError(f"corpus '{self.corpus_id}': dim must be positive, got {self.dim}")
        seen: set[str] = set()
        for doc_id in self.doc_ids:
            if doc_id in seen:
                raise DuplicateDocIdError(f"corpus '{self.corpus_id}': duplicate doc_id '{doc_id}'")
            seen.add(doc_id)
        if set(self.native_assignments) != seen:
            raise FormatError(
                f"corpus '{self.corpus_id}': assignments cover {len(self.native_assignments)} "
                f"doc ids but doc list has {len(seen)}"
            )
        _check_topic_ids(self.corpus_id, self.topic_ids)
        valid_ids = set(self.topic_ids)
        for doc_id, topic_id in self.native_assignments.items():
            if topic_id not in valid_ids:
                raise UnknownTopicError(
                    f"corpus '{self.corpus_id}': doc '{doc_id}' assigned unknown topic id {topic_id}"
                )
        if self.doc_embeddings.shape != (self.n_docs, self.dim):
            raise PayloadSizeError(
                f"corpus '{self.corpus_id}': doc embeddings shaped {self.doc_embeddings.shape}, "
                f"expected {(self.n_docs, self.dim)}"
            )
        if self.topic_embeddings.shape != (self.n_topics, self.dim):
            raise PayloadSizeError(
                f"corpus '{self.corpus_id}': topic embeddings shaped {self.topic_embeddings.shape}, "
                f"expected {(self.n_topics, self.dim)}"
            )
        _check_rows(self.corpus_id, self.doc_embeddings, self.doc_ids, "document")
        _check_rows(self.corpus_id, self.topic_embeddings, [str(t) for t in self.topic_ids], "topic")
        sizes: dict[int, int] = {t: 0 for t in valid_ids}
        for topic_id in self.native_assignments.values():
            sizes[topic_id] += 1
        for meta in self.topics:
            if meta.native_size != sizes[meta.id]:
                raise FormatError(
                    f"corpus '{self.corpus_id}': topic {meta.id} declares native_size "
                    f"{meta.native_size} but {sizes[meta.id]} documents are assigned to it"
                )


def _check_topic_ids(corpus_id: str, ids: list[int]) -> None:
    for t in ids:
        if not isinstance(t, int) or isinstance(t, bool) or t < OUTLIER_ID:
            raise FormatError(f"corpus '{corpus_id}': invalid topic id {t!r}")
    if len(set(ids)) != len(ids):
        raise FormatError(f"corpus '{corpus_id}': duplicate topic ids")
    if sorted(ids) != ids:
        raise FormatError(f"corpus '{corpus_id}': topics are not sorted by ascending id")
    non_outlier = [t for t in ids if t >= 0]
    if non_outlier != list(range(len(non_outlier))):
        raise FormatError(
            f"corpus '{corpus_id}': non-outlier topic ids must be contiguous from 0, got {non_outlier}"
        )


def _check_rows(corpus_id: str, matrix: np.ndarray, names: list[str], kind: str) -> None:
    if matrix.size and not np.isfinite(matrix).all():
        raise FormatError(f"corpus '{corpus_id}': {kind} embeddings contain non-finite values")
    if matrix.shape[0] == 0:
        return
    zero = np.flatnonzero(~np.any(matrix != 0, axis=1))
    if zero.size:
        raise ZeroVectorError(
            f"corpus '{corpus_id}': {kind} embedding row for '{names[int(zero[0])]}' is all zero"
        )


def outlier_centroid(bundle: CorpusBundle) -> np.ndarray:
    """Mean embedding (float64) of the documents natively assigned to the outlier topic.

    Used to stand in for a missing outlier-topic embedding row. Raises
    :class:`OutlierUnavailableError` when the corpus has no outlier documents.
    """
    rows = [i for i, d in enumerate(bundle.doc_ids) if bundle.native_assignments[d] == OUTLIER_ID]
    if not rows:
        raise OutlierUnavailableError(
            f"corpus '{bundle.corpus_id}': outlier embedding unavailable, no documents "
            "are natively assigned to the outlier topic"
        )
    return bundle.doc_embeddings[rows].astype(np.float64).mean(axis=0)


def load_bundle(path: str | Path) -> CorpusBundle:
    """Load and fully validate a bundle directory.

    Every invariant violation raises a distinct error naming the offending
    record; a returned bundle always satisfies all invariants.
    """
    root = Path(path)
    manifest = _read_manifest(root)
    corpus_id = manifest["corpus_id"]
    dim = manifest["dim"]
    n_docs = manifest["n_docs"]
    topics = [
        TopicMeta(
            id=entry["id"],
            label=entry["label"],
            keywords=tuple(entry["keywords"]),
            native_size=entry["native_size"],
        )
        for entry in manifest["topics"]
    ]
    _check_topic_ids(corpus_id, [t.id for t in topics])

    files = manifest["files"]
    doc_ids, assignments = _read_assignments(root / files["assignments"], corpus_id, n_docs)

    doc_emb = _read_matrix(root / files["doc_embeddings"], corpus_id, n_docs, dim, exact=True)

    warnings: list[str] = []
    topic_emb, topics = _read_topic_matrix(
        root / files["topic_embeddings"], corpus_id, topics, dim, doc_ids, doc_emb, assignments, warnings
    )
    if not any(t.id == OUTLIER_ID for t in topics):
        log.debug("corpus '%s': no outlier topic in bundle", corpus_id)

    bundle = CorpusBundle(
        corpus_id=corpus_id,
        dim=dim,
        doc_ids=doc_ids,
        doc_embeddings=doc_emb,
        topics=topics,
        topic_embeddings=topic_emb,
        native_assignments=assignments,
        warnings=warnings,
    )
    bundle.validate()
    return bundle


def _read_manifest(root: Path) -> dict:
    p = root / MANIFEST_NAME
    if not p.is_file():
        raise MissingFileError(f"missing bundle file: {p}")
    try:
        manifest = json.loads(p.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{p}: not valid JSON ({exc})") from exc
    for key in ("schema_version", "corpus_id", "dim", "n_docs", "topics", "files"):
        if key not in manifest:
            raise FormatError(f"{p}: manifest missing key '{key}'")
    if manifest["schema_version"] != SCHEMA_VERSION:
        raise FormatError(f"{p}: unsupported schema_version {manifest['schema_version']!r}")
    if not isinstance(manifest["dim"], int) or manifest["dim"] <= 0:
        raise FormatError(f"{p}: dim must be a positive integer")
    if not isinstance(manifest["n_docs"], int) or manifest["n_docs"] < 0:
        raise FormatError(f"{p}: n_docs must be a non-negative integer")
    for key in ("doc_embeddings", "topic_embeddings", "assignments"):
        if key not in manifest["files"]:
            raise FormatError(f"{p}: files map missing '{key}'")
    for entry in manifest["topics"]:
        for key in ("id", "label", "keywords", "native_size"):
            if key not in entry:
                raise FormatError(f"{p}: topic entry missing key '{key}'")
    return manifest


def _read_assignments(p: Path, corpus_id: str, n_docs: int) -> tuple[list[str], dict[str, int]]:
    if not p.is_file():
        raise MissingFileError(f"missing bundle file: {p}")
    doc_ids: list[str] = []
    assignments: dict[str, int] = {}
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["doc_id", "topic_id"]:
            raise FormatError(f"{p}: expected header 'doc_id,topic_id', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise FormatError(f"{p}:{lineno}: expected 2 columns, got {len(row)}")
            doc_id, raw = row
            try:
                topic_id = int(raw)
            except ValueError as exc:
                raise FormatError(f"{p}:{lineno}: topic_id '{raw}' is not an integer") from exc
            if doc_id in assignments:
                raise DuplicateDocIdError(f"corpus '{corpus_id}': duplicate doc_id '{doc_id}'")
            doc_ids.append(doc_id)
            assignments[doc_id] = topic_id
    if len(doc_ids) != n_docs:
        raise FormatError(
            f"{p}: manifest claims {n_docs} documents but assignments list {len(doc_ids)}"
        )
    return doc_ids, assignments


def _read_matrix(p: Path, corpus_id: str, n_rows: int, dim: int, exact: bool) -> np.ndarray:
    if not p.is_file():
        raise MissingFileError(f"missing bundle file: {p}")
    payload = p.read_bytes()
    expected = 4 * n_rows * dim
    if exact and len(payload) != expected:
        raise PayloadSizeError(
            f"{p}: payload is {len(payload)} bytes ({len(payload) // 4} floats), "
            f"expected {n_rows}x{dim} = {expected} bytes"
        )
    return np.frombuffer(payload, dtype=_F32).reshape(-1, dim).copy()


def _read_topic_matrix(
    p: Path,
    corpus_id: str,
    topics: list[TopicMeta],
    dim: int,
    doc_ids: list[str],
    doc_emb: np.ndarray,
    assignments: dict[str, int],
    warnings: list[str],
) -> tuple[np.ndarray, list[TopicMeta]]:
    if not p.is_file():
        raise MissingFileError(f"missing bundle file: {p}")
    payload = p.read_bytes()
    n_topics = len(topics)
    full = 4 * n_topics * dim
    has_outlier = any(t.id == OUTLIER_ID for t in topics)
    if len(payload) == full:
        return np.frombuffer(payload, dtype=_F32).reshape(-1, dim).copy(), topics
    if has_outlier and len(payload) == full - 4 * dim:
        # Outlier row absent from the file; topics are sorted so it would be row 0.
        rest = np.frombuffer(payload, dtype=_F32).reshape(-1, dim)
        outlier_docs = [i for i, d in enumerate(doc_ids) if assignments[d] == OUTLIER_ID]
        if outlier_docs:
            centroid = doc_emb[outlier_docs].astype(np.float64).mean(axis=0)
            warnings.append(
                f"corpus '{corpus_id}': outlier topic embedding missing from {p.name}; "
                f"filled with the centroid of {len(outlier_docs)} outlier documents"
            )
            matrix = np.vstack([centroid.astype(_F32), rest])
            return matrix, topics
        warnings.append(
            f"corpus '{corpus_id}': outlier topic declared with no embedding row and no "
            "outlier documents; dropping it and switching to no-outlier mode"
        )
        return rest.copy(), [t for t in topics if t.id != OUTLIER_ID]
    raise PayloadSizeError(
        f"{p}: payload is {len(payload)} bytes ({len(payload) // 4} floats), "
        f"expected {n_topics}x{dim} = {full} bytes"
    )


def write_bundle(bundle: CorpusBundle, path: str | Path) -> None:
    """Write a bundle directory; loading it back reproduces the bundle bit-exactly."""
    bundle.validate()
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "corpus_id": bundle.corpus_id,
        "dim": bundle.dim,
        "n_docs": bundle.n_docs,
        "topics": [
            {
                "id": t.id,
                "label": t.label,
                "keywords": list(t.keywords),
                "native_size": t.native_size,
            }
            for t in bundle.topics
        ],
        "files": {
            "doc_embeddings": DOC_EMBEDDINGS_NAME,
            "topic_embeddings": TOPIC_EMBEDDINGS_NAME,
            "assignments": ASSIGNMENTS_NAME,
        },
    }
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (root / DOC_EMBEDDINGS_NAME).write_bytes(bundle.doc_embeddings.astype(_F32, copy=False).tobytes(order="C"))
    (root / TOPIC_EMBEDDINGS_NAME).write_bytes(bundle.topic_embeddings.astype(_F32, copy=False).tobytes(order="C"))
    with (root / ASSIGNMENTS_NAME).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["doc_id", "topic_id"])
        for doc_id in bundle.doc_ids:
            writer.writerow([doc_id, bundle.native_assignments[doc_id]])
