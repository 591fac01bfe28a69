"""Serialize a fitted topic model and its corpus into a bundle directory.

The bundle layout is the interchange contract of the analysis engine:

    manifest.json           corpus id, dim, n_docs, topic metadata, file map
    doc_embeddings.f32le    n_docs x dim float32 little-endian, row-major
    topic_embeddings.f32le  n_topics x dim float32, rows sorted by topic id
    assignments.csv         header ``doc_id,topic_id``, one row per document

Embeddings are converted to float32 on write, which is lossy beyond roughly 7
significant digits; the engine computes in float64 either way.

Two input shapes are supported. A fitted embedding-based topic model is read
through its conventional surface: ``topics_`` (per-document topic ids, -1 for
outliers), ``topic_embeddings_`` (one row per topic, outlier row first when
present), and ``get_topic(id)`` returning the weighted term representation.
Alternatively a generic triple of document embeddings, topic embeddings, and
assignments covers any framework, including probabilistic models with post-hoc
outlier labels. Document embeddings must always be supplied explicitly since
fitted models do not reliably retain them.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CountMismatchError, ExportError

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
OUTLIER_ID = -1
MAX_KEYWORDS = 10
LABEL_WORDS = 4

_F32 = np.dtype("<f4")


@dataclass
class ExportRequest:
    """Everything needed to produce one bundle directory."""

    corpus_id: str
    out: Path | str
    model: object | None = None
    doc_embeddings: np.ndarray | None = None
    topic_embeddings: np.ndarray | None = None
    assignments: list[int] | None = None
    doc_ids: list[str] | None = None
    texts: list[dict] | None = None
    keywords: dict[int, list[str]] | None = None
    labels: dict[int, str] | None = None
    warnings: list[str] = field(default_factory=list)


def export_bundle(request: ExportRequest) -> Path:
    """Write the bundle directory and return its path.

    Raises :class:`ExportError` when the inputs cannot form a valid bundle;
    the resulting directory always passes the engine's loader validation.
    """
    doc_ids = _resolve_doc_ids(request)
    doc_emb = _resolve_doc_embeddings(request, len(doc_ids))
    assignments = _resolve_assignments(request, len(doc_ids))
    topic_ids = _topic_id_range(assignments)
    topic_emb = _resolve_topic_embeddings(request, topic_ids, assignments, doc_emb)
    keywords, labels = _resolve_representations(request, topic_ids)

    sizes = {t: 0 for t in topic_ids}
    for a in assignments:
        sizes[a] += 1

    root = Path(request.out)
    root.mkdir(parents=True, exist_ok=True)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "corpus_id": request.corpus_id,
        "dim": int(doc_emb.shape[1]),
        "n_docs": len(doc_ids),
        "topics": [
            {
                "id": t,
                "label": labels[t],
                "keywords": keywords[t],
                "native_size": sizes[t],
            }
            for t in topic_ids
        ],
        "files": {
            "doc_embeddings": "doc_embeddings.f32le",
            "topic_embeddings": "topic_embeddings.f32le",
            "assignments": "assignments.csv",
        },
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (root / "doc_embeddings.f32le").write_bytes(doc_emb.astype(_F32).tobytes(order="C"))
    (root / "topic_embeddings.f32le").write_bytes(topic_emb.astype(_F32).tobytes(order="C"))
    with (root / "assignments.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["doc_id", "topic_id"])
        for doc_id, topic in zip(doc_ids, assignments):
            writer.writerow([doc_id, topic])
    log.info("bundle '%s' written to %s", request.corpus_id, root)
    return root


def _resolve_doc_ids(request: ExportRequest) -> list[str]:
    if request.doc_ids is not None:
        ids = [str(d) for d in request.doc_ids]
    elif request.texts is not None:
        ids = [str(entry["id"]) for entry in request.texts]
    elif request.doc_embeddings is not None:
        ids = [f"doc_{i:06d}" for i in range(len(request.doc_embeddings))]
    else:
        raise ExportError("no documents: supply texts, doc_ids, or doc_embeddings")
    if len(set(ids)) != len(ids):
        raise ExportError("document ids are not unique")
    return ids


def _resolve_doc_embeddings(request: ExportRequest, n_docs: int) -> np.ndarray:
    if request.doc_embeddings is None:
        raise ExportError(
            "document embeddings are required: fitted models do not retain them, "
            "pass the matrix used during fitting via doc_embeddings"
        )
    emb = np.asarray(request.doc_embeddings, dtype=np.float64)
    if emb.ndim != 2:
        raise ExportError(f"doc_embeddings must be 2-D, got shape {emb.shape}")
    if emb.shape[0] != n_docs:
        raise CountMismatchError(
            f"count mismatch: {n_docs} documents but {emb.shape[0]} embedding rows"
        )
    if not np.isfinite(emb).all():
        raise ExportError("doc_embeddings contain non-finite values")
    if emb.shape[0] and not np.any(emb != 0, axis=1).all():
        raise ExportError("doc_embeddings contain an all-zero row")
    return emb


def _resolve_assignments(request: ExportRequest, n_docs: int) -> list[int]:
    if request.assignments is not None:
        assignments = [int(a) for a in request.assignments]
    elif request.model is not None and hasattr(request.model, "topics_"):
        assignments = [int(a) for a in request.model.topics_]
    else:
        raise ExportError("no topic assignments: supply assignments or a fitted model")
    if len(assignments) != n_docs:
        raise CountMismatchError(
            f"count mismatch: {n_docs} documents but {len(assignments)} assignments"
        )
    return assignments


def _topic_id_range(assignments: list[int]) -> list[int]:
    distinct = sorted(set(assignments))
    if distinct and distinct[0] < OUTLIER_ID:
        raise ExportError(f"invalid topic id {distinct[0]} in assignments")
    plain = [t for t in distinct if t >= 0]
    if plain and plain != list(range(plain[-1] + 1)):
        raise ExportError(
            f"non-outlier topic ids must be contiguous from 0, got {plain}"
        )
    ids = list(range(plain[-1] + 1)) if plain else []
    if OUTLIER_ID in distinct:
        ids = [OUTLIER_ID] + ids
    if not ids:
        raise ExportError("assignments name no topics")
    return ids


def _resolve_topic_embeddings(
    request: ExportRequest,
    topic_ids: list[int],
    assignments: list[int],
    doc_emb: np.ndarray,
) -> np.ndarray:
    if request.topic_embeddings is not None:
        matrix = np.asarray(request.topic_embeddings, dtype=np.float64)
    elif request.model is not None and hasattr(request.model, "topic_embeddings_"):
        matrix = np.asarray(request.model.topic_embeddings_, dtype=np.float64)
    else:
        raise ExportError("no topic embeddings: supply topic_embeddings or a fitted model")
    if matrix.ndim != 2 or matrix.shape[1] != doc_emb.shape[1]:
        raise ExportError(
            f"topic embeddings shaped {matrix.shape} do not match document dim {doc_emb.shape[1]}"
        )
    has_outlier = OUTLIER_ID in topic_ids
    if matrix.shape[0] == len(topic_ids):
        return matrix
    if has_outlier and matrix.shape[0] == len(topic_ids) - 1:
        # Outlier embedding missing: stand in with the outlier documents' mean,
        # mirroring what the engine's loader would reconstruct.
        rows = [i for i, a in enumerate(assignments) if a == OUTLIER_ID]
        centroid = doc_emb[rows].mean(axis=0)
        request.warnings.append(
            "topic embeddings lack the outlier row; filled with the centroid of "
            f"{len(rows)} outlier documents"
        )
        log.warning(request.warnings[-1])
        return np.vstack([centroid, matrix])
    raise CountMismatchError(
        f"count mismatch: {len(topic_ids)} topics but {matrix.shape[0]} topic embedding rows"
    )


def _resolve_representations(
    request: ExportRequest, topic_ids: list[int]
) -> tuple[dict[int, list[str]], dict[int, str]]:
    keywords: dict[int, list[str]] = {}
    labels: dict[int, str] = {}
    for t in topic_ids:
        words: list[str] = []
        if request.keywords and t in request.keywords:
            words = [str(w) for w in request.keywords[t]]
        elif request.model is not None and hasattr(request.model, "get_topic"):
            rep = request.model.get_topic(t)
            if rep:
                words = [str(w) for w, _ in rep][:MAX_KEYWORDS]
        if request.labels and t in request.labels:
            label = request.labels[t]
        elif t == OUTLIER_ID:
            label = "outliers"
        elif words:
            label = "_".join(words[:LABEL_WORDS])
        else:
            label = f"topic {t}"
        keywords[t] = words
        labels[t] = label
    return keywords, labels
