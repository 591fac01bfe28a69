"""Reciprocal cross-corpus topic assignment.

Each document is matched to the most cosine-similar topic of the model trained
on the other corpus, with the outlier topic participating as an ordinary
candidate whenever the cross model carries one. Ties always go to the smallest
topic id, so the result is independent of evaluation order and thread count.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCorpusError,
    InternalInvariantError,
    ZeroVectorError,
)
from .interchange import CorpusBundle

log = logging.getLogger(__name__)

# Documents are processed in fixed-size blocks so the arithmetic (and therefore
# the output bytes) cannot depend on how many worker threads are in flight.
_BLOCK = 256


@dataclass(frozen=True, slots=True)
class DocAssignment:
    """One document's topic under both models; exactly one side is native."""

    doc_id: str
    source_corpus: int
    model1_topic: int
    model2_topic: int
    cross_similarity: float


@dataclass
class AssignmentTable:
    """Native and cross topic assignments for every document of both corpora."""

    corpus1_id: str
    corpus2_id: str
    model1_topic_ids: tuple[int, ...]
    model2_topic_ids: tuple[int, ...]
    rows: list[DocAssignment] = field(default_factory=list)

    def validate(self) -> None:
        seen: set[tuple[int, str]] = set()
        ids1, ids2 = set(self.model1_topic_ids), set(self.model2_topic_ids)
        for row in self.rows:
            key = (row.source_corpus, row.doc_id)
            if key in seen:
                raise InternalInvariantError(f"document '{row.doc_id}' appears twice in the table")
            seen.add(key)
            if row.model1_topic not in ids1:
                raise InternalInvariantError(
                    f"document '{row.doc_id}': model-1 topic {row.model1_topic} not in model 1"
                )
            if row.model2_topic not in ids2:
                raise InternalInvariantError(
                    f"document '{row.doc_id}': model-2 topic {row.model2_topic} not in model 2"
                )
            if not -1.0 <= row.cross_similarity <= 1.0:
                raise InternalInvariantError(
                    f"document '{row.doc_id}': cross similarity {row.cross_similarity} outside [-1, 1]"
                )


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between two vectors, in [-1, 1].

    Symmetric and invariant under positive rescaling of either argument.
    """
    a = np.asarray(u, dtype=np.float64).ravel()
    b = np.asarray(v, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector dims differ: {a.shape[0]} vs {b.shape[0]}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(a / na, b / nb), -1.0, 1.0))


def _unit_rows(matrix: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(m, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVectorError(f"{what} row {int(zero[0])} is a zero vector")
    return m / norms[:, None]


def assign_cross_topics(
    docs: CorpusBundle, cross_model: CorpusBundle, threads: int = 1
) -> list[tuple[str, int, float]]:
    """Match every document of ``docs`` to its most similar ``cross_model`` topic.

    Returns ``(doc_id, topic_id, similarity)`` triples in document order. The
    argmax runs over all cross topics, outlier included when the cross model has
    one; equal scores resolve to the smallest topic id.
    """
    if docs.dim != cross_model.dim:
        raise DimensionMismatchError(
            f"embedding dims differ: corpus '{docs.corpus_id}' has dim {docs.dim}, "
            f"cross model '{cross_model.corpus_id}' has dim {cross_model.dim}"
        )
    if cross_model.n_topics == 0:
        raise EmptyCorpusError(f"cross model '{cross_model.corpus_id}' has no topics")
    if docs.n_docs == 0:
        return []

    doc_vecs = _unit_rows(docs.doc_embeddings, f"corpus '{docs.corpus_id}' document embedding")
    topic_vecs = _unit_rows(
        cross_model.topic_embeddings, f"model '{cross_model.corpus_id}' topic embedding"
    )
    # Topic rows are sorted by ascending id, so argmax's first-maximum rule is
    # exactly the smallest-id tie break.
    topic_ids = np.array(cross_model.topic_ids, dtype=np.int64)

    starts = range(0, docs.n_docs, _BLOCK)

    def one_block(start: int) -> tuple[np.ndarray, np.ndarray]:
        sims = doc_vecs[start : start + _BLOCK] @ topic_vecs.T
        winner = np.argmax(sims, axis=1)
        best = sims[np.arange(sims.shape[0]), winner]
        return topic_ids[winner], np.clip(best, -1.0, 1.0)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(one_block, starts))
    else:
        blocks = [one_block(s) for s in starts]

    chosen = np.concatenate([b[0] for b in blocks])
    scores = np.concatenate([b[1] for b in blocks])
    return [
        (doc_id, int(topic), float(score))
        for doc_id, topic, score in zip(docs.doc_ids, chosen, scores)
    ]


def build_assignment_table(
    bundle1: CorpusBundle, bundle2: CorpusBundle, threads: int = 1
) -> AssignmentTable:
    """Combine native assignments with both reciprocal cross-assignment runs.

    Corpus-1 documents keep their native model-1 topic and receive a model-2
    topic; corpus-2 documents the reverse. Every document of either corpus
    appears exactly once.
    """
    table = AssignmentTable(
        corpus1_id=bundle1.corpus_id,
        corpus2_id=bundle2.corpus_id,
        model1_topic_ids=tuple(bundle1.topic_ids),
        model2_topic_ids=tuple(bundle2.topic_ids),
    )
    if bundle1.n_docs:
        for (doc_id, topic, sim) in assign_cross_topics(bundle1, bundle2, threads=threads):
            table.rows.append(
                DocAssignment(
                    doc_id=doc_id,
                    source_corpus=1,
                    model1_topic=bundle1.native_assignments[doc_id],
                    model2_topic=topic,
                    cross_similarity=sim,
                )
            )
    if bundle2.n_docs:
        for (doc_id, topic, sim) in assign_cross_topics(bundle2, bundle1, threads=threads):
            table.rows.append(
                DocAssignment(
                    doc_id=doc_id,
                    source_corpus=2,
                    model1_topic=topic,
                    model2_topic=bundle2.native_assignments[doc_id],
                    cross_similarity=sim,
                )
            )
    table.validate()
    return table


def write_assignment_table_csv(table: AssignmentTable, path: str | Path) -> None:
    """Export ``doc_id,source_corpus,model1_topic,model2_topic,cross_similarity``."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["doc_id", "source_corpus", "model1_topic", "model2_topic", "cross_similarity"])
        for row in table.rows:
            writer.writerow(
                [row.doc_id, row.source_corpus, row.model1_topic, row.model2_topic, repr(row.cross_similarity)]
            )
