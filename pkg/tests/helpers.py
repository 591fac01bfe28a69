"""Shared builders for test fixtures: bundles, tables, strength matrices."""

from __future__ import annotations

import numpy as np

from btm import CorpusBundle, TopicMeta
from btm.cooccur import PairCounts, StrengthMatrix, pairing_strengths
from btm.matcher import AssignmentTable, DocAssignment


def bundle(
    corpus_id: str,
    doc_vecs,
    assignments: list[int],
    topic_vecs,
    labels: dict[int, str] | None = None,
    topic_ids: list[int] | None = None,
) -> CorpusBundle:
    """Build a valid bundle from raw arrays; topic metadata is derived."""
    topic_vecs = np.asarray(topic_vecs, dtype=np.float64)
    doc_vecs = np.asarray(doc_vecs, dtype=np.float64)
    dim = topic_vecs.shape[1] if topic_vecs.size else doc_vecs.shape[1]
    doc_vecs = doc_vecs.reshape(len(assignments), dim)
    if topic_ids is None:
        n_plain = topic_vecs.shape[0] - (1 if -1 in assignments else 0)
        topic_ids = ([-1] if -1 in assignments else []) + list(range(n_plain))
    doc_ids = [f"{corpus_id}_d{i}" for i in range(len(assignments))]
    sizes = {t: 0 for t in topic_ids}
    for a in assignments:
        sizes[a] += 1
    topics = [
        TopicMeta(
            id=t,
            label=(labels or {}).get(t, f"topic {t}"),
            keywords=(f"kw{t}",),
            native_size=sizes[t],
        )
        for t in topic_ids
    ]
    b = CorpusBundle(
        corpus_id=corpus_id,
        dim=dim,
        doc_ids=doc_ids,
        doc_embeddings=doc_vecs,
        topics=topics,
        topic_embeddings=topic_vecs,
        native_assignments=dict(zip(doc_ids, assignments)),
    )
    b.validate()
    return b


def random_bundle(
    rng: np.random.Generator,
    corpus_id: str,
    n_docs: int,
    n_topics: int,
    dim: int,
    outlier_fraction: float = 0.0,
) -> CorpusBundle:
    """Random gaussian bundle; topic embeddings are unrelated to assignments."""
    ids = ([-1] if outlier_fraction > 0 else []) + list(range(n_topics))
    assignments = []
    for _ in range(n_docs):
        if outlier_fraction > 0 and rng.random() < outlier_fraction:
            assignments.append(-1)
        else:
            assignments.append(int(rng.integers(0, n_topics)))
    if outlier_fraction > 0 and -1 not in assignments:
        assignments[0] = -1
    for t in range(n_topics):
        if t not in assignments:
            assignments[rng.integers(0, n_docs)] = t
    docs = rng.standard_normal((n_docs, dim)) + 0.1
    topics = rng.standard_normal((len(ids), dim)) + 0.1
    return bundle(corpus_id, docs, assignments, topics, topic_ids=ids)


def table_from_pairs(
    pairs: list[tuple[int, int, int]],
    model1_ids: tuple[int, ...],
    model2_ids: tuple[int, ...],
) -> AssignmentTable:
    """Assignment table from (model1_topic, model2_topic, source_corpus) triples."""
    rows = [
        DocAssignment(
            doc_id=f"d{i}",
            source_corpus=src,
            model1_topic=m1,
            model2_topic=m2,
            cross_similarity=0.0,
        )
        for i, (m1, m2, src) in enumerate(pairs)
    ]
    return AssignmentTable(
        corpus1_id="c1",
        corpus2_id="c2",
        model1_topic_ids=tuple(model1_ids),
        model2_topic_ids=tuple(model2_ids),
        rows=rows,
    )


def strengths_from_rows(
    native_rows: dict[int, dict[int, int]],
    cross_ids: tuple[int, ...],
    direction: str = "1to2",
    pool: str = "both",
) -> tuple[PairCounts, StrengthMatrix]:
    """Counts and strengths from per-native-topic count dicts."""
    native_ids = tuple(sorted(native_rows))
    counts = np.zeros((len(native_ids), len(cross_ids)), dtype=np.int64)
    for i, t in enumerate(native_ids):
        for c, n in native_rows[t].items():
            counts[i, cross_ids.index(c)] = n
    pc = PairCounts(
        direction=direction,
        pool=pool,
        native_ids=native_ids,
        cross_ids=tuple(cross_ids),
        counts=counts,
        native_totals=counts.sum(axis=1),
    )
    return pc, pairing_strengths(pc)
