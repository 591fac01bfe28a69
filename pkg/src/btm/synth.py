"""Synthetic corpus pairs with planted structure, plus a brute-force oracle.

Geometry: axis 0 is a shared background direction; every document carries the
same background component, mimicking the common "language" component of real
embeddings. Each cluster sits on its own coordinate axis at a configurable
separation, with isotropic Gaussian spread. Shared clusters feed both corpora
from common centroids; unique clusters feed one corpus only. Outlier documents
scatter broadly around the bare background direction, which guarantees that a
document from a theme absent in the other corpus is more similar to that
corpus's outlier centroid than to any of its cluster centroids.

The oracle recomputes the whole pipeline with plain Python loops and no shared
code, so equivalence tests catch errors in either route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConfigError
from .interchange import OUTLIER_ID, CorpusBundle, TopicMeta

ORACLE_MAX_DOCS = 500
ORACLE_MAX_TOPICS = 16

_BACKGROUND_AXIS = 0
_OUTLIER_SPREAD_FACTOR = 0.75


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    dim: int = 16
    clusters_shared: int = 3
    clusters_unique_1: int = 0
    clusters_unique_2: int = 0
    docs_per_cluster: int = 30
    cluster_spread: float = 0.1
    centroid_separation: float = 1.0
    outlier_fraction: float = 0.0

    def __post_init__(self) -> None:
        if self.clusters_shared < 0 or self.clusters_unique_1 < 0 or self.clusters_unique_2 < 0:
            raise ConfigError("cluster counts must be non-negative")
        if self.clusters_shared + self.clusters_unique_1 == 0:
            raise ConfigError("corpus 1 needs at least one cluster")
        if self.clusters_shared + self.clusters_unique_2 == 0:
            raise ConfigError("corpus 2 needs at least one cluster")
        if self.docs_per_cluster < 1:
            raise ConfigError("docs_per_cluster must be at least 1")
        if self.cluster_spread <= 0:
            raise ConfigError("cluster_spread must be positive")
        if self.centroid_separation / self.cluster_spread < 1.0:
            raise ConfigError("centroid_separation must be at least cluster_spread")
        if not 0.0 <= self.outlier_fraction < 1.0:
            raise ConfigError("outlier_fraction must lie in [0, 1)")
        needed = 1 + self.clusters_shared + self.clusters_unique_1 + self.clusters_unique_2
        if self.dim < needed:
            raise ConfigError(
                f"dim={self.dim} too small: need {needed} axes "
                "(one background plus one per distinct cluster)"
            )

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"generator config must be a JSON object, got {type(data).__name__}")
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dim": self.dim,
            "clusters_shared": self.clusters_shared,
            "clusters_unique_1": self.clusters_unique_1,
            "clusters_unique_2": self.clusters_unique_2,
            "docs_per_cluster": self.docs_per_cluster,
            "cluster_spread": self.cluster_spread,
            "centroid_separation": self.centroid_separation,
            "outlier_fraction": self.outlier_fraction,
        }


@dataclass(frozen=True)
class GroundTruth:
    """Which topic ids correspond across the pair, and which are planted unique."""

    shared_pairs: tuple[tuple[int, int], ...]
    unique_topics_1: tuple[int, ...]
    unique_topics_2: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "shared_pairs": [list(p) for p in self.shared_pairs],
            "unique_topics_1": list(self.unique_topics_1),
            "unique_topics_2": list(self.unique_topics_2),
        }


def generate_pair(config: SynthConfig) -> tuple[CorpusBundle, CorpusBundle, GroundTruth]:
    """Deterministically generate a corpus pair with planted thematic structure.

    Native assignments come from the planted ground truth, not from clustering,
    and topic embeddings are the true centroids; the outlier topic's embedding
    is the true center of the background distribution (an empirical mean would
    wander off-center for small outlier counts and blur the planted margins).
    """
    ss = np.random.SeedSequence(config.seed)
    # Cluster documents draw from their own streams so changing the outlier
    # fraction leaves them untouched.
    rng_c1, rng_o1, rng_c2, rng_o2 = (np.random.default_rng(s) for s in ss.spawn(4))

    s = config.clusters_shared
    shared_axes = list(range(1, 1 + s))
    unique1_axes = list(range(1 + s, 1 + s + config.clusters_unique_1))
    unique2_axes = list(
        range(1 + s + config.clusters_unique_1, 1 + s + config.clusters_unique_1 + config.clusters_unique_2)
    )

    bundle1 = _build_corpus(config, "synth-c1", 1, shared_axes + unique1_axes, rng_c1, rng_o1)
    bundle2 = _build_corpus(config, "synth-c2", 2, shared_axes + unique2_axes, rng_c2, rng_o2)

    truth = GroundTruth(
        shared_pairs=tuple((k, k) for k in range(s)),
        unique_topics_1=tuple(range(s, s + config.clusters_unique_1)),
        unique_topics_2=tuple(range(s, s + config.clusters_unique_2)),
    )
    return bundle1, bundle2, truth


def _build_corpus(
    config: SynthConfig,
    corpus_id: str,
    corpus_no: int,
    axes: list[int],
    rng_clusters: np.random.Generator,
    rng_outliers: np.random.Generator,
) -> CorpusBundle:
    dim = config.dim
    m = config.centroid_separation
    centroids = np.zeros((len(axes), dim))
    centroids[:, _BACKGROUND_AXIS] = m
    for k, axis in enumerate(axes):
        centroids[k, axis] = config.centroid_separation

    blocks = []
    assignments: list[int] = []
    for k in range(len(axes)):
        block = centroids[k] + config.cluster_spread * rng_clusters.standard_normal(
            (config.docs_per_cluster, dim)
        )
        blocks.append(block)
        assignments.extend([k] * config.docs_per_cluster)

    n_cluster_docs = config.docs_per_cluster * len(axes)
    f = config.outlier_fraction
    n_outliers = int(round(f * n_cluster_docs / (1.0 - f))) if f > 0 else 0
    background = np.zeros(dim)
    background[_BACKGROUND_AXIS] = m
    if n_outliers:
        outliers = background + _OUTLIER_SPREAD_FACTOR * m * rng_outliers.standard_normal(
            (n_outliers, dim)
        )
        blocks.append(outliers)
        assignments.extend([OUTLIER_ID] * n_outliers)

    docs = np.vstack(blocks)
    doc_ids = [f"c{corpus_no}_d{i:05d}" for i in range(len(assignments))]

    topics = []
    topic_rows = []
    if n_outliers:
        topics.append(
            TopicMeta(
                id=OUTLIER_ID,
                label="outliers",
                keywords=("outlier", "background"),
                native_size=n_outliers,
            )
        )
        topic_rows.append(background)
    shared = config.clusters_shared
    for k, axis in enumerate(axes):
        if k < shared:
            label = f"shared theme {k}"
        else:
            label = f"corpus-{corpus_no} theme {k}"
        topics.append(
            TopicMeta(
                id=k,
                label=label,
                keywords=(f"theme-{axis}", "synthetic"),
                native_size=config.docs_per_cluster,
            )
        )
        topic_rows.append(centroids[k])

    bundle = CorpusBundle(
        corpus_id=corpus_id,
        dim=dim,
        doc_ids=doc_ids,
        doc_embeddings=docs,
        topics=topics,
        topic_embeddings=np.vstack(topic_rows),
        native_assignments=dict(zip(doc_ids, assignments)),
    )
    bundle.validate()
    return bundle


# ---------------------------------------------------------------------------
# Brute-force oracle: plain loops, no shared code with the pipeline modules.
# ---------------------------------------------------------------------------


@dataclass
class OracleDirection:
    counts: dict[tuple[int, int], int]
    totals: dict[int, int]
    strengths: dict[tuple[int, int], float]
    c: float
    c_w: float
    u: float
    u_w: float
    a: float
    a_w: float
    sa: dict[int, float]
    unique: list[int]
    relationship: str


@dataclass
class OracleReport:
    pool: str
    directions: dict[str, OracleDirection]


def _plain_cosine(u: list[float], v: list[float]) -> float:
    num = nu = nv = 0.0
    for x, y in zip(u, v):
        num += x * y
        nu += x * x
        nv += y * y
    return num / math.sqrt(nu * nv)


def _plain_assign(doc_vecs: list[list[float]], topic_ids: list[int], topic_vecs: list[list[float]]) -> list[int]:
    out = []
    for doc in doc_vecs:
        best_id = topic_ids[0]
        best = _plain_cosine(doc, topic_vecs[0])
        for tid, tv in zip(topic_ids[1:], topic_vecs[1:]):
            c = _plain_cosine(doc, tv)
            if c > best:
                best, best_id = c, tid
        out.append(best_id)
    return out


def brute_force_report(
    bundle1: CorpusBundle, bundle2: CorpusBundle, pool: str = "both"
) -> OracleReport:
    """Recompute counts, strengths, and every corpus factor with naive loops.

    Refuses instances beyond 500 documents or 16 topics per model; this exists
    to check the pipeline, not to run at scale.
    """
    if pool not in ("both", "native"):
        raise ConfigError(f"pool must be 'both' or 'native', got {pool!r}")
    for b in (bundle1, bundle2):
        if b.n_docs > ORACLE_MAX_DOCS or b.n_topics > ORACLE_MAX_TOPICS:
            raise ConfigError(
                f"corpus '{b.corpus_id}' too large for the brute-force oracle "
                f"({b.n_docs} docs, {b.n_topics} topics)"
            )

    docs1 = [row.tolist() for row in bundle1.doc_embeddings.astype(np.float64)]
    docs2 = [row.tolist() for row in bundle2.doc_embeddings.astype(np.float64)]
    t1_ids = bundle1.topic_ids
    t2_ids = bundle2.topic_ids
    t1_vecs = [row.tolist() for row in bundle1.topic_embeddings.astype(np.float64)]
    t2_vecs = [row.tolist() for row in bundle2.topic_embeddings.astype(np.float64)]

    cross_for_1 = _plain_assign(docs1, t2_ids, t2_vecs) if docs1 else []
    cross_for_2 = _plain_assign(docs2, t1_ids, t1_vecs) if docs2 else []
    native_1 = [bundle1.native_assignments[d] for d in bundle1.doc_ids]
    native_2 = [bundle2.native_assignments[d] for d in bundle2.doc_ids]

    # Per document: (model-1 topic, model-2 topic, source corpus).
    pairs = [(n, c, 1) for n, c in zip(native_1, cross_for_1)]
    pairs += [(c, n, 2) for n, c in zip(native_2, cross_for_2)]

    directions = {}
    for direction, native_ids, cross_ids, native_corpus in (
        ("1to2", t1_ids, t2_ids, 1),
        ("2to1", t2_ids, t1_ids, 2),
    ):
        counts: dict[tuple[int, int], int] = {}
        for m1, m2, src in pairs:
            if pool == "native" and src != native_corpus:
                continue
            key = (m1, m2) if direction == "1to2" else (m2, m1)
            counts[key] = counts.get(key, 0) + 1
        directions[direction] = _oracle_direction(direction, native_ids, cross_ids, counts)
    return OracleReport(pool=pool, directions=directions)


def _oracle_direction(
    direction: str, native_ids: Iterable[int], cross_ids: Iterable[int], counts: dict
) -> OracleDirection:
    native_ids = list(native_ids)
    cross_ids = list(cross_ids)
    totals = {
        t: sum(counts.get((t, c), 0) for c in cross_ids) for t in native_ids
    }
    strengths = {
        (t, c): counts.get((t, c), 0) / totals[t]
        for t in native_ids
        for c in cross_ids
        if totals[t] > 0
    }
    rows = [t for t in native_ids if t != OUTLIER_ID and totals[t] > 0]
    if not rows:
        raise ConfigError(f"oracle: no defined non-outlier rows in direction {direction}")

    closeness = {t: sum(strengths[(t, c)] for c in cross_ids if c != OUTLIER_ID) for t in rows}
    uniq = {t: strengths.get((t, OUTLIER_ID), 0.0) for t in rows}
    sa: dict[int, float] = {}
    for t in rows:
        best = 0.0
        first = True
        for c in cross_ids:
            if c == OUTLIER_ID:
                continue
            v = strengths[(t, c)]
            if first or v > best:
                best, first = v, False
        sa[t] = best

    weight = sum(totals[t] for t in rows)
    c = sum(closeness[t] for t in rows) / len(rows)
    c_w = sum(totals[t] * closeness[t] for t in rows) / weight
    u = sum(uniq[t] for t in rows) / len(rows)
    u_w = sum(totals[t] * uniq[t] for t in rows) / weight
    a = sum(sa[t] for t in rows) / len(rows)
    a_w = sum(totals[t] * sa[t] for t in rows) / weight

    unique = sorted((t for t in rows if uniq[t] >= 0.5), key=lambda t: (-uniq[t], t))
    if u >= 0.5 and a >= 0.5:
        relationship = "intermediate"
    elif u >= 0.5:
        relationship = "independent"
    elif a >= 0.5:
        relationship = "overlap-subset"
    else:
        relationship = "overlap-multifaceted"

    return OracleDirection(
        counts=counts,
        totals=totals,
        strengths=strengths,
        c=c,
        c_w=c_w,
        u=u,
        u_w=u_w,
        a=a,
        a_w=a_w,
        sa=sa,
        unique=unique,
        relationship=relationship,
    )
