"""Agreement between pairing-strength matching and a cosine-similarity baseline.

Both methods label each native topic with its best cross topic. The strength
rater picks the argmax of the observed pairing strengths (outlier included);
the baseline picks the most cosine-similar cross topic embedding. Cohen's
kappa quantifies their chance-corrected agreement.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cooccur import StrengthMatrix
from .errors import DegenerateAgreementError, DimensionMismatchError, LabelDomainError
from .interchange import OUTLIER_ID, CorpusBundle
from .matcher import _unit_rows

log = logging.getLogger(__name__)


@dataclass
class MatchLabeling:
    """Per native topic: the single best cross topic under one method."""

    direction: str
    method: str
    labels: dict[int, int]
    scores: dict[int, float]

    def domain(self) -> list[int]:
        return sorted(self.labels)


def btm_match(strengths: StrengthMatrix) -> MatchLabeling:
    """Label each defined non-outlier native topic with its strongest cross topic.

    The cross outlier is an eligible label; ties go to the smallest cross id.
    """
    labels: dict[int, int] = {}
    scores: dict[int, float] = {}
    for t in strengths.defined_native_ids():
        row = strengths.strengths[strengths.native_index(t)]
        j = int(np.argmax(row))
        labels[t] = int(strengths.cross_ids[j])
        scores[t] = float(row[j])
    return MatchLabeling(direction=strengths.direction, method="btm", labels=labels, scores=scores)


def cosine_match(
    native: CorpusBundle,
    cross: CorpusBundle,
    include_outlier: bool = True,
    domain: Iterable[int] | None = None,
    direction: str = "",
) -> MatchLabeling:
    """Label native topics with the most cosine-similar cross topic embedding.

    The cross outlier embedding participates only when ``include_outlier`` is
    set and the cross model has one. ``domain`` restricts which native topics
    are labeled (defaults to all non-outlier topics).
    """
    if native.dim != cross.dim:
        raise DimensionMismatchError(
            f"embedding dims differ: model '{native.corpus_id}' has dim {native.dim}, "
            f"model '{cross.corpus_id}' has dim {cross.dim}"
        )
    if domain is None:
        wanted = [t.id for t in native.topics if t.id != OUTLIER_ID]
    else:
        wanted = sorted(domain)
    cross_entries = [
        t.id for t in cross.topics if include_outlier or t.id != OUTLIER_ID
    ]
    cross_rows = [cross.topic_index(t) for t in cross_entries]
    native_rows = [native.topic_index(t) for t in wanted]

    labels: dict[int, int] = {}
    scores: dict[int, float] = {}
    if wanted:
        n_vecs = _unit_rows(
            native.topic_embeddings[native_rows], f"model '{native.corpus_id}' topic embedding"
        )
        c_vecs = _unit_rows(
            cross.topic_embeddings[cross_rows], f"model '{cross.corpus_id}' topic embedding"
        )
        sims = n_vecs @ c_vecs.T
        # Candidate ids ascend, so the first maximum is the smallest-id tie break.
        for row, t in enumerate(wanted):
            j = int(np.argmax(sims[row]))
            labels[t] = cross_entries[j]
            scores[t] = float(np.clip(sims[row, j], -1.0, 1.0))
    return MatchLabeling(direction=direction, method="cosine", labels=labels, scores=scores)


def cohens_kappa(labels_a: MatchLabeling, labels_b: MatchLabeling) -> float:
    """Chance-corrected agreement between two labelings over the same topics.

        kappa = (p_o - p_e) / (1 - p_e)

    where p_o is the observed agreement rate and p_e the chance rate from the
    raters' label marginals. Equals 1 only for identical labelings.
    """
    domain = labels_a.domain()
    if domain != labels_b.domain():
        raise LabelDomainError(
            f"labelings cover different native topics: {domain} vs {labels_b.domain()}"
        )
    n = len(domain)
    if n == 0:
        raise LabelDomainError("labelings are empty")
    seq_a = [labels_a.labels[t] for t in domain]
    seq_b = [labels_b.labels[t] for t in domain]
    p_o = sum(x == y for x, y in zip(seq_a, seq_b)) / n
    count_a = Counter(seq_a)
    count_b = Counter(seq_b)
    p_e = sum(count_a[k] * count_b[k] for k in set(count_a) | set(count_b)) / (n * n)
    if p_e == 1.0:
        if p_o == 1.0:
            return 1.0
        raise DegenerateAgreementError(
            "chance agreement is exactly 1 while the labelings disagree"
        )
    return (p_o - p_e) / (1.0 - p_e)


@dataclass(frozen=True)
class Discrepancy:
    native_topic: int
    btm_label: int
    cosine_label: int
    btm_strength: float
    cosine_score: float
    outlier_involved: bool

    def to_json_dict(self) -> dict:
        return {
            "native_topic": self.native_topic,
            "btm_label": self.btm_label,
            "cosine_label": self.cosine_label,
            "btm_strength": float(self.btm_strength),
            "cosine_score": float(self.cosine_score),
            "outlier_involved": self.outlier_involved,
        }


def discrepancy_report(
    labels_btm: MatchLabeling,
    labels_cosine: MatchLabeling,
    strengths: StrengthMatrix,
) -> list[Discrepancy]:
    """List every disagreeing topic; flag those where either label is the outlier."""
    out = []
    for t in labels_btm.domain():
        lb = labels_btm.labels[t]
        lc = labels_cosine.labels[t]
        if lb == lc:
            continue
        out.append(
            Discrepancy(
                native_topic=t,
                btm_label=lb,
                cosine_label=lc,
                btm_strength=labels_btm.scores[t],
                cosine_score=labels_cosine.scores[t],
                outlier_involved=(lb == OUTLIER_ID or lc == OUTLIER_ID),
            )
        )
    return out


def validation_report(
    direction: str,
    labels_btm: MatchLabeling,
    labels_cosine: MatchLabeling,
    strengths: StrengthMatrix,
) -> dict:
    """JSON-ready agreement summary for one direction."""
    kappa = cohens_kappa(labels_btm, labels_cosine)
    domain = labels_btm.domain()
    agreements = sum(labels_btm.labels[t] == labels_cosine.labels[t] for t in domain)
    discrepancies = discrepancy_report(labels_btm, labels_cosine, strengths)
    return {
        "direction": direction,
        "kappa": float(kappa) + 0.0,
        "n_topics": len(domain),
        "n_agreements": int(agreements),
        "discrepancies": [d.to_json_dict() for d in discrepancies],
    }
