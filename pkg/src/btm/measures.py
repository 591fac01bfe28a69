"""Corpus- and topic-level measures over a pairing-strength matrix.

All corpus factors average over defined, non-outlier native topic rows:

    closeness       C   = mean_i sum_{j>=0} S(i, j)          C_w size-weighted
    uniqueness      U   = mean_i S(i, outlier) = 1 - C       U_w = 1 - C_w
    alignment       SA(i) = max_{j>=0} S(i, j)
                    A   = mean_i SA(i)                       A_w size-weighted

The skew theta = C_w - C tells whether large or small native topics drive the
relationship. Since SA(i) <= 1 - S(i, outlier) row by row, high uniqueness and
high alignment cannot hold at once: A <= 1 - U.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .cooccur import DirectionDiagnostics, StrengthMatrix
from .errors import InternalInvariantError, NoNativeTopicsError
from .interchange import OUTLIER_ID, CorpusBundle

log = logging.getLogger(__name__)

UNIQUE_TOPIC_THRESHOLD = 0.5

# Size skew is called out only when the weighted and unweighted factors differ
# by at least this much.
SKEW_CUTOFF = 0.1

RELATIONSHIP_CUTOFF = 0.5

IDENTITY_TOL = 1e-12
BOUND_TOL = 1e-9


def _defined_non_outlier(s: StrengthMatrix) -> list[int]:
    rows = s.defined_native_ids(include_outlier=False)
    if not rows:
        raise NoNativeTopicsError(
            f"direction {s.direction}: no native topics with pooled documents"
        )
    return rows


def _cross_masks(s: StrengthMatrix) -> np.ndarray:
    return np.array([c != OUTLIER_ID for c in s.cross_ids], dtype=bool)


def corpus_closeness(strengths: StrengthMatrix) -> tuple[float, float]:
    """Mean and size-weighted mean of per-topic closeness totals.

    A topic's closeness total is its strength mass on non-outlier cross topics;
    the native outlier row and the cross outlier column never contribute.
    """
    rows = _defined_non_outlier(strengths)
    keep = _cross_masks(strengths)
    totals = np.array(
        [strengths.strengths[strengths.native_index(t)][keep].sum() for t in rows]
    )
    sizes = np.array([strengths.size_of(t) for t in rows], dtype=np.float64)
    c = float(totals.mean())
    c_w = float((sizes * totals).sum() / sizes.sum())
    return c, c_w


def corpus_uniqueness(strengths: StrengthMatrix) -> tuple[float, float]:
    """Mean and size-weighted mean of per-topic uniqueness (outlier-column strength).

    Identically zero when the cross model has no outlier topic.
    """
    rows = _defined_non_outlier(strengths)
    if not strengths.has_cross_outlier:
        return 0.0, 0.0
    j = list(strengths.cross_ids).index(OUTLIER_ID)
    uniq = np.array([strengths.strengths[strengths.native_index(t), j] for t in rows])
    sizes = np.array([strengths.size_of(t) for t in rows], dtype=np.float64)
    u = float(uniq.mean())
    u_w = float((sizes * uniq).sum() / sizes.sum())
    return u, u_w


def closeness_skew(c: float, c_w: float) -> tuple[float, str]:
    """Difference between weighted and unweighted closeness, with its reading."""
    theta = c_w - c
    if theta >= SKEW_CUTOFF:
        label = "larger-topic-driven"
    elif theta <= -SKEW_CUTOFF:
        label = "smaller-topic-driven"
    else:
        label = "size-independent"
    return theta, label


def alignment_strength(strengths: StrengthMatrix) -> dict[int, tuple[float, int | None]]:
    """Per defined native topic: largest non-outlier strength and its cross topic.

    Ties resolve to the smallest cross topic id. Undefined rows are skipped.
    The native outlier row is included here (for diagnostics) but never enters
    the corpus alignment averages.
    """
    keep = _cross_masks(strengths)
    cross = [c for c in strengths.cross_ids if c != OUTLIER_ID]
    out: dict[int, tuple[float, int | None]] = {}
    for t in strengths.defined_native_ids(include_outlier=True):
        row = strengths.strengths[strengths.native_index(t)][keep]
        if row.size == 0:
            log.warning(
                "direction %s: cross model has no non-outlier topics; alignment of "
                "topic %s reported as 0",
                strengths.direction,
                t,
            )
            out[t] = (0.0, None)
            continue
        j = int(np.argmax(row))
        out[t] = (float(row[j]), cross[j])
    return out


def corpus_alignment(
    sa_by_topic: Mapping[int, tuple[float, int | None] | float],
    sizes: Mapping[int, int],
) -> tuple[float, float]:
    """Mean and size-weighted mean alignment strength over non-outlier native topics."""
    topics = sorted(t for t in sa_by_topic if t != OUTLIER_ID)
    if not topics:
        raise NoNativeTopicsError("no non-outlier native topics with alignment values")
    values = []
    for t in topics:
        v = sa_by_topic[t]
        values.append(v[0] if isinstance(v, tuple) else float(v))
    values = np.array(values, dtype=np.float64)
    weights = np.array([sizes[t] for t in topics], dtype=np.float64)
    a = float(values.mean())
    a_w = float((weights * values).sum() / weights.sum())
    return a, a_w


@dataclass(frozen=True)
class UniqueTopic:
    topic: int
    uniqueness: float
    label: str | None = None


def unique_topics(
    strengths: StrengthMatrix,
    threshold: float = UNIQUE_TOPIC_THRESHOLD,
    labels: Mapping[int, str] | None = None,
) -> list[UniqueTopic]:
    """Native topics whose outlier-column strength reaches the threshold (inclusive).

    Sorted by uniqueness descending, then topic id ascending. Empty (with a
    logged warning) when the cross model has no outlier topic.
    """
    if not strengths.has_cross_outlier:
        log.warning(
            "direction %s: cross model has no outlier topic; no unique topics can be detected",
            strengths.direction,
        )
        return []
    j = list(strengths.cross_ids).index(OUTLIER_ID)
    found = []
    for t in strengths.defined_native_ids():
        uniq = float(strengths.strengths[strengths.native_index(t), j])
        if uniq >= threshold:
            found.append(UniqueTopic(topic=t, uniqueness=uniq, label=labels.get(t) if labels else None))
    found.sort(key=lambda r: (-r.uniqueness, r.topic))
    return found


def classify_relationship(u: float, a: float) -> str:
    """Read the uniqueness/alignment pair as a corpus relationship.

    Low/low means the cross corpus spreads the native themes over several
    topics; low uniqueness with high alignment suggests subsets of one parent
    corpus; high uniqueness with low alignment means largely independent
    corpora. Both high is arithmetically impossible except at the exact 0.5/0.5
    corner, which is reported as intermediate.
    """
    if not (0.0 <= u <= 1.0 and 0.0 <= a <= 1.0):
        raise InternalInvariantError(f"factors outside [0, 1]: U={u!r}, A={a!r}")
    if u + a > 1.0 + BOUND_TOL:
        raise InternalInvariantError(
            f"uniqueness {u!r} and alignment {a!r} sum above 1; the per-topic bound is broken"
        )
    high_u = u >= RELATIONSHIP_CUTOFF
    high_a = a >= RELATIONSHIP_CUTOFF
    if high_u and high_a:
        return "intermediate"
    if high_u:
        return "independent"
    if high_a:
        return "overlap-subset"
    return "overlap-multifaceted"


@dataclass
class TopicRow:
    """Everything reported per non-outlier native topic."""

    topic: int
    label: str
    native_size: int
    pool_size: int
    defined: bool
    uniqueness: float | None
    closeness_total: float | None
    sa: float | None
    sa_topic: int | None
    pairings: dict[int, float]

    def to_json_dict(self) -> dict:
        return {
            "topic": self.topic,
            "label": self.label,
            "native_size": self.native_size,
            "pool_size": self.pool_size,
            "defined": self.defined,
            "uniqueness": _num(self.uniqueness),
            "closeness_total": _num(self.closeness_total),
            "sa": _num(self.sa),
            "sa_topic": self.sa_topic,
            "pairings": {str(k): float(v) for k, v in sorted(self.pairings.items())},
        }


@dataclass
class MeasureReport:
    """All measures for one direction."""

    direction: str
    pool: str
    c: float
    c_w: float
    theta: float
    theta_label: str
    u: float
    u_w: float
    u_skew: float
    a: float
    a_w: float
    a_skew: float
    per_topic: list[TopicRow]
    unique_topics: list[UniqueTopic]
    relationship: str
    diagnostics: DirectionDiagnostics | None
    warnings: list[str] = field(default_factory=list)

    def check_invariants(self) -> None:
        for name, value in (
            ("c", self.c), ("c_w", self.c_w), ("u", self.u),
            ("u_w", self.u_w), ("a", self.a), ("a_w", self.a_w),
        ):
            if not -IDENTITY_TOL <= value <= 1.0 + IDENTITY_TOL:
                raise InternalInvariantError(f"{self.direction}: factor {name}={value!r} outside [0, 1]")
        if abs(self.c + self.u - 1.0) > IDENTITY_TOL:
            raise InternalInvariantError(
                f"{self.direction}: C + U = {self.c + self.u!r}, expected 1"
            )
        if abs(self.c_w + self.u_w - 1.0) > IDENTITY_TOL:
            raise InternalInvariantError(
                f"{self.direction}: C_w + U_w = {self.c_w + self.u_w!r}, expected 1"
            )
        if self.a > 1.0 - self.u + IDENTITY_TOL:
            raise InternalInvariantError(
                f"{self.direction}: A = {self.a!r} exceeds 1 - U = {1.0 - self.u!r}"
            )
        if self.a_w > 1.0 - self.u_w + IDENTITY_TOL:
            raise InternalInvariantError(
                f"{self.direction}: A_w = {self.a_w!r} exceeds 1 - U_w = {1.0 - self.u_w!r}"
            )
        for name, value in (("theta", self.theta), ("u_skew", self.u_skew), ("a_skew", self.a_skew)):
            if not -1.0 - IDENTITY_TOL <= value <= 1.0 + IDENTITY_TOL:
                raise InternalInvariantError(f"{self.direction}: {name}={value!r} outside [-1, 1]")

    def to_json_dict(self) -> dict:
        diag = {"applicable": False} if self.diagnostics is None else self.diagnostics.to_json_dict()
        return {
            "direction": self.direction,
            "pool": self.pool,
            "c": _num(self.c),
            "c_w": _num(self.c_w),
            "theta": _num(self.theta),
            "theta_label": self.theta_label,
            "u": _num(self.u),
            "u_w": _num(self.u_w),
            "u_skew": _num(self.u_skew),
            "a": _num(self.a),
            "a_w": _num(self.a_w),
            "a_skew": _num(self.a_skew),
            "display": {
                "c": _fmt(self.c, 4),
                "c_w": _fmt(self.c_w, 4),
                "theta": _fmt(self.theta, 4),
                "u": _fmt(self.u, 4),
                "u_w": _fmt(self.u_w, 4),
                "a": _fmt(self.a, 4),
                "a_w": _fmt(self.a_w, 4),
            },
            "per_topic": [row.to_json_dict() for row in self.per_topic],
            "unique_topics": [
                {"topic": r.topic, "label": r.label, "uniqueness": _num(r.uniqueness)}
                for r in self.unique_topics
            ],
            "relationship": self.relationship,
            "diagnostics": diag,
            "warnings": list(self.warnings),
        }


def _num(x: float | None) -> float | None:
    if x is None:
        return None
    return float(x) + 0.0


def _fmt(x: float, digits: int) -> str:
    return f"{float(x) + 0.0:.{digits}f}"


def build_measure_report(
    strengths: StrengthMatrix,
    native_bundle: CorpusBundle,
    unique_threshold: float = UNIQUE_TOPIC_THRESHOLD,
    diagnostics: DirectionDiagnostics | None = None,
) -> MeasureReport:
    """Assemble every measure for one direction and check the factor invariants."""
    warnings = list(strengths.warnings)
    labels = native_bundle.topic_labels()
    native_sizes = {t.id: t.native_size for t in native_bundle.topics}

    c, c_w = corpus_closeness(strengths)
    u, u_w = corpus_uniqueness(strengths)
    if not strengths.has_cross_outlier:
        msg = (
            f"direction {strengths.direction}: cross model has no outlier topic; "
            "uniqueness values are reported as 0"
        )
        warnings.append(msg)
        log.warning(msg)
    theta, theta_label = closeness_skew(c, c_w)
    sa = alignment_strength(strengths)
    pool_sizes = {t: strengths.size_of(t) for t in strengths.native_ids}
    a, a_w = corpus_alignment(sa, pool_sizes)

    uniq_col = None
    if strengths.has_cross_outlier:
        uniq_col = list(strengths.cross_ids).index(OUTLIER_ID)
    keep = _cross_masks(strengths)

    per_topic = []
    for t in strengths.native_ids:
        if t == OUTLIER_ID:
            continue
        i = strengths.native_index(t)
        if strengths.defined[i]:
            uniqueness = 0.0 if uniq_col is None else float(strengths.strengths[i, uniq_col])
            closeness_total = float(strengths.strengths[i][keep].sum())
            sa_val, sa_topic = sa[t]
            pairings = strengths.row(t)
        else:
            uniqueness = closeness_total = sa_val = None
            sa_topic = None
            pairings = {}
        per_topic.append(
            TopicRow(
                topic=t,
                label=labels.get(t, f"topic {t}"),
                native_size=native_sizes.get(t, 0),
                pool_size=pool_sizes[t],
                defined=bool(strengths.defined[i]),
                uniqueness=uniqueness,
                closeness_total=closeness_total,
                sa=sa_val,
                sa_topic=sa_topic,
                pairings=pairings,
            )
        )

    report = MeasureReport(
        direction=strengths.direction,
        pool=strengths.pool,
        c=c,
        c_w=c_w,
        theta=theta,
        theta_label=theta_label,
        u=u,
        u_w=u_w,
        u_skew=u_w - u,
        a=a,
        a_w=a_w,
        a_skew=a_w - a,
        per_topic=per_topic,
        unique_topics=unique_topics(strengths, unique_threshold, labels),
        relationship=classify_relationship(u, a),
        diagnostics=diagnostics,
        warnings=warnings,
    )
    report.check_invariants()
    return report
