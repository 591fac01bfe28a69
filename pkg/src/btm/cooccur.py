"""Topic pair counting and row-normalized pairing strengths.

For a direction (which model supplies the native topics), every pooled document
contributes one (native topic, cross topic) pair. Row-normalizing the counts by
the native topic's pooled document count gives the pairing strength: each
defined row is a distribution over cross topics, outlier column included.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, InternalInvariantError
from .interchange import OUTLIER_ID
from .matcher import AssignmentTable

log = logging.getLogger(__name__)

DIRECTIONS = ("1to2", "2to1")
POOLS = ("both", "native")

ROW_SUM_TOL = 1e-9

# Flag cutoffs for the outlier-to-outlier co-occurrence diagnostic: at or above
# the unique-topic cutoff the pairing is the expected behavior, a decade below
# it is suspicious enough to call out.
OUTLIER_EXPECTED_MIN = 0.5
OUTLIER_ANOMALY_MAX = 0.1


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def _check_pool(pool: str) -> None:
    if pool not in POOLS:
        raise ConfigError(f"pool must be one of {POOLS}, got {pool!r}")


@dataclass
class PairCounts:
    """Raw co-occurrence tallies for one direction."""

    direction: str
    pool: str
    native_ids: tuple[int, ...]
    cross_ids: tuple[int, ...]
    counts: np.ndarray
    native_totals: np.ndarray

    def validate(self) -> None:
        if self.counts.shape != (len(self.native_ids), len(self.cross_ids)):
            raise InternalInvariantError(
                f"counts shaped {self.counts.shape}, expected "
                f"{(len(self.native_ids), len(self.cross_ids))}"
            )
        if (self.counts < 0).any():
            raise InternalInvariantError("negative pair count")
        row_sums = self.counts.sum(axis=1)
        bad = np.flatnonzero(row_sums != self.native_totals)
        if bad.size:
            t = self.native_ids[int(bad[0])]
            raise InternalInvariantError(
                f"native topic {t}: counts row sums to {int(row_sums[bad[0]])} but "
                f"native total is {int(self.native_totals[bad[0]])}"
            )


@dataclass
class StrengthMatrix:
    """Row-normalized pairing strengths; rows with no pooled documents are undefined."""

    direction: str
    pool: str
    native_ids: tuple[int, ...]
    cross_ids: tuple[int, ...]
    strengths: np.ndarray
    native_sizes: np.ndarray
    defined: np.ndarray
    warnings: list[str] = field(default_factory=list)

    @property
    def has_native_outlier(self) -> bool:
        return OUTLIER_ID in self.native_ids

    @property
    def has_cross_outlier(self) -> bool:
        return OUTLIER_ID in self.cross_ids

    def native_index(self, topic_id: int) -> int:
        return self.native_ids.index(topic_id)

    def row(self, topic_id: int) -> dict[int, float]:
        """Nonzero strengths of one native topic, keyed by cross topic id."""
        i = self.native_index(topic_id)
        values = self.strengths[i]
        return {
            int(c): float(values[j]) for j, c in enumerate(self.cross_ids) if values[j] > 0.0
        }

    def defined_native_ids(self, include_outlier: bool = False) -> list[int]:
        ids = [t for t, d in zip(self.native_ids, self.defined) if d]
        if not include_outlier:
            ids = [t for t in ids if t != OUTLIER_ID]
        return ids

    def size_of(self, topic_id: int) -> int:
        return int(self.native_sizes[self.native_index(topic_id)])

    def validate(self) -> None:
        for i, topic_id in enumerate(self.native_ids):
            if not self.defined[i]:
                continue
            total = float(self.strengths[i].sum())
            if abs(total - 1.0) > ROW_SUM_TOL:
                raise InternalInvariantError(
                    f"direction {self.direction}: strength row for native topic "
                    f"{topic_id} sums to {total!r}, expected 1"
                )


def count_pairs(table: AssignmentTable, direction: str, pool: str = "both") -> PairCounts:
    """Tally (native topic, cross topic) pairs over the pooled documents.

    With ``pool="both"`` every document of either corpus counts toward the
    native topic the direction's model gave it; with ``pool="native"`` only the
    native corpus's own documents are pooled.
    """
    _check_direction(direction)
    _check_pool(pool)
    if direction == "1to2":
        native_ids, cross_ids = table.model1_topic_ids, table.model2_topic_ids
        native_corpus = 1
    else:
        native_ids, cross_ids = table.model2_topic_ids, table.model1_topic_ids
        native_corpus = 2
    n_index = {t: i for i, t in enumerate(native_ids)}
    c_index = {t: j for j, t in enumerate(cross_ids)}
    counts = np.zeros((len(native_ids), len(cross_ids)), dtype=np.int64)
    for row in table.rows:
        if pool == "native" and row.source_corpus != native_corpus:
            continue
        if direction == "1to2":
            counts[n_index[row.model1_topic], c_index[row.model2_topic]] += 1
        else:
            counts[n_index[row.model2_topic], c_index[row.model1_topic]] += 1
    result = PairCounts(
        direction=direction,
        pool=pool,
        native_ids=tuple(native_ids),
        cross_ids=tuple(cross_ids),
        counts=counts,
        native_totals=counts.sum(axis=1),
    )
    result.validate()
    return result


def pairing_strengths(counts: PairCounts) -> StrengthMatrix:
    """Divide each counts row by its pooled total; zero-total rows stay undefined."""
    counts.validate()
    defined = counts.native_totals > 0
    strengths = np.full(counts.counts.shape, np.nan, dtype=np.float64)
    if defined.any():
        strengths[defined] = counts.counts[defined] / counts.native_totals[defined, None]
    warnings = []
    for i, topic_id in enumerate(counts.native_ids):
        if not defined[i]:
            msg = (
                f"direction {counts.direction}: native topic {topic_id} has no pooled "
                "documents; its row is undefined and excluded from every average"
            )
            warnings.append(msg)
            log.warning(msg)
    matrix = StrengthMatrix(
        direction=counts.direction,
        pool=counts.pool,
        native_ids=counts.native_ids,
        cross_ids=counts.cross_ids,
        strengths=strengths,
        native_sizes=counts.native_totals.copy(),
        defined=defined,
        warnings=warnings,
    )
    matrix.validate()
    return matrix


@dataclass
class DirectionDiagnostics:
    """Outlier behavior of one direction's strength matrix."""

    outlier_pairing: float | None
    flag: str | None
    outlier_dominant_topics: list[int]
    native_outlier_row: dict[int, float] | None
    native_outlier_size: int

    def to_json_dict(self) -> dict:
        return {
            "applicable": True,
            "outlier_pairing": self.outlier_pairing,
            "flag": self.flag,
            "outlier_dominant_topics": list(self.outlier_dominant_topics),
            "native_outlier_row": None
            if self.native_outlier_row is None
            else {str(k): float(v) for k, v in sorted(self.native_outlier_row.items())},
            "native_outlier_size": self.native_outlier_size,
        }


@dataclass
class OutlierDiagnostics:
    """Both directions' outlier diagnostics; not applicable without two outlier topics."""

    applicable: bool
    dir_1to2: DirectionDiagnostics | None = None
    dir_2to1: DirectionDiagnostics | None = None

    def for_direction(self, direction: str) -> DirectionDiagnostics | None:
        return self.dir_1to2 if direction == "1to2" else self.dir_2to1


def _direction_diagnostics(s: StrengthMatrix) -> DirectionDiagnostics:
    i = s.native_index(OUTLIER_ID)
    j = list(s.cross_ids).index(OUTLIER_ID)
    if s.defined[i]:
        pairing = float(s.strengths[i, j])
        if pairing >= OUTLIER_EXPECTED_MIN:
            flag = "expected"
        elif pairing < OUTLIER_ANOMALY_MAX:
            flag = "anomalous-low"
        else:
            flag = "intermediate"
        row = s.row(OUTLIER_ID)
    else:
        pairing, flag, row = None, None, None
    dominant = []
    for t in s.defined_native_ids():
        k = s.native_index(t)
        # Cross ids are ascending with -1 first, so first-maximum argmax keeps
        # the smallest-id tie break used everywhere else.
        if s.cross_ids[int(np.argmax(s.strengths[k]))] == OUTLIER_ID:
            dominant.append(t)
    return DirectionDiagnostics(
        outlier_pairing=pairing,
        flag=flag,
        outlier_dominant_topics=dominant,
        native_outlier_row=row,
        native_outlier_size=s.size_of(OUTLIER_ID),
    )


def outlier_diagnostics(
    strengths_1to2: StrengthMatrix, strengths_2to1: StrengthMatrix
) -> OutlierDiagnostics:
    """Report outlier-to-outlier pairing, its flag, and outlier-dominated topics.

    Marked not applicable when either model lacks an outlier topic.
    """
    if not (strengths_1to2.has_native_outlier and strengths_1to2.has_cross_outlier):
        return OutlierDiagnostics(applicable=False)
    return OutlierDiagnostics(
        applicable=True,
        dir_1to2=_direction_diagnostics(strengths_1to2),
        dir_2to1=_direction_diagnostics(strengths_2to1),
    )


def write_strengths_csv(counts: PairCounts, strengths: StrengthMatrix, path: str | Path) -> None:
    """Export nonzero cells as ``native_topic,cross_topic,count,strength``."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["native_topic", "cross_topic", "count", "strength"])
        for i, native in enumerate(counts.native_ids):
            for j, cross in enumerate(counts.cross_ids):
                c = int(counts.counts[i, j])
                if c:
                    writer.writerow([native, cross, c, repr(float(strengths.strengths[i, j]))])
