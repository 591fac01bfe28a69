"""Final analysis report assembly and plot-ready composition tables.

The report is plain JSON-able data: per-direction measures, validation
summaries, top-pair tables, unique-topic tables, and a two-row factor table.
``plot_data`` flattens per-topic pairing strengths into ranked bar segments,
merging sub-threshold pairs into a "remaining" segment and flagging the
outlier segment separately. No graphics are rendered here.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from ._version import __version__
from .errors import ConfigError, FormatError
from .interchange import OUTLIER_ID, CorpusBundle
from .measures import MeasureReport, _fmt, _num

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
DEFAULT_TOP_K = 25
DEFAULT_MERGE_BELOW = 0.05

PLOT_COLUMNS = (
    "direction",
    "native_topic",
    "native_label",
    "rank",
    "cross_topic",
    "cross_label",
    "strength",
    "is_outlier",
    "is_remaining",
)


@dataclass
class AnalysisReport:
    metadata: dict
    topic_labels: dict[str, dict[str, str]]
    measures: dict[str, MeasureReport]
    validation: dict[str, dict]
    top_pairs: dict[str, list[dict]]
    unique_topics: dict[str, list[dict]]
    factor_table: list[dict]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "metadata": dict(self.metadata),
            "topic_labels": {k: dict(v) for k, v in self.topic_labels.items()},
            "measures": {k: m.to_json_dict() for k, m in self.measures.items()},
            "validation": {k: dict(v) for k, v in self.validation.items()},
            "top_pairs": {k: [dict(r) for r in v] for k, v in self.top_pairs.items()},
            "unique_topics": {k: [dict(r) for r in v] for k, v in self.unique_topics.items()},
            "factor_table": [dict(r) for r in self.factor_table],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False) + "\n"


def build_report(
    bundle1: CorpusBundle,
    bundle2: CorpusBundle,
    measures_1to2: MeasureReport,
    measures_2to1: MeasureReport,
    validation_1to2: dict,
    validation_2to1: dict,
    *,
    pool: str,
    unique_threshold: float,
    cosine_outlier: bool,
    top_k: int = DEFAULT_TOP_K,
    merge_below: float = DEFAULT_MERGE_BELOW,
    generated_at: str | None = None,
) -> AnalysisReport:
    """Assemble both directions into one deterministic report structure."""
    if measures_1to2 is None or measures_2to1 is None:
        raise ConfigError("both directions are required to build a report")
    labels1 = bundle1.topic_labels()
    labels2 = bundle2.topic_labels()

    metadata = {
        "tool": "btm",
        "version": __version__,
        "corpus_1": bundle1.corpus_id,
        "corpus_2": bundle2.corpus_id,
        "pool": pool,
        "unique_threshold": unique_threshold,
        "cosine_outlier": cosine_outlier,
        "top_k": top_k,
        "merge_below": merge_below,
        "generated_at": generated_at,
    }

    report = AnalysisReport(
        metadata=metadata,
        topic_labels={
            "1": {str(t): lbl for t, lbl in sorted(labels1.items())},
            "2": {str(t): lbl for t, lbl in sorted(labels2.items())},
        },
        measures={"1to2": measures_1to2, "2to1": measures_2to1},
        validation={"1to2": validation_1to2, "2to1": validation_2to1},
        top_pairs={
            "1to2": _top_pairs(measures_1to2, labels2),
            "2to1": _top_pairs(measures_2to1, labels1),
        },
        unique_topics={
            "1to2": _unique_table(measures_1to2),
            "2to1": _unique_table(measures_2to1),
        },
        factor_table=[
            _factor_row(1, measures_1to2),
            _factor_row(2, measures_2to1),
        ],
    )
    _check_labels(report)
    return report


def _by_size(rows):
    return sorted(rows, key=lambda r: (-r.native_size, r.topic))


def _top_pairs(measures: MeasureReport, cross_labels: dict[int, str]) -> list[dict]:
    out = []
    for row in _by_size(r for r in measures.per_topic if r.defined):
        out.append(
            {
                "native_topic": row.topic,
                "native_label": row.label,
                "cross_topic": row.sa_topic,
                "cross_label": None if row.sa_topic is None else cross_labels[row.sa_topic],
                "sa": _num(row.sa),
                "sa_display": _fmt(row.sa, 2),
            }
        )
    return out


def _unique_table(measures: MeasureReport) -> list[dict]:
    return [
        {
            "topic": r.topic,
            "label": r.label,
            "uniqueness": _num(r.uniqueness),
            "uniqueness_display": _fmt(r.uniqueness, 2),
        }
        for r in measures.unique_topics
    ]


def _factor_row(native_corpus: int, m: MeasureReport) -> dict:
    return {
        "native_corpus": native_corpus,
        "c": _num(m.c),
        "c_w_minus_c": _num(m.theta),
        "u": _num(m.u),
        "u_w_minus_u": _num(m.u_skew),
        "a": _num(m.a),
        "a_w_minus_a": _num(m.a_skew),
        "display": {
            "c": _fmt(m.c, 2),
            "c_w_minus_c": _fmt(m.theta, 2),
            "u": _fmt(m.u, 2),
            "u_w_minus_u": _fmt(m.u_skew, 2),
            "a": _fmt(m.a, 2),
            "a_w_minus_a": _fmt(m.a_skew, 2),
        },
    }


def _check_labels(report: AnalysisReport) -> None:
    for direction, cross_key in (("1to2", "2"), ("2to1", "1")):
        cross_labels = report.topic_labels[cross_key]
        for row in report.measures[direction].per_topic:
            for cross_id in row.pairings:
                if str(cross_id) not in cross_labels:
                    raise FormatError(
                        f"direction {direction}: cross topic {cross_id} has no label"
                    )


# ---------------------------------------------------------------------------
# Plot data
# ---------------------------------------------------------------------------


def plot_data(
    report: AnalysisReport | dict,
    top_k: int = DEFAULT_TOP_K,
    merge_below: float = DEFAULT_MERGE_BELOW,
) -> list[dict]:
    """Ranked pairing-strength segments for the largest native topics per direction.

    Non-outlier pairs below ``merge_below`` collapse into one "remaining"
    segment; the outlier segment is kept separate and flagged. Segments of a
    topic sum to its strength row sum.
    """
    if top_k <= 0:
        raise ConfigError(f"top_k must be positive, got {top_k}")
    if not 0.0 <= merge_below <= 1.0:
        raise ConfigError(f"merge_below must lie in [0, 1], got {merge_below}")
    data = report.to_json_dict() if isinstance(report, AnalysisReport) else report

    rows: list[dict] = []
    for direction, cross_key in (("1to2", "2"), ("2to1", "1")):
        cross_labels = data["topic_labels"][cross_key]
        topics = [r for r in data["measures"][direction]["per_topic"] if r["defined"]]
        topics.sort(key=lambda r: (-r["native_size"], r["topic"]))
        for entry in topics[:top_k]:
            rows.extend(_topic_segments(direction, entry, cross_labels, merge_below))
    return rows


def _topic_segments(
    direction: str, entry: dict, cross_labels: dict[str, str], merge_below: float
) -> list[dict]:
    pairings = {int(k): float(v) for k, v in entry["pairings"].items()}
    outlier = pairings.pop(OUTLIER_ID, 0.0)
    kept = sorted(
        ((t, s) for t, s in pairings.items() if s >= merge_below),
        key=lambda ts: (-ts[1], ts[0]),
    )
    remaining = sum(s for _, s in sorted(pairings.items()) if s < merge_below)

    def segment(rank, cross_topic, cross_label, strength, is_outlier, is_remaining):
        return {
            "direction": direction,
            "native_topic": entry["topic"],
            "native_label": entry["label"],
            "rank": rank,
            "cross_topic": cross_topic,
            "cross_label": cross_label,
            "strength": float(strength) + 0.0,
            "is_outlier": is_outlier,
            "is_remaining": is_remaining,
        }

    out = []
    rank = 0
    for t, s in kept:
        rank += 1
        out.append(segment(rank, t, cross_labels[str(t)], s, False, False))
    if remaining > 0.0:
        rank += 1
        out.append(segment(rank, None, "remaining", remaining, False, True))
    if outlier > 0.0:
        rank += 1
        out.append(segment(rank, OUTLIER_ID, cross_labels[str(OUTLIER_ID)], outlier, True, False))
    return out


def write_plot_data_csv(rows: list[dict], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PLOT_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row["direction"],
                    row["native_topic"],
                    row["native_label"],
                    row["rank"],
                    "" if row["cross_topic"] is None else row["cross_topic"],
                    row["cross_label"],
                    repr(row["strength"]),
                    "true" if row["is_outlier"] else "false",
                    "true" if row["is_remaining"] else "false",
                ]
            )


def write_report_json(report: AnalysisReport, path: str | Path) -> None:
    Path(path).write_text(report.to_json(), encoding="utf-8")


def load_report_json(path: str | Path) -> dict:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{p}: cannot read report JSON ({exc})") from exc
    validate_report_dict(data)
    return data


def validate_report_dict(data: dict) -> None:
    """Structural check of the report schema; raises on the first problem."""
    if not isinstance(data, dict):
        raise FormatError("report must be a JSON object")
    for key in (
        "schema_version",
        "metadata",
        "topic_labels",
        "measures",
        "validation",
        "top_pairs",
        "unique_topics",
        "factor_table",
    ):
        if key not in data:
            raise FormatError(f"report missing key '{key}'")
    if data["schema_version"] != REPORT_SCHEMA_VERSION:
        raise FormatError(f"unsupported report schema_version {data['schema_version']!r}")
    for key in ("1", "2"):
        if key not in data["topic_labels"] or not isinstance(data["topic_labels"][key], dict):
            raise FormatError(f"topic_labels missing model '{key}'")
    for direction in ("1to2", "2to1"):
        if direction not in data["measures"]:
            raise FormatError(f"measures missing direction '{direction}'")
        m = data["measures"][direction]
        for key in ("c", "c_w", "theta", "u", "u_w", "a", "a_w", "per_topic",
                    "unique_topics", "relationship", "pool", "warnings"):
            if key not in m:
                raise FormatError(f"measures[{direction}] missing key '{key}'")
        for row in m["per_topic"]:
            for key in ("topic", "label", "native_size", "pool_size", "defined", "pairings"):
                if key not in row:
                    raise FormatError(
                        f"measures[{direction}] per_topic entry missing key '{key}'"
                    )
        if direction not in data["validation"]:
            raise FormatError(f"validation missing direction '{direction}'")
        for key in ("kappa", "n_topics", "n_agreements", "discrepancies"):
            if key not in data["validation"][direction]:
                raise FormatError(f"validation[{direction}] missing key '{key}'")
    if not isinstance(data["factor_table"], list) or len(data["factor_table"]) != 2:
        raise FormatError("factor_table must list both native corpora")
