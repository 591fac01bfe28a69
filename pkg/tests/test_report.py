import json

import numpy as np
import pytest

from btm import (
    SynthConfig,
    build_assignment_table,
    build_measure_report,
    build_report,
    count_pairs,
    errors,
    generate_pair,
    pairing_strengths,
    plot_data,
)
from btm.cooccur import outlier_diagnostics
from btm.report import validate_report_dict, write_plot_data_csv
from btm.validate import btm_match, cosine_match, validation_report
from helpers import strengths_from_rows


def full_report(seed=17, **cfg_kwargs):
    cfg = SynthConfig(
        seed=seed,
        dim=10,
        clusters_shared=3,
        clusters_unique_1=1,
        clusters_unique_2=1,
        docs_per_cluster=15,
        outlier_fraction=0.2,
        **cfg_kwargs,
    )
    b1, b2, _ = generate_pair(cfg)
    table = build_assignment_table(b1, b2)
    s12 = pairing_strengths(count_pairs(table, "1to2", "both"))
    s21 = pairing_strengths(count_pairs(table, "2to1", "both"))
    diag = outlier_diagnostics(s12, s21)
    m12 = build_measure_report(s12, b1, diagnostics=diag.for_direction("1to2"))
    m21 = build_measure_report(s21, b2, diagnostics=diag.for_direction("2to1"))
    bm12, bm21 = btm_match(s12), btm_match(s21)
    v12 = validation_report(
        "1to2", bm12, cosine_match(b1, b2, domain=bm12.labels, direction="1to2"), s12
    )
    v21 = validation_report(
        "2to1", bm21, cosine_match(b2, b1, domain=bm21.labels, direction="2to1"), s21
    )
    return build_report(
        b1, b2, m12, m21, v12, v21, pool="both", unique_threshold=0.5, cosine_outlier=True
    )


class TestBuildReport:
    def test_serialization_is_deterministic(self):
        assert full_report().to_json() == full_report().to_json()

    def test_factor_table_mirrors_measures(self):
        report = full_report()
        row1, row2 = report.factor_table
        m12 = report.measures["1to2"]
        assert row1["native_corpus"] == 1
        assert row1["c"] == m12.c
        assert row1["c_w_minus_c"] == pytest.approx(m12.c_w - m12.c, abs=0)
        assert row1["u_w_minus_u"] == pytest.approx(m12.u_w - m12.u, abs=0)
        assert set(row1["display"]) == {"c", "c_w_minus_c", "u", "u_w_minus_u", "a", "a_w_minus_a"}
        assert row1["display"]["c"] == f"{m12.c:.2f}"
        assert row2["native_corpus"] == 2

    def test_top_pairs_sorted_by_native_size(self):
        report = full_report()
        for direction in ("1to2", "2to1"):
            sizes = []
            labels = {int(t) for t in report.topic_labels["2" if direction == "1to2" else "1"]}
            for entry in report.top_pairs[direction]:
                m = report.measures[direction]
                row = next(r for r in m.per_topic if r.topic == entry["native_topic"])
                sizes.append(row.native_size)
                if entry["cross_topic"] is not None:
                    assert entry["cross_topic"] in labels
            assert sizes == sorted(sizes, reverse=True)

    def test_every_referenced_topic_resolves_to_label(self):
        data = full_report().to_json_dict()
        for direction, key in (("1to2", "2"), ("2to1", "1")):
            labels = data["topic_labels"][key]
            for row in data["measures"][direction]["per_topic"]:
                for cross_id in row["pairings"]:
                    assert cross_id in labels

    def test_round_trip_through_schema_validator(self):
        report = full_report()
        data = json.loads(report.to_json())
        validate_report_dict(data)
        assert plot_data(data) == plot_data(report)

    def test_missing_direction_rejected(self):
        report = full_report()
        with pytest.raises(errors.ConfigError):
            build_report(
                None, None, report.measures["1to2"], None, {}, {},
                pool="both", unique_threshold=0.5, cosine_outlier=True,
            )

    def test_validator_rejects_truncated_payload(self):
        data = full_report().to_json_dict()
        del data["measures"]["2to1"]
        with pytest.raises(errors.FormatError, match="2to1"):
            validate_report_dict(data)


class TestPlotData:
    def rows_for(self, pairings, top_k=25, merge_below=0.05, native_size=10):
        report = {
            "topic_labels": {
                "1": {"0": "native zero"},
                "2": {str(t): f"cross {t}" for t in range(-1, 9)},
            },
            "measures": {
                "1to2": {
                    "per_topic": [
                        {
                            "topic": 0,
                            "label": "native zero",
                            "native_size": native_size,
                            "pool_size": native_size,
                            "defined": True,
                            "pairings": {str(t): v for t, v in pairings.items()},
                        }
                    ]
                },
                "2to1": {"per_topic": []},
            },
        }
        return plot_data(report, top_k=top_k, merge_below=merge_below)

    def test_merge_below_collapses_small_pairs(self):
        rows = self.rows_for({0: 0.6, 1: 0.3, 2: 0.06, 3: 0.03, 4: 0.01})
        strengths = [r["strength"] for r in rows]
        assert strengths[:3] == [0.6, 0.3, 0.06]
        assert strengths[3] == pytest.approx(0.04, abs=1e-12)
        assert [r["is_remaining"] for r in rows] == [False, False, False, True]
        assert rows[3]["cross_topic"] is None
        assert rows[3]["cross_label"] == "remaining"
        assert [r["rank"] for r in rows] == [1, 2, 3, 4]

    def test_pure_outlier_row(self):
        rows = self.rows_for({-1: 1.0})
        assert len(rows) == 1
        assert rows[0]["is_outlier"] is True
        assert rows[0]["cross_topic"] == -1
        assert rows[0]["strength"] == 1.0

    def test_outlier_segment_never_merges(self):
        rows = self.rows_for({0: 0.97, -1: 0.03})
        assert [r["is_outlier"] for r in rows] == [False, True]
        assert rows[1]["strength"] == pytest.approx(0.03, abs=1e-12)
        assert rows[1]["is_remaining"] is False

    def test_top_k_clamps_to_topic_count(self):
        report = full_report()
        rows = plot_data(report, top_k=10_000)
        directions = {r["direction"] for r in rows}
        assert directions == {"1to2", "2to1"}

    def test_top_k_limits_topics(self):
        report = full_report()
        rows = plot_data(report, top_k=1)
        for direction in ("1to2", "2to1"):
            assert len({r["native_topic"] for r in rows if r["direction"] == direction}) == 1

    def test_invalid_arguments(self):
        report = full_report()
        with pytest.raises(errors.ConfigError):
            plot_data(report, top_k=0)
        with pytest.raises(errors.ConfigError):
            plot_data(report, merge_below=1.5)

    def test_segments_sum_to_row_sum(self):
        report = full_report()
        rows = plot_data(report)
        data = report.to_json_dict()
        for direction in ("1to2", "2to1"):
            for entry in data["measures"][direction]["per_topic"]:
                segments = [
                    r["strength"]
                    for r in rows
                    if r["direction"] == direction and r["native_topic"] == entry["topic"]
                ]
                if not entry["defined"]:
                    assert segments == []
                    continue
                assert sum(segments) == pytest.approx(
                    sum(entry["pairings"].values()), abs=1e-9
                )

    def test_csv_export_shape(self, tmp_path):
        rows = plot_data(full_report())
        out = tmp_path / "plot_data.csv"
        write_plot_data_csv(rows, out)
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "direction,native_topic,native_label,rank,cross_topic,cross_label,"
            "strength,is_outlier,is_remaining"
        )
        assert len(lines) == len(rows) + 1
