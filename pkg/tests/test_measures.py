import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btm import (
    alignment_strength,
    build_measure_report,
    classify_relationship,
    closeness_skew,
    corpus_alignment,
    corpus_closeness,
    corpus_uniqueness,
    errors,
    unique_topics,
)
from helpers import bundle, strengths_from_rows


def two_topic_strengths(sizes=(10, 10)):
    """Two native topics with closeness totals 0.8 and 0.6."""
    n0, n1 = sizes
    rows = {
        0: {0: int(0.8 * n0), -1: int(0.2 * n0)},
        1: {0: int(0.6 * n1), -1: int(0.4 * n1)},
    }
    return strengths_from_rows(rows, (-1, 0))[1]


random_rows = st.lists(
    st.lists(st.integers(min_value=0, max_value=30), min_size=4, max_size=4).filter(
        lambda r: sum(r) > 0
    ),
    min_size=1,
    max_size=7,
)


def strengths_of(rows):
    native = {i: {c: n for c, n in zip((-1, 0, 1, 2), row)} for i, row in enumerate(rows)}
    return strengths_from_rows(native, (-1, 0, 1, 2))[1]


class TestCorpusCloseness:
    def test_mean_of_two_rows(self):
        c, _ = corpus_closeness(two_topic_strengths())
        assert c == pytest.approx(0.7, abs=1e-12)

    def test_perfect_diagonal(self):
        _, s = strengths_from_rows({0: {0: 5}, 1: {1: 7}}, (0, 1))
        c, c_w = corpus_closeness(s)
        assert c == 1.0
        assert c_w == 1.0

    def test_weighted_by_pool_size(self):
        # Hand computation: (10*0.8 + 30*0.6) / 40 = 0.65.
        c, c_w = corpus_closeness(two_topic_strengths(sizes=(10, 30)))
        assert c == pytest.approx(0.7, abs=1e-12)
        assert c_w == pytest.approx(0.65, abs=1e-12)

    def test_native_outlier_row_excluded(self):
        rows = {-1: {-1: 5}, 0: {0: 8, -1: 2}}
        _, s = strengths_from_rows(rows, (-1, 0))
        c, _ = corpus_closeness(s)
        assert c == pytest.approx(0.8, abs=1e-12)

    def test_no_defined_rows_raises(self):
        _, s = strengths_from_rows({-1: {-1: 3}, 0: {}}, (-1, 0))
        with pytest.raises(errors.NoNativeTopicsError):
            corpus_closeness(s)


class TestCorpusUniqueness:
    def test_mean_of_column(self):
        u, _ = corpus_uniqueness(two_topic_strengths())
        assert u == pytest.approx(0.3, abs=1e-12)

    def test_weighted(self):
        u, u_w = corpus_uniqueness(two_topic_strengths(sizes=(10, 30)))
        assert u == pytest.approx(0.3, abs=1e-12)
        assert u_w == pytest.approx(0.35, abs=1e-12)

    def test_no_outlier_mode_is_zero(self):
        _, s = strengths_from_rows({0: {0: 5}, 1: {0: 2, 1: 2}}, (0, 1))
        assert corpus_uniqueness(s) == (0.0, 0.0)

    @settings(max_examples=80, deadline=None)
    @given(rows=random_rows)
    def test_complement_identities(self, rows):
        s = strengths_of(rows)
        c, c_w = corpus_closeness(s)
        u, u_w = corpus_uniqueness(s)
        assert abs(c + u - 1.0) <= 1e-12
        assert abs(c_w + u_w - 1.0) <= 1e-12


class TestClosenessSkew:
    def test_case_study_value(self):
        theta, label = closeness_skew(0.66, 0.68)
        assert theta == pytest.approx(0.02, abs=1e-12)
        assert label == "size-independent"

    def test_equality(self):
        assert closeness_skew(0.5, 0.5) == (0.0, "size-independent")

    def test_larger_topic_driven(self):
        theta, label = closeness_skew(0.3, 0.45)
        assert theta == pytest.approx(0.15, abs=1e-12)
        assert label == "larger-topic-driven"

    def test_smaller_topic_driven(self):
        assert closeness_skew(0.45, 0.3)[1] == "smaller-topic-driven"


class TestAlignmentStrength:
    def test_tie_breaks_to_smaller_cross_id(self):
        _, s = strengths_from_rows({0: {0: 4, 1: 4, -1: 2}}, (-1, 0, 1))
        assert alignment_strength(s)[0] == (0.4, 0)

    def test_single_mass(self):
        _, s = strengths_from_rows({0: {2: 10}}, (0, 1, 2))
        assert alignment_strength(s)[0] == (1.0, 2)

    def test_outlier_excluded_from_max(self):
        # Outlier holds 0.75 of the row but cannot be the alignment target.
        _, s = strengths_from_rows({0: {0: 2, 1: 3, -1: 15}}, (-1, 0, 1))
        sa, target = alignment_strength(s)[0]
        assert sa == pytest.approx(0.15, abs=1e-12)
        assert target == 1

    def test_undefined_row_skipped(self):
        _, s = strengths_from_rows({0: {0: 5}, 1: {}}, (0,))
        assert 1 not in alignment_strength(s)


class TestCorpusAlignment:
    def test_mean(self):
        a, _ = corpus_alignment({0: (0.4, 0), 1: (0.6, 1)}, {0: 10, 1: 10})
        assert a == pytest.approx(0.5, abs=1e-12)

    def test_all_ones(self):
        a, a_w = corpus_alignment({0: 1.0, 1: 1.0}, {0: 3, 1: 9})
        assert a == 1.0
        assert a_w == 1.0

    def test_weighted(self):
        # Hand computation: (30*0.4 + 10*0.6) / 40 = 0.45.
        a, a_w = corpus_alignment({0: 0.4, 1: 0.6}, {0: 30, 1: 10})
        assert a == pytest.approx(0.5, abs=1e-12)
        assert a_w == pytest.approx(0.45, abs=1e-12)

    def test_native_outlier_ignored(self):
        a, _ = corpus_alignment({-1: 0.9, 0: 0.4, 1: 0.6}, {-1: 100, 0: 1, 1: 1})
        assert a == pytest.approx(0.5, abs=1e-12)


class TestUniqueTopics:
    def test_threshold_inclusive_at_half(self):
        rows = {
            0: {-1: 7, 0: 3},
            1: {-1: 5, 0: 5},
            2: {-1: 49, 0: 51},
        }
        _, s = strengths_from_rows(rows, (-1, 0))
        found = unique_topics(s)
        assert [(t.topic, t.uniqueness) for t in found] == [(0, 0.7), (1, 0.5)]

    def test_no_outlier_mass(self):
        _, s = strengths_from_rows({0: {0: 5}, 1: {1: 5}}, (-1, 0, 1))
        assert unique_topics(s) == []

    def test_no_outlier_mode_empty(self):
        _, s = strengths_from_rows({0: {0: 5}}, (0,))
        assert unique_topics(s) == []

    def test_sorted_by_uniqueness_then_id(self):
        rows = {0: {-1: 6, 0: 4}, 1: {-1: 8, 0: 2}, 2: {-1: 6, 0: 4}}
        _, s = strengths_from_rows(rows, (-1, 0))
        assert [t.topic for t in unique_topics(s)] == [1, 0, 2]

    def test_custom_threshold(self):
        _, s = strengths_from_rows({0: {-1: 3, 0: 7}}, (-1, 0))
        assert [t.topic for t in unique_topics(s, threshold=0.3)] == [0]
        assert unique_topics(s, threshold=0.31) == []


class TestClassifyRelationship:
    def test_case_study_regime(self):
        assert classify_relationship(0.34, 0.45) == "overlap-multifaceted"

    def test_independent(self):
        assert classify_relationship(0.9, 0.05) == "independent"

    def test_overlap_subset(self):
        assert classify_relationship(0.2, 0.75) == "overlap-subset"

    def test_boundary_corner_is_intermediate(self):
        assert classify_relationship(0.5, 0.5) == "intermediate"

    def test_impossible_region_rejected(self):
        with pytest.raises(errors.InternalInvariantError):
            classify_relationship(0.7, 0.6)

    def test_out_of_range_rejected(self):
        with pytest.raises(errors.InternalInvariantError):
            classify_relationship(-0.1, 0.2)


class TestMeasureReport:
    def build(self, rows, cross_ids, sizes=None):
        _, s = strengths_from_rows(rows, cross_ids)
        ids = sorted(rows)
        native = bundle(
            "n",
            doc_vecs=np.eye(len(ids)) + 0.01,
            assignments=list(range(len([t for t in ids if t >= 0])))
            + [-1] * len([t for t in ids if t < 0]),
            topic_vecs=np.eye(len(ids)) + 0.02,
            topic_ids=ids,
        )
        return build_measure_report(s, native)

    def test_report_fields_consistent(self):
        report = self.build({0: {0: 8, -1: 2}, 1: {1: 3, -1: 7}}, (-1, 0, 1))
        assert report.c == pytest.approx(0.55, abs=1e-12)
        assert report.u == pytest.approx(0.45, abs=1e-12)
        assert report.theta == pytest.approx(report.c_w - report.c, abs=0)
        assert report.u_skew == pytest.approx(report.u_w - report.u, abs=0)
        assert [r.topic for r in report.per_topic] == [0, 1]
        assert report.per_topic[0].closeness_total == pytest.approx(0.8, abs=1e-12)
        assert report.per_topic[0].uniqueness == pytest.approx(0.2, abs=1e-12)
        assert [t.topic for t in report.unique_topics] == [1]
        # SA values are 0.8 and 0.3, so A = 0.55 with U = 0.45: subset regime.
        assert report.a == pytest.approx(0.55, abs=1e-12)
        assert report.relationship == "overlap-subset"

    def test_invariants_catch_corruption(self):
        report = self.build({0: {0: 8, -1: 2}}, (-1, 0))
        report.u = 0.9
        with pytest.raises(errors.InternalInvariantError):
            report.check_invariants()

    def test_json_dict_shape(self):
        report = self.build({0: {0: 8, -1: 2}, 1: {1: 3, -1: 7}}, (-1, 0, 1))
        data = report.to_json_dict()
        for key in ("c", "c_w", "theta", "u", "u_w", "a", "a_w", "per_topic",
                    "unique_topics", "relationship", "pool", "warnings", "display"):
            assert key in data
        assert data["display"]["c"] == "0.5500"
        assert data["per_topic"][0]["pairings"] == {"-1": 0.2, "0": 0.8}


class TestFactorProperties:
    @settings(max_examples=80, deadline=None)
    @given(rows=random_rows)
    def test_impossibility_bound(self, rows):
        s = strengths_of(rows)
        u, u_w = corpus_uniqueness(s)
        sa = alignment_strength(s)
        sizes = {t: s.size_of(t) for t in s.native_ids}
        a, a_w = corpus_alignment(sa, sizes)
        assert a <= 1.0 - u + 1e-12
        assert a_w <= 1.0 - u_w + 1e-12

    @settings(max_examples=50, deadline=None)
    @given(
        row=st.lists(st.integers(min_value=0, max_value=30), min_size=4, max_size=4).filter(
            lambda r: sum(r) > 0
        ),
        n=st.integers(min_value=2, max_value=6),
    )
    def test_equal_sizes_collapse_weighting(self, row, n):
        rows = {i: {c: v for c, v in zip((-1, 0, 1, 2), row)} for i in range(n)}
        s = strengths_from_rows(rows, (-1, 0, 1, 2))[1]
        c, c_w = corpus_closeness(s)
        u, u_w = corpus_uniqueness(s)
        a, a_w = corpus_alignment(alignment_strength(s), {t: s.size_of(t) for t in s.native_ids})
        assert abs(c - c_w) <= 1e-12
        assert abs(u - u_w) <= 1e-12
        assert abs(a - a_w) <= 1e-12

    def test_permutation_invariance(self):
        rows = {0: {0: 8, 1: 1, -1: 1}, 1: {0: 2, 1: 5, -1: 3}, 2: {0: 1, 1: 1, -1: 8}}
        s = strengths_of([list(rows[i].get(c, 0) for c in (-1, 0, 1, 2)) for i in range(3)])
        # Swap native ids 0 and 2 and cross ids 0 and 1 consistently.
        permuted_rows = {
            0: {1: 8, 0: 1, -1: 1},
            1: {1: 2, 0: 5, -1: 3},
            2: {1: 1, 0: 1, -1: 8},
        }
        swapped = {0: permuted_rows[2], 1: permuted_rows[1], 2: permuted_rows[0]}
        s2 = strengths_from_rows(swapped, (-1, 0, 1, 2))[1]
        assert corpus_closeness(s) == pytest.approx(corpus_closeness(s2), abs=1e-15)
        assert corpus_uniqueness(s) == pytest.approx(corpus_uniqueness(s2), abs=1e-15)
        a1 = corpus_alignment(alignment_strength(s), {t: s.size_of(t) for t in s.native_ids})
        a2 = corpus_alignment(alignment_strength(s2), {t: s2.size_of(t) for t in s2.native_ids})
        assert a1 == pytest.approx(a2, abs=1e-15)
