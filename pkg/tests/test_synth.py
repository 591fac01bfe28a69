import numpy as np
import pytest

from btm import (
    SynthConfig,
    brute_force_report,
    build_assignment_table,
    build_measure_report,
    corpus_uniqueness,
    count_pairs,
    errors,
    generate_pair,
    pairing_strengths,
    write_bundle,
)


def pipeline_measures(b1, b2, pool="both"):
    table = build_assignment_table(b1, b2)
    out = {}
    for direction, native in (("1to2", b1), ("2to1", b2)):
        counts = count_pairs(table, direction, pool)
        strengths = pairing_strengths(counts)
        out[direction] = (counts, strengths, build_measure_report(strengths, native))
    return out


class TestGeneratePair:
    def test_deterministic_bytes_on_disk(self, tmp_path):
        cfg = SynthConfig(seed=5, dim=8, clusters_shared=2, clusters_unique_1=1, outlier_fraction=0.2)
        for run in ("a", "b"):
            b1, b2, _ = generate_pair(cfg)
            write_bundle(b1, tmp_path / run / "c1")
            write_bundle(b2, tmp_path / run / "c2")
        for rel in ("c1/manifest.json", "c1/doc_embeddings.f32le", "c1/topic_embeddings.f32le",
                    "c1/assignments.csv", "c2/doc_embeddings.f32le"):
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_different_seeds_differ(self):
        cfg1 = SynthConfig(seed=1, dim=8, clusters_shared=2)
        cfg2 = SynthConfig(seed=2, dim=8, clusters_shared=2)
        b1a, _, _ = generate_pair(cfg1)
        b1b, _, _ = generate_pair(cfg2)
        assert b1a.doc_embeddings.tobytes() != b1b.doc_embeddings.tobytes()

    def test_ground_truth_reflects_config(self):
        cfg = SynthConfig(seed=3, dim=10, clusters_shared=2, clusters_unique_1=3, clusters_unique_2=1)
        _, _, truth = generate_pair(cfg)
        assert truth.shared_pairs == ((0, 0), (1, 1))
        assert truth.unique_topics_1 == (2, 3, 4)
        assert truth.unique_topics_2 == (2,)

    def test_no_unique_clusters_means_empty_ground_truth(self):
        _, _, truth = generate_pair(SynthConfig(seed=4, dim=6, clusters_shared=3))
        assert truth.unique_topics_1 == ()
        assert truth.unique_topics_2 == ()

    def test_outlier_fraction_produces_outlier_topic(self):
        b1, _, _ = generate_pair(SynthConfig(seed=5, dim=6, clusters_shared=2, outlier_fraction=0.3))
        assert b1.has_outlier
        n_out = sum(1 for t in b1.native_assignments.values() if t == -1)
        assert n_out / b1.n_docs == pytest.approx(0.3, abs=0.05)

    def test_bundles_pass_validation(self):
        cfg = SynthConfig(seed=6, dim=12, clusters_shared=2, clusters_unique_1=2,
                          clusters_unique_2=3, outlier_fraction=0.25)
        b1, b2, _ = generate_pair(cfg)
        b1.validate()
        b2.validate()
        assert b1.topic_ids == [-1, 0, 1, 2, 3]
        assert b2.topic_ids == [-1, 0, 1, 2, 3, 4]

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(clusters_shared=0, clusters_unique_1=0, clusters_unique_2=1),
            dict(docs_per_cluster=0),
            dict(cluster_spread=0.0),
            dict(cluster_spread=2.0),  # separation/spread below 1
            dict(outlier_fraction=1.0),
            dict(dim=2, clusters_shared=4),
        ],
    )
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(errors.ConfigError):
            SynthConfig(seed=0, **kwargs)


class TestPlantedStructure:
    def test_shared_clusters_recovered(self):
        # Separation ten times the spread: every factor should be pinned.
        cfg = SynthConfig(seed=7, dim=8, clusters_shared=5, docs_per_cluster=30,
                          cluster_spread=0.1, centroid_separation=1.0)
        b1, b2, _ = generate_pair(cfg)
        for direction, (_, _, m) in pipeline_measures(b1, b2).items():
            assert m.c >= 0.95
            assert m.a >= 0.9

    def test_disjoint_themes_put_all_mass_on_outlier(self):
        cfg = SynthConfig(seed=8, dim=9, clusters_shared=0, clusters_unique_1=3,
                          clusters_unique_2=3, docs_per_cluster=25,
                          cluster_spread=0.05, centroid_separation=1.0, outlier_fraction=0.25)
        b1, b2, _ = generate_pair(cfg)
        for direction, (_, strengths, m) in pipeline_measures(b1, b2).items():
            assert m.u == 1.0
            assert [t.topic for t in m.unique_topics] == [0, 1, 2]
            assert m.relationship == "independent"

    def test_uniqueness_grows_with_outlier_fraction(self):
        def u_at(fraction):
            cfg = SynthConfig(seed=11, dim=9, clusters_shared=4, docs_per_cluster=30,
                              outlier_fraction=fraction)
            b1, b2, _ = generate_pair(cfg)
            table = build_assignment_table(b1, b2)
            strengths = pairing_strengths(count_pairs(table, "1to2", "both"))
            return corpus_uniqueness(strengths)[0]

        assert u_at(0.4) > u_at(0.0)


class TestBruteForceOracle:
    def test_refuses_large_instances(self):
        cfg = SynthConfig(seed=0, dim=8, clusters_shared=5, docs_per_cluster=150)
        b1, b2, _ = generate_pair(cfg)
        with pytest.raises(errors.ConfigError, match="too large"):
            brute_force_report(b1, b2)

    def test_diagonal_instance(self):
        cfg = SynthConfig(seed=9, dim=8, clusters_shared=4, docs_per_cluster=20,
                          cluster_spread=0.05, centroid_separation=1.0)
        b1, b2, _ = generate_pair(cfg)
        oracle = brute_force_report(b1, b2)
        for direction in ("1to2", "2to1"):
            d = oracle.directions[direction]
            assert d.c == 1.0
            assert d.u == 0.0
            assert d.a == 1.0

    def test_disjoint_instance_u_is_one(self):
        cfg = SynthConfig(seed=8, dim=9, clusters_shared=0, clusters_unique_1=3,
                          clusters_unique_2=3, docs_per_cluster=25,
                          cluster_spread=0.05, centroid_separation=1.0, outlier_fraction=0.25)
        b1, b2, _ = generate_pair(cfg)
        oracle = brute_force_report(b1, b2)
        assert oracle.directions["1to2"].u == 1.0
        assert oracle.directions["2to1"].u == 1.0

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    @pytest.mark.parametrize("pool", ["both", "native"])
    def test_pipeline_equivalence(self, seed, pool):
        cfg = SynthConfig(seed=seed, dim=10, clusters_shared=2, clusters_unique_1=2,
                          clusters_unique_2=1, docs_per_cluster=12,
                          cluster_spread=0.15, centroid_separation=1.0, outlier_fraction=0.2)
        b1, b2, _ = generate_pair(cfg)
        oracle = brute_force_report(b1, b2, pool)
        for direction, (counts, strengths, m) in pipeline_measures(b1, b2, pool).items():
            ref = oracle.directions[direction]
            for i, n in enumerate(counts.native_ids):
                for j, c in enumerate(counts.cross_ids):
                    assert counts.counts[i, j] == ref.counts.get((n, c), 0)
                assert counts.native_totals[i] == ref.totals[n]
            for name in ("c", "c_w", "u", "u_w", "a", "a_w"):
                assert getattr(m, name) == pytest.approx(getattr(ref, name), abs=1e-9)
            assert [t.topic for t in m.unique_topics] == ref.unique
            assert m.relationship == ref.relationship
