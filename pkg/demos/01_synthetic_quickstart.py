"""
Quickstart on synthetic data
============================

Generate a corpus pair with planted structure (three shared themes, one theme
unique to each corpus, 20% outliers), run the full analysis in memory, and
print the corpus-level factor table.
"""

from btm import (
    SynthConfig,
    build_assignment_table,
    build_measure_report,
    count_pairs,
    generate_pair,
    pairing_strengths,
)

config = SynthConfig(
    seed=7,
    dim=12,
    clusters_shared=3,
    clusters_unique_1=1,
    clusters_unique_2=1,
    docs_per_cluster=40,
    outlier_fraction=0.2,
)
bundle1, bundle2, truth = generate_pair(config)
print(f"corpus 1: {bundle1.n_docs} docs, topics {bundle1.topic_ids}")
print(f"corpus 2: {bundle2.n_docs} docs, topics {bundle2.topic_ids}")
print(f"planted: shared pairs {truth.shared_pairs}, unique {truth.unique_topics_1} / {truth.unique_topics_2}")

# Each model labels the other corpus's documents; one table holds every pair.
table = build_assignment_table(bundle1, bundle2)

print("\nnative corpus    C     C_w-C   U     U_w-U   A     A_w-A  relationship")
for direction, native in (("1to2", bundle1), ("2to1", bundle2)):
    strengths = pairing_strengths(count_pairs(table, direction, "both"))
    m = build_measure_report(strengths, native)
    print(
        f"corpus {direction[0]}         "
        f"{m.c:.2f}  {m.theta:+.2f}   {m.u:.2f}  {m.u_skew:+.2f}   "
        f"{m.a:.2f}  {m.a_skew:+.2f}  {m.relationship}"
    )
    unique = ", ".join(f"{t.label} ({t.uniqueness:.2f})" for t in m.unique_topics)
    print(f"  unique topics: {unique or 'none'}")
