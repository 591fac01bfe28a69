"""
From pair counts to corpus factors
==================================

Walk the measures through three hand-built co-occurrence patterns that land in
the three relationship regimes: thematic overlap discussed in more detail,
subsets of a parent corpus, and largely independent corpora.
"""

import numpy as np

from btm import classify_relationship, corpus_alignment, corpus_closeness, corpus_uniqueness
from btm.cooccur import PairCounts, pairing_strengths
from btm.measures import alignment_strength


def strengths(rows, cross_ids):
    native_ids = tuple(sorted(rows))
    counts = np.array(
        [[rows[t].get(c, 0) for c in cross_ids] for t in native_ids], dtype=np.int64
    )
    pc = PairCounts(
        direction="1to2",
        pool="both",
        native_ids=native_ids,
        cross_ids=tuple(cross_ids),
        counts=counts,
        native_totals=counts.sum(axis=1),
    )
    return pairing_strengths(pc)


cases = {
    # Every native topic pairs with several cross topics: low U, low A.
    "spread over many cross topics": {
        0: {0: 4, 1: 3, 2: 2, -1: 1},
        1: {1: 4, 2: 3, 3: 2, -1: 1},
        2: {0: 3, 3: 4, 1: 2, -1: 1},
    },
    # Every native topic has one dominant partner: low U, high A.
    "one dominant partner each": {
        0: {0: 9, -1: 1},
        1: {1: 8, 2: 1, -1: 1},
        2: {3: 9, -1: 1},
    },
    # Most mass sits on the cross outlier: high U, low A.
    "mass on the cross outlier": {
        0: {-1: 8, 0: 2},
        1: {-1: 9, 1: 1},
        2: {-1: 7, 2: 3},
    },
}

for name, rows in cases.items():
    s = strengths(rows, (-1, 0, 1, 2, 3))
    c, c_w = corpus_closeness(s)
    u, u_w = corpus_uniqueness(s)
    sa = alignment_strength(s)
    a, a_w = corpus_alignment(sa, {t: s.size_of(t) for t in s.native_ids})
    print(f"{name}:")
    print(f"  C={c:.2f}  U={u:.2f}  A={a:.2f}  ->  {classify_relationship(u, a)}")
    for topic, (value, target) in sorted(sa.items()):
        print(f"  topic {topic}: strongest cross partner {target} at {value:.2f}")
    print()
