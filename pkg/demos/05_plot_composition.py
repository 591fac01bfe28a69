"""
Pairing-strength composition bars
=================================

The report's plot data decomposes each large native topic into ranked cross
segments; pairs under 0.05 merge into a "remaining" segment and the outlier
segment is flagged (rendered here with a different fill). This is the text
version of a stacked-bar composition chart.
"""

from btm import (
    RunConfig,
    SynthConfig,
    generate_pair,
    plot_data,
    run_analyze,
    write_bundle,
)

import tempfile
from pathlib import Path

config = SynthConfig(
    seed=10,
    dim=12,
    clusters_shared=4,
    clusters_unique_1=1,
    docs_per_cluster=35,
    cluster_spread=0.35,
    centroid_separation=1.0,
    outlier_fraction=0.15,
)

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    bundle1, bundle2, _ = generate_pair(config)
    write_bundle(bundle1, root / "c1")
    write_bundle(bundle2, root / "c2")
    report = run_analyze(
        RunConfig(c1=root / "c1", c2=root / "c2", out=root / "out", top_k=5)
    )
    rows = plot_data(report, top_k=5)

WIDTH = 60
for direction in ("1to2", "2to1"):
    print(f"direction {direction} (top native topics by size)")
    for topic in sorted({r["native_topic"] for r in rows if r["direction"] == direction}):
        segments = [r for r in rows if r["direction"] == direction and r["native_topic"] == topic]
        bar = ""
        for seg in segments:
            width = max(1, round(seg["strength"] * WIDTH))
            fill = "░" if seg["is_outlier"] else ("·" if seg["is_remaining"] else "█▓▒"[min(seg["rank"] - 1, 2)])
            bar += fill * width
        label = segments[0]["native_label"]
        print(f"  {label:22s} |{bar}")
    print()
print("darkest = strongest pair, · = merged remainder, ░ = outlier share")
