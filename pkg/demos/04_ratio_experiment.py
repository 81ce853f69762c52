# Empirical ratios against the exact oracle.
# Run: python3 demos/04_ratio_experiment.py
# %%
from collections import Counter

from gst12 import RatioConfig, run_ratio_experiment

for mode in ("stp", "gst"):
    report = run_ratio_experiment(RatioConfig(count=300, max_nodes=9, mode=mode, seed=4))
    print(report.summary())
    hist = Counter(r.ratio for r in report.rows)
    for q in sorted(hist):
        print(f"  ratio {str(q):>5s}: {hist[q]}")

# %%
# The CSV is what `gst12 ratio` writes.
print(report.to_csv().splitlines()[:4])
