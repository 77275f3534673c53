"""Replication study of the Y_S waiting-time estimator (boxplot statistics and raw estimates).

    python scripts/fig6_boxplots.py --out results/fig6 [--reps 1000] [--workers 4]
"""
from _boxplots import ReplicationConfig, main

DEFAULTS = ReplicationConfig(kind="subdiffusive", alpha=0.4, lam=0.2, beta=0.0)

if __name__ == "__main__":
    main(DEFAULTS, "fig6", __doc__)
