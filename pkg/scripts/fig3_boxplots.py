"""Replication study of the Y_T transform estimator (boxplot statistics and raw estimates).

    python scripts/fig3_boxplots.py --out results/fig3 [--reps 1000] [--workers 4]
"""
from _boxplots import ReplicationConfig, main

DEFAULTS = ReplicationConfig(kind="nts", alpha=0.26, lam=6.0, beta=0.11)

if __name__ == "__main__":
    main(DEFAULTS, "fig3", __doc__)
