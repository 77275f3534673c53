"""Shared driver for the estimator replication studies."""
import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from tsabm.estimation import validate_estimator
from tsabm.paths import ModelParams
from tsabm.pipeline import write_rows


@dataclass
class ReplicationConfig:
    kind: str
    alpha: float
    lam: float
    beta: float
    n_reps: int = 1000
    path_len: int = 1000
    seed: int = 2024
    workers: int = 1


def run(cfg: ReplicationConfig, out: Path, stem: str) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    truth = ModelParams(cfg.alpha, cfg.lam, cfg.beta)
    s = validate_estimator(cfg.kind, truth, cfg.n_reps, cfg.path_len, cfg.seed, n_workers=cfg.workers)
    rows = [["replication", "alpha_hat", "lambda_hat", "beta_hat"]]
    rows += [[str(i), *(repr(float(v)) for v in row)] for i, row in enumerate(s.estimates)]
    write_rows(rows, out / f"{stem}_estimates.csv")
    summary = {"config": asdict(cfg), **s.as_dict()}
    (out / f"{stem}_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def main(defaults: ReplicationConfig, stem: str, doc: str):
    ap = argparse.ArgumentParser(description=doc, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default=f"results/{stem}")
    ap.add_argument("--reps", type=int, default=defaults.n_reps)
    ap.add_argument("--len", type=int, default=defaults.path_len)
    ap.add_argument("--seed", type=int, default=defaults.seed)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = ReplicationConfig(defaults.kind, defaults.alpha, defaults.lam, defaults.beta,
                            args.reps, args.len, args.seed, args.workers)
    res = run(cfg, Path(args.out), stem)
    for name, q in res["quantiles"].items():
        print(f"{name:7s} " + "  ".join(f"{k}={v:.4g}" for k, v in q.items()))
    print(f"failed fits: {res['n_failed']}")
