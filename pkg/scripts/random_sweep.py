"""Sweep random instances of one family and tabulate chain statistics.

Writes one CSV row per instance: family, dimension, length, final size,
final norm, seconds, the monitor flags, and whether a resource cap was hit.
"""

import argparse
import csv
import random
import sys
import time
from dataclasses import asdict, dataclass

from covchain.engine import ResourceLimitExceeded, backward_classical, backward_dual, run_monitors, views_agree
from covchain.generators import (
    random_affine_net,
    random_config,
    random_invertible_net,
    random_strictly_increasing_net,
    random_vas,
)
from covchain.oracle import karp_miller_covers

FAMILIES = ("vas", "invertible", "increasing", "general")


@dataclass
class SweepConfig:
    family: str = "vas"
    count: int = 200
    seed: int = 0
    max_dim: int = 3
    max_norm: int = 2
    target_norm: int = 3
    max_iterations: int = 2000
    max_size: int = 20000


@dataclass
class Row:
    family: str
    dim: int
    length: int = -1
    size: int = -1
    norm: int = -1
    seconds: float = 0.0
    agree: bool = True
    controlled: bool = True
    omega_monotone: bool = True
    strongly_monotone: bool = True
    thin: bool = True
    capped: bool = False


def make_model(cfg: SweepConfig, rng: random.Random):
    if cfg.family == "vas":
        return random_vas(rng, cfg.max_dim, 3, cfg.max_norm)
    if cfg.family == "invertible":
        return random_invertible_net(rng, cfg.max_dim, cfg.max_norm)
    if cfg.family == "increasing":
        return random_strictly_increasing_net(rng, cfg.max_dim, 1, cfg.max_norm)
    return random_affine_net(rng, cfg.max_dim, cfg.max_norm)


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    caps = {"max_iterations": cfg.max_iterations, "max_size": cfg.max_size}
    for _ in range(cfg.count):
        model = make_model(cfg, rng)
        t = random_config(rng, model.dim, cfg.target_norm)
        s = random_config(rng, model.dim, cfg.target_norm)
        row = Row(cfg.family, model.dim)
        start = time.perf_counter()
        try:
            chain, verdict = backward_dual(model, t, s, **caps)
        except ResourceLimitExceeded:
            row.capped = True
            yield row
            continue
        row.seconds = time.perf_counter() - start
        if cfg.family == "vas":
            classical, v2 = backward_classical(model, t, s, **caps)
            km = karp_miller_covers(model, s, t)
            row.agree = views_agree(chain, classical) and verdict.coverable == v2.coverable == km
        rep = run_monitors(chain)
        row.length, row.size, row.norm = chain.length, len(chain.final.downset), chain.final.downset.norm
        row.controlled = rep.controlled
        row.omega_monotone, row.strongly_monotone = rep.omega_monotone, rep.strongly_monotone
        row.thin = rep.all_ideals_thin and rep.basis_nearly_thin and rep.length_bound_ok
        yield row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=FAMILIES, default="vas")
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-dim", type=int, default=3)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()
    cfg = SweepConfig(args.family, args.count, args.seed, args.max_dim)

    rows = list(sweep(cfg))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0]).keys()))
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    if args.out:
        fh.close()

    done = [r for r in rows if not r.capped]
    bad = [r for r in done if not (r.agree and r.controlled and r.strongly_monotone and r.thin)]
    print(
        f"{cfg.family}: {len(done)} completed, {len(rows) - len(done)} capped, "
        f"{len(bad)} with a failed check, max length {max((r.length for r in done), default=0)}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
