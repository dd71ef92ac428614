"""Naive against FFT Hankel products for V = 2^10 .. 2^max.

    python3 scripts/bench_correlate.py [--max-exp 16]
"""

import argparse
from dataclasses import dataclass

from phasepacf.cli import bench_rows


@dataclass
class BenchConfig:
    min_exp: int = 10
    max_exp: int = 16
    seed: int = 0


def main(cfg: BenchConfig):
    print(f"{'V':>8}{'naive [s]':>12}{'fft [s]':>12}{'speedup':>10}{'max rel diff':>14}")
    for V, tn, tf, sp, rel in bench_rows(cfg.max_exp, cfg.min_exp, cfg.seed):
        print(f"{V:>8}{tn:>12.4g}{tf:>12.4g}{sp:>10.1f}{rel:>14.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-exp", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(BenchConfig(max_exp=a.max_exp, seed=a.seed))
