"""Log-log slope of |n alpha(n) - d| and the weighted residual, series against Levinson.

    python3 scripts/asymptotics_study.py [--n-lo 20] [--n-hi 200]
"""

import argparse
from dataclasses import dataclass, field

import numpy as np

from phasepacf.analysis import check_farima_asymptotics, delta_comparison
from phasepacf.models import ModelSpec, autocovariance
from phasepacf.oracle import levinson
from phasepacf.phase import beta_table_for
from phasepacf.verblunsky import pacf


@dataclass
class StudyConfig:
    n_lo: int = 20
    n_hi: int = 200
    specs: list = field(default_factory=lambda: [
        ModelSpec(d=0.1), ModelSpec(d=0.3), ModelSpec(d=0.4),
        ModelSpec(phi=(0.5,), d=0.3), ModelSpec(phi=(0.5,), theta=(0.4,), d=0.1),
        ModelSpec(phi=(0.5,), theta=(0.4,), d=0.3), ModelSpec(theta=(0.4,), d=0.4),
    ])


def main(cfg: StudyConfig):
    grid = np.arange(cfg.n_lo, cfg.n_hi + 1)
    print(f"{'model':<18}{'slope(series)':>14}{'slope(oracle)':>14}{'-1-d+0.15':>11}"
          f"{'q1 mean':>10}{'q5 mean':>10}{'M (delta)':>11}")
    for spec in cfg.specs:
        bt = beta_table_for(spec, cfg.n_hi)
        series = check_farima_asymptotics(spec, {r.n: r.alpha for r in pacf(bt, grid)}, grid)
        lv = levinson(autocovariance(spec, cfg.n_hi + 1), cfg.n_hi).alpha
        oracle = check_farima_asymptotics(spec, lv, grid)
        M = delta_comparison(spec, bt, spec.d, cfg.n_hi, n_min=10).M
        print(f"{spec.label():<18}{series.fitted_slope:>14.4f}{oracle.fitted_slope:>14.4f}"
              f"{series.slope_threshold:>11.2f}{series.first_quintile_mean:>10.4f}"
              f"{series.last_quintile_mean:>10.4f}{M:>11.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-lo", type=int, default=20)
    ap.add_argument("--n-hi", type=int, default=200)
    a = ap.parse_args()
    main(StudyConfig(n_lo=a.n_lo, n_hi=a.n_hi))
