"""Doubling the block length V: change in alpha(n) against the reported error estimate.

    python3 scripts/error_honesty.py
"""

from dataclasses import dataclass, field

from phasepacf.models import ModelSpec, autocovariance
from phasepacf.oracle import levinson
from phasepacf.phase import beta_table_for
from phasepacf.policy import TruncationPolicy
from phasepacf.verblunsky import alpha


@dataclass
class HonestyConfig:
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    ns: tuple = (2, 5, 10, 20, 50)
    specs: tuple = (ModelSpec(d=0.4), ModelSpec(phi=(0.5,), theta=(0.4,), d=0.3),
                    ModelSpec(phi=(0.5,), theta=(0.4,)), ModelSpec(phi=(0.5,), d=0.3))


def main(cfg: HonestyConfig):
    p, p2 = cfg.policy, cfg.policy.doubled()
    print(f"{'model':<18}{'n':>4}{'|a(2V)-a(V)|':>15}{'est(V)':>12}{'ratio':>8}{'|a(V)-oracle|':>15}")
    for spec in cfg.specs:
        bt = beta_table_for(spec, max(cfg.ns), p2)
        ref = levinson(autocovariance(spec, max(cfg.ns) + 1), max(cfg.ns)).alpha
        for n in cfg.ns:
            a, b = alpha(bt, n, p), alpha(bt, n, p2)
            diff = abs(a.alpha - b.alpha)
            print(f"{spec.label():<18}{n:>4}{diff:>15.3e}{a.est_trunc_error:>12.3e}"
                  f"{diff / a.est_trunc_error:>8.3f}{abs(a.alpha - ref[n]):>15.3e}")


if __name__ == "__main__":
    main(HonestyConfig())
