"""Command-line front end.

    phasepacf pacf --d 0.3 --n-max 20
    phasepacf verify --phi 0.5 --theta 0.4 --d 0.3

Exit status: 0 ok, 1 usage or model error, 2 non-convergence or a failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .analysis import _jsonable, exact_farima_refs, verify
from .models import ModelSpec, autocovariance, coeff_table, load_config, parse_coeff_list, validate
from .oracle import levinson
from .phase import beta
from .policy import TruncationPolicy
from .seriesops import correlate_tail
from .verblunsky import alpha, predictor_coeffs

COMMANDS = ("coeffs", "beta", "pacf", "predict", "verify", "bench")
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: ModelSpec
    n_max: int
    policy: TruncationPolicy
    output_format: str = "csv"
    output_path: str | None = None
    bench_max_exp: int = 16


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    ok: bool = True
    extra: dict | None = None


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def _model_json(spec: ModelSpec) -> dict:
    return {"phi": list(spec.phi), "theta": list(spec.theta), "d": spec.d, "label": spec.label()}


# ------------------------------------------------------------------ commands

def _coeffs(cfg: RunConfig) -> Table:
    ct = coeff_table(cfg.spec, cfg.n_max + 1)
    rows = [[n, ct.c[n], ct.a[n], ct.gamma[n]] for n in range(cfg.n_max + 1)]
    return Table(["n", "c", "a", "gamma"], rows)


def _beta_table(cfg: RunConfig, n_max: int):
    p = cfg.policy
    ct = coeff_table(cfg.spec, p.coeff_len(n_max, cfg.spec.d), gamma_len=n_max + 2)
    return ct, beta(ct, p.beta_len(n_max) - 1, p)


def _beta(cfg: RunConfig) -> Table:
    p = cfg.policy
    ct = coeff_table(cfg.spec, cfg.n_max + p.inner_for(cfg.spec.d) + 1, gamma_len=2)
    bt = beta(ct, cfg.n_max, p)
    pure = cfg.spec.d > 0 and not cfg.spec.phi and not cfg.spec.theta
    ref = exact_farima_refs(cfg.spec.d, cfg.n_max)[0] if pure else None
    rows = [[n, bt.beta[n], bt.est_error[n], ref[n] if pure else None] for n in range(cfg.n_max + 1)]
    return Table(["n", "beta", "est_error", "beta_exact"], rows)


def _require_series_scope(spec: ModelSpec):
    if spec.d < 0:
        raise UsageError("the series engine needs d >= 0")


def _pacf(cfg: RunConfig) -> Table:
    _require_series_scope(cfg.spec)
    lv = levinson(autocovariance(cfg.spec, cfg.n_max + 1), cfg.n_max)
    rows = [[1, None, lv.alpha[1], None, None, None, None]]
    ok = True
    if cfg.n_max >= 2:
        _, bt = _beta_table(cfg, cfg.n_max)
        for n in range(2, cfg.n_max + 1):
            r = alpha(bt, n, cfg.policy)
            ok &= r.converged
            rows.append([n, r.alpha, lv.alpha[n], r.alpha - lv.alpha[n], r.terms_used,
                         r.est_trunc_error, r.converged])
    cols = ["n", "alpha_series", "alpha_oracle", "diff", "terms_used", "est_trunc_error", "converged"]
    return Table(cols, rows, ok)


def _predict(cfg: RunConfig) -> Table:
    _require_series_scope(cfg.spec)
    ct, bt = _beta_table(cfg, cfg.n_max + 1)
    pt = predictor_coeffs(ct, bt, cfg.n_max + 1, cfg.policy)
    alphas = {n: alpha(bt, n, cfg.policy) for n in range(2, cfg.n_max + 2)}
    ok = all(pt.converged[1: cfg.n_max + 1]) and all(r.converged for r in alphas.values())
    resid = pt.szego_residual({n: r.alpha for n, r in alphas.items()})
    rows = []
    for n in range(1, cfg.n_max + 1):
        for j in range(1, n + 1):
            rows.append([n, j, pt.phi[n, j], resid[n], bool(pt.converged[n])])
    return Table(["n", "j", "phi", "szego_residual", "converged"], rows, ok)


def _verify(cfg: RunConfig) -> Table:
    records = verify(cfg.spec, cfg.n_max, cfg.policy)
    ok = all(r["pass"] for r in records)
    return Table([], [], ok, {"model": _model_json(cfg.spec), "pass": ok, "checks": records})


def bench_rows(max_exp: int = 16, min_exp: int = 10, seed: int = 0) -> list[list]:
    rng = np.random.default_rng(seed)
    rows = []
    for e in range(min_exp, max_exp + 1):
        V = 1 << e
        b = rng.standard_normal(2 * V)
        x = rng.standard_normal(V)
        t0 = time.perf_counter()
        yn = correlate_tail(b, x, 0, V, mode="naive")
        t_naive = time.perf_counter() - t0
        t_fft = np.inf
        for _ in range(3):
            t0 = time.perf_counter()
            yf = correlate_tail(b, x, 0, V, mode="fft")
            t_fft = min(t_fft, time.perf_counter() - t0)
        rel = float(np.max(np.abs(yf - yn)) / np.max(np.abs(yn)))
        rows.append([V, t_naive, t_fft, t_naive / t_fft, rel])
    return rows


def _bench(cfg: RunConfig) -> Table:
    rows = bench_rows(cfg.bench_max_exp)
    ok = all(r[4] <= 1e-12 for r in rows)
    return Table(["V", "naive_s", "fft_s", "speedup", "max_rel_diff"], rows, ok)


HANDLERS = {"coeffs": _coeffs, "beta": _beta, "pacf": _pacf, "predict": _predict,
            "verify": _verify, "bench": _bench}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    table = HANDLERS[cfg.command](cfg)
    if table.extra is not None:
        text = render_json(table.extra)
    elif cfg.output_format == "json":
        text = render_json({"command": cfg.command, "model": _model_json(cfg.spec), "ok": table.ok,
                            "rows": [dict(zip(table.columns, r)) for r in table.rows]})
    else:
        text = render_csv(table)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if table.ok else EXIT_FAIL


# ------------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--phi", help="AR coefficients phi_1,...,phi_p (Phi = 1 - phi_1 z - ...)")
    common.add_argument("--theta", help="MA coefficients theta_1,...,theta_q (Theta = 1 + theta_1 z + ...)")
    common.add_argument("--d", type=float, help="memory parameter in (-1/2, 1/2)")
    common.add_argument("--config", help="key-value model file (phi, theta, d); flags override it")
    common.add_argument("--n-max", type=int, default=20)
    common.add_argument("--V", type=int, help="exact block length of the state vectors")
    common.add_argument("--k-max", type=int, help="cap on the number of odd terms")
    common.add_argument("--tol", type=float, help="relative stopping tolerance for odd terms")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--bench-max-exp", type=int, default=16, help="bench: largest V is 2^this")
    parser = _Parser(prog="phasepacf", description="PACF of ARMA/FARIMA models by the phase series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    spec = load_config(args.config) if args.config else ModelSpec()
    spec = ModelSpec(
        phi=parse_coeff_list(args.phi) if args.phi is not None else spec.phi,
        theta=parse_coeff_list(args.theta) if args.theta is not None else spec.theta,
        d=args.d if args.d is not None else spec.d,
    )
    rep = validate(spec)
    if not rep.ok:
        raise UsageError(f"invalid model {spec.label()}: " + "; ".join(rep.messages))
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    policy = TruncationPolicy()
    changes = {}
    if args.V is not None:
        changes["V"] = args.V
    if args.k_max is not None:
        changes["K_max"] = args.k_max
    if args.tol is not None:
        changes["term_tol"] = args.tol
    try:
        policy = replace(policy, **changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 10 <= args.bench_max_exp <= 20:
        raise UsageError("--bench-max-exp must lie in [10, 20]")
    return RunConfig(args.command, spec, args.n_max, policy, args.format, args.out, args.bench_max_exp)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"phasepacf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
