"""Numerical checks of the bounds, asymptotics and identities behind the series.

Every check returns a small report object; ``verify`` bundles them into
JSON-ready records ``{"name", "pass", "data"}``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import special

from .models import CoeffTable, ModelSpec, autocovariance, coeff_table, validate
from .oracle import levinson
from .phase import (BetaTable, _geometric_tail, beta, beta_fourier_check, envelope_F)
from .policy import TruncationPolicy
from .seriesops import compensated_sum
from .verblunsky import HankelGrid, _ARFunctional, _ar_far, alpha, predictor_coeffs

MARGIN_TOL = 1e-12


def _lookup(alphas):
    if callable(alphas):
        return alphas
    if isinstance(alphas, dict):
        return alphas.__getitem__
    arr = np.asarray(alphas, dtype=float)
    return lambda n: float(arr[n])


def _loglog_slope(n: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(np.log(n), np.log(y), 1)[0])


# ---------------------------------------------------------------- short memory

@dataclass
class BoundReport:
    n_range: tuple[int, int]
    lhs: np.ndarray
    rhs: np.ndarray
    margin: np.ndarray
    all_satisfied: bool
    N: int
    alpha_rate: float
    a_rate: float

    @property
    def rate_rel_diff(self) -> float:
        return abs(self.alpha_rate - self.a_rate) / self.a_rate


def max_abs_tail(a: np.ndarray, n_max: int) -> np.ndarray:
    """max_{j >= n} |a_j| for n = 0..n_max, the part past the table bounded geometrically."""
    abs_a = np.abs(a)
    beyond = _geometric_tail(a)  # sum past the table dominates every entry there
    run = np.maximum.accumulate(abs_a[::-1])[::-1]
    run = np.maximum(run, beyond)
    if n_max >= run.size:
        run = np.concatenate((run, np.full(n_max + 1 - run.size, beyond)))
    return run[: n_max + 1]


def _geometric_rate(n: np.ndarray, x: np.ndarray, floor: float) -> float:
    """exp of the fitted slope of log |x|; nan when fewer than 3 entries clear the floor."""
    keep = np.abs(x) > floor
    if keep.sum() < 3:
        return math.nan
    return float(np.exp(np.polyfit(n[keep], np.log(np.abs(x[keep])), 1)[0]))


def check_short_memory_bound(spec: ModelSpec, alphas, ct: CoeffTable,
                             n_range: tuple[int, int]) -> BoundReport:
    """|alpha(n)| <= (sum |c|) / (1 - F(n+1)^2) * max_{j >= n} |a_j| on n_range, n >= N.

    N is the first n with F(n+1) < 1. Also fits geometric decay rates of
    |alpha(n)| and |a_n| (entries above 1e-11 only).
    """
    if spec.d != 0.0:
        raise ValueError("the short-memory bound needs d = 0")
    lo, hi = n_range
    F = envelope_F(ct, hi + 2)
    below = np.flatnonzero(F[2:] < 1.0)  # F(n+1) for n >= 1
    if below.size == 0 or below[0] + 1 > hi:
        raise ValueError(f"no n <= {hi} with F(n+1) < 1")
    N = int(below[0]) + 1
    start = max(lo, N)
    n = np.arange(start, hi + 1)
    get = _lookup(alphas)
    lhs = np.array([abs(get(int(m))) for m in n])
    sum_c = compensated_sum(np.abs(ct.c)) + _geometric_tail(ct.c)
    rhs = sum_c / (1.0 - F[n + 1] ** 2) * max_abs_tail(ct.a, hi)[n]
    margin = rhs - lhs
    signed = np.array([get(int(m)) for m in n])
    alpha_rate = _geometric_rate(n.astype(float), signed, 1e-11)
    idx = np.arange(1, ct.a.size)
    a_rate = _geometric_rate(idx.astype(float), ct.a[1:], 1e-11)
    return BoundReport((start, hi), lhs, rhs, margin, bool(np.all(margin >= -MARGIN_TOL)),
                       N, alpha_rate, a_rate)


def envelope_check(table: BetaTable, ct: CoeffTable, n_values, k_max: int = 4,
                   policy: TruncationPolicy | None = None) -> dict:
    """sum_{u<V} |d_k(n, u)| against F(n)^k for k = 1..k_max."""
    policy = policy or TruncationPolicy()
    F = envelope_F(ct, max(n_values) + 1)
    rows = []
    ok = True
    for n in n_values:
        grid = HankelGrid(table, n, policy.V, policy)
        x = grid.unit()
        for k in range(1, k_max + 1):
            x = grid.apply(x)
            lhs = float(np.sum(np.abs(x[: policy.V])))
            rhs = float(F[n] ** k)
            ok &= lhs <= rhs + 1e-10
            rows.append({"n": n, "k": k, "sum_abs_dk": lhs, "F_pow_k": rhs})
    return {"pass": bool(ok), "rows": rows}


def smallest_contracting(ct: CoeffTable, count: int = 3, search: int = 200) -> list[int]:
    """The first ``count`` indices n >= 1 with F(n) < 1."""
    F = envelope_F(ct, search)
    hits = [int(n) for n in np.flatnonzero(F < 1.0) if n >= 1][:count]
    if len(hits) < count:
        raise ValueError(f"fewer than {count} indices with F(n) < 1 below {search}")
    return hits


# ----------------------------------------------------------------- long memory

@dataclass
class AsymptoticsReport:
    d: float
    n_grid: np.ndarray
    weighted_residual: np.ndarray
    fitted_slope: float
    slope_threshold: float
    first_quintile_mean: float
    last_quintile_mean: float

    @property
    def slope_pass(self) -> bool:
        return self.fitted_slope <= self.slope_threshold

    @property
    def trend_pass(self) -> bool:
        return self.last_quintile_mean <= self.first_quintile_mean


def check_farima_asymptotics(spec: ModelSpec, alphas, n_grid) -> AsymptoticsReport:
    """Slope of log |n alpha(n) - d| against log n, and the weighted residual n^d |n alpha(n) - d|."""
    d = spec.d
    if not 0.0 < d < 0.5:
        raise ValueError(f"d = {d} is outside (0, 1/2)")
    n = np.asarray(n_grid, dtype=int)
    if n.size < 5 or np.any(np.diff(n) <= 0):
        raise ValueError("n_grid must be strictly increasing with at least 5 points")
    get = _lookup(alphas)
    dev = np.abs(np.array([m * get(int(m)) for m in n]) - d)
    if not np.all(dev > 0):
        raise ValueError("n alpha(n) - d vanished; slope undefined")
    weighted = n ** d * dev
    q = max(n.size // 5, 1)
    return AsymptoticsReport(d, n, weighted, _loglog_slope(n.astype(float), dev), -1.0 - d + 0.15,
                             float(weighted[:q].mean()), float(weighted[-q:].mean()))


def exact_farima_refs(d: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """beta'_n = sin(pi d)/(pi (n - d)) for n = 0..n_max and alpha'(n) = d/(n - d) (alpha'[0] is nan)."""
    if not 0.0 <= d < 0.5:
        raise ValueError("d must lie in [0, 1/2)")
    n = np.arange(n_max + 1, dtype=float)
    beta_exact = math.sin(math.pi * d) / (math.pi * (n - d)) if d else np.zeros(n.size)
    alpha_exact = np.full(n.size, np.nan)
    alpha_exact[1:] = d / (n[1:] - d)
    return beta_exact, alpha_exact


@dataclass
class DeltaReport:
    n: np.ndarray
    delta: np.ndarray
    M: float


def delta_comparison(spec: ModelSpec, table: BetaTable, d: float, n_max: int,
                     n_min: int = 1) -> DeltaReport:
    """delta_n = beta_n / beta'_n - 1 and the fitted M = sup n^d |delta_n| on [n_min, n_max]."""
    if not 0.0 < d < 0.5:
        raise ValueError("delta comparison needs 0 < d < 1/2")
    table.require(n_max + 1)
    ref, _ = exact_farima_refs(d, n_max)
    n = np.arange(n_min, n_max + 1)
    delta = table.beta[n] / ref[n] - 1.0
    return DeltaReport(n, delta, float(np.max(n ** d * np.abs(delta))))


def tau(k_max: int) -> np.ndarray:
    """tau_1, tau_3, ..., tau_{2 k_max - 1}: Taylor coefficients of arcsin(x)/pi."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    k = np.arange(1, k_max, dtype=float)
    ratios = (2 * k - 1) ** 2 / (2 * k * (2 * k + 1))
    return np.cumprod(np.concatenate(([1.0 / math.pi], ratios)))


def arcsin_partial_sum(x: float, k_max: int) -> float:
    t = tau(k_max)
    powers = x ** (2 * np.arange(1, k_max + 1) - 1)
    return compensated_sum(t * powers)


# ----------------------------------------------------------------- diagnostics

@dataclass
class AssumptionReport:
    regime: str  # "A1" or "A2"
    ok: bool
    data: dict = field(default_factory=dict)


def _window_ratio(x: np.ndarray, lo: int, hi: int) -> float:
    seg = x[lo: hi + 1]
    return float(seg.max() / seg.min() - 1.0)


def assumption_diagnostics(spec: ModelSpec, ct: CoeffTable, window: tuple[int, int] | None = None) -> AssumptionReport:
    """Summability certificates (d = 0) or power-law convergence of c and a (d > 0).

    For d > 0, c_n n^(1-d) and a_n n^(1+d) must each vary by less than 1%
    over the window (default [2^12, 2^16], clipped to the table).
    """
    if spec.d == 0.0:
        data = {}
        ok = True
        for name, x in (("c", ct.c), ("a", ct.a)):
            try:
                tail = _geometric_tail(x)
            except ValueError:
                ok, tail = False, math.inf
            data[f"sum_abs_{name}"] = compensated_sum(np.abs(x)) + tail
            data[f"tail_{name}"] = tail
        return AssumptionReport("A1", ok and all(math.isfinite(v) for v in data.values()), data)

    d = spec.d
    top = ct.c.size - 1
    lo, hi = window or (1 << 12, 1 << 16)
    hi = min(hi, top)
    lo = min(lo, hi // 16)
    n = np.arange(ct.c.size, dtype=float)
    n[0] = 1.0
    c_scaled = ct.c * n ** (1.0 - d)
    a_scaled = ct.a * n ** (1.0 + d)
    k = float(np.sum(spec.ma_poly) / np.sum(spec.ar_poly))
    c_limit = k / special.gamma(d)
    a_limit = d / (k * special.gamma(1.0 - d))
    data = {
        "window": [lo, hi],
        "c_ratio_spread": _window_ratio(c_scaled, lo, hi),
        "a_ratio_spread": _window_ratio(a_scaled, lo, hi),
        "c_scaled_end": float(c_scaled[hi]),
        "a_scaled_end": float(a_scaled[hi]),
        "c_limit": c_limit,
        "a_limit": a_limit,
        "a_limit_over_d_sin": a_limit * math.pi / (d * math.sin(math.pi * d)),
    }
    ok = data["c_ratio_spread"] < 0.01 and data["a_ratio_spread"] < 0.01
    return AssumptionReport("A2", bool(ok), data)


# -------------------------------------------------------------------- identities

def convolution_residual(ct: CoeffTable, n_max: int = 200) -> float:
    """max_n |sum_k a_k c_{n-k} + delta_{n0}| for n <= n_max."""
    conv = np.convolve(ct.a[: n_max + 1], ct.c[: n_max + 1])[: n_max + 1]
    conv[0] += 1.0
    return float(np.max(np.abs(conv)))


class _States:
    """Cached d_k(m, .) state vectors on the grid of H_m."""

    def __init__(self, table: BetaTable, policy: TruncationPolicy, k_max: int):
        self.table, self.policy, self.k_max = table, policy, k_max
        self.cache: dict[int, tuple[HankelGrid, list[np.ndarray]]] = {}

    def __call__(self, m: int):
        if m not in self.cache:
            grid = HankelGrid(self.table, m, self.policy.V, self.policy)
            xs = [grid.unit()]
            for _ in range(self.k_max):
                xs.append(grid.apply(xs[-1]))
            self.cache[m] = (grid, xs)
        return self.cache[m]

    def d(self, k: int, m: int, j: int) -> float:
        return float(self(m)[1][k][j])

    def alpha_odd(self, k: int, n: int) -> float:
        """alpha_{2k+1}(n)."""
        grid, xs = self(n + 1)
        return grid.pair(*grid.beta_functional(n), xs[2 * k])


def dk_difference_residuals(table: BetaTable, ks=(1, 2, 3), ns=range(2, 11), js=range(2, 11),
                     policy: TruncationPolicy | None = None) -> float:
    """max |d_2k(n,j) - d_2k(n+1,j) - sum_l alpha_{2k-2l+1}(n) d_{2l-1}(n,j)|."""
    policy = policy or TruncationPolicy()
    st = _States(table, policy, 2 * max(ks))
    worst = 0.0
    for n in ns:
        for k in ks:
            coef = [st.alpha_odd(k - l, n) for l in range(1, k + 1)]
            for j in js:
                rhs = sum(cf * st.d(2 * l - 1, n, j) for l, cf in zip(range(1, k + 1), coef))
                res = st.d(2 * k, n, j) - st.d(2 * k, n + 1, j) - rhs
                worst = max(worst, abs(res))
    return worst


def b_difference_residuals(ct: CoeffTable, table: BetaTable, ks=(1, 2, 3), ns=range(2, 11),
                     policy: TruncationPolicy | None = None) -> tuple[float, float]:
    """Largest residuals of the two b_k difference equations, over j = 1..n."""
    policy = policy or TruncationPolicy()
    st = _States(table, policy, 2 * max(ks) + 1)
    far = _ar_far(ct)
    c0 = float(ct.c[0])
    rows: dict[int, _ARFunctional] = {}

    def b(k: int, n: int, js: np.ndarray) -> np.ndarray:
        grid, xs = st(n + 1)
        key = n
        if key not in rows:
            rows[key] = _ARFunctional(ct, grid, far, np.arange(1, n + 3))
        return c0 * rows[key](xs[k - 1])[js - 1]

    r37 = r38 = 0.0
    for n in ns:
        j = np.arange(1, n + 1)
        rev = n + 1 - j
        for k in ks:
            al = [st.alpha_odd(k - l, n + 1) for l in range(1, k + 1)]
            lhs = b(2 * k + 1, n, j) - b(2 * k + 1, n + 1, j)
            rhs = sum(a_ * b(2 * l, n, j) for l, a_ in zip(range(1, k + 1), al))
            r37 = max(r37, float(np.max(np.abs(lhs - rhs))))
            lhs = b(2 * k, n, rev) - b(2 * k, n + 1, rev + 1)
            rhs = sum(a_ * b(2 * l - 1, n, rev) for l, a_ in zip(range(1, k + 1), al))
            r38 = max(r38, float(np.max(np.abs(lhs - rhs))))
    return r37, r38


def szego_check(ct: CoeffTable, table: BetaTable, n_max: int = 30,
                policy: TruncationPolicy | None = None) -> float:
    """Szego recursion residual of the series predictor table, with alpha from the series, n <= n_max."""
    policy = policy or TruncationPolicy()
    pt = predictor_coeffs(ct, table, n_max + 1, policy)
    alphas = {m: alpha(table, m, policy).alpha for m in range(2, n_max + 2)}
    return float(np.max(pt.szego_residual(alphas)[1:]))


# ------------------------------------------------------------------- bundle

def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _record(name: str, ok: bool, **data) -> dict:
    return {"name": name, "pass": bool(ok), "data": _jsonable(data)}


def verify(spec: ModelSpec, n_max: int = 50, policy: TruncationPolicy | None = None) -> list[dict]:
    """Run every applicable check on one model; one record per check."""
    policy = policy or TruncationPolicy()
    out = []
    rep = validate(spec)
    out.append(_record("validate", rep.ok, messages=rep.messages, resultant=rep.resultant))
    if not rep.ok:
        return out
    if spec.d < 0:
        out.append(_record("series_scope", False, reason="negative d is outside the series representation"))
        return out

    n_top = max(n_max, 200)
    ct = coeff_table(spec, policy.coeff_len(n_top, spec.d), gamma_len=n_top + 2)
    table = beta(ct, policy.beta_len(n_top) - 1, policy)

    diag = assumption_diagnostics(spec, ct)
    out.append(_record("assumptions", diag.ok, regime=diag.regime, **diag.data))
    res = convolution_residual(ct)
    out.append(_record("convolution_identity", res <= 1e-10, max_residual=res))

    fc = beta_fourier_check(spec, [1, 2, 3, 5, 10], table)
    diffs = [abs(f.diff) for f in fc]
    out.append(_record("phase_fourier", max(diffs) <= 1e-4, n=[f.n for f in fc],
                       quadrature=[f.quadrature for f in fc], series=[f.series for f in fc]))
    if spec.d > 0 and not spec.phi and not spec.theta:
        ref, _ = exact_farima_refs(spec.d, 100)
        err = np.abs(table.beta[:101] - ref)
        ok = bool(np.all(err <= np.maximum(1e-6, table.est_error[:101])))
        out.append(_record("beta_closed_form", ok, max_error=float(err.max())))

    lv = levinson(autocovariance(spec, n_max + 1), n_max)
    results = [alpha(table, n, policy) for n in range(2, n_max + 1)]
    err = np.array([abs(r.alpha - lv.alpha[r.n]) for r in results])
    est = np.array([r.est_trunc_error for r in results])
    conv = all(r.converged for r in results)
    ok = conv and bool(np.all(err <= np.maximum(1e-6, est)))
    out.append(_record("pacf_vs_levinson", ok, n=[r.n for r in results], alpha=[r.alpha for r in results],
                       oracle=lv.alpha[2:], est=est, max_error=float(err.max()), converged=conv))
    alphas = np.concatenate(([np.nan, lv.alpha[1]], [r.alpha for r in results]))

    r_dk = dk_difference_residuals(table, policy=policy)
    r37, r38 = b_difference_residuals(ct, table, policy=policy)
    out.append(_record("dk_difference_identity", r_dk <= 1e-8, max_residual=r_dk))
    out.append(_record("b_difference_identities", max(r37, r38) <= 1e-8, max_residual_odd=r37, max_residual_even=r38))
    sz = szego_check(ct, table, min(30, n_max - 1), policy)
    out.append(_record("szego_recursion", sz <= 1e-7, max_residual=sz))

    if spec.d == 0.0:
        br = check_short_memory_bound(spec, alphas, ct, (1, n_max))
        out.append(_record("short_memory_bound", br.all_satisfied, N=br.N, n_range=br.n_range,
                           lhs=br.lhs, rhs=br.rhs, alpha_rate=br.alpha_rate, a_rate=br.a_rate))
        ns = smallest_contracting(ct)
        env = envelope_check(table, ct, ns, 4, policy)
        out.append(_record("dk_envelope", env["pass"], rows=env["rows"]))
    else:
        grid = np.arange(20, 201)
        more = {n: alpha(table, int(n), policy).alpha for n in grid}
        ar = check_farima_asymptotics(spec, more, grid)
        # n alpha(n) - d = O(n^-d): slope at most -d, weighted residual not growing
        ok = ar.fitted_slope <= -spec.d and ar.trend_pass
        out.append(_record("farima_asymptotics", ok, fitted_slope=ar.fitted_slope,
                           strict_slope_threshold=ar.slope_threshold, strict_slope_pass=ar.slope_pass,
                           first_quintile_mean=ar.first_quintile_mean,
                           last_quintile_mean=ar.last_quintile_mean,
                           weighted_residual=ar.weighted_residual))
        dr = delta_comparison(spec, table, spec.d, 200, n_min=10)
        out.append(_record("delta_comparison", math.isfinite(dr.M), M=dr.M))
    t_sum = arcsin_partial_sum(0.5, 60)
    out.append(_record("tau_arcsin", abs(t_sum - 1.0 / 6.0) <= 1e-12, partial_sum=t_sum))
    return out


def report_dict(obj) -> dict:
    """Dataclass report to a JSON-ready dict."""
    return _jsonable(asdict(obj))
