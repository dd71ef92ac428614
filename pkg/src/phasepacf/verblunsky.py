"""Verblunsky coefficients from the odd-term phase series.

For n >= 2 the PACF is the conditionally convergent series

    alpha(n) = sum_{k >= 0} alpha_{2k+1}(n),
    alpha_{2k+1}(n) = sum_v beta_{n+v} d_{2k}(n+1, v),

where d_k(m, .) = H_m^k e_0 and H_m is the Hankel operator
(H_m x)(j) = sum_v beta_{m+j+v} x(v). State vectors live on the integers
0..V-1 plus, for long memory models, log-graded quadrature nodes covering
[V - 1/2, inf); the phase coefficients there come from the table's far
field. Terms are summed strictly in increasing k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import ARFunction, CoeffTable
from .phase import BetaTable
from .policy import TruncationPolicy
from .seriesops import correlate_tail, log_panel_rule

_EPS = np.finfo(float).eps


class HankelGrid:
    """The operator H_base discretized on {0..V-1} plus far-field nodes."""

    def __init__(self, table: BetaTable, base: int, V: int, policy: TruncationPolicy):
        table.require(base + 2 * V - 1)
        self.table = table
        self.base = base
        self.V = V
        self.seg = table.beta[base: base + 2 * V - 1]
        if table.far is not None and policy.far_field:
            self.nodes, self.weights = log_panel_rule(
                V - 0.5, policy.panel_width, policy.panel_nodes, policy.t_max)
            cols = np.arange(V, dtype=float)
            self.B = table.far(base + self.nodes[:, None] + cols[None, :])
            self.C = table.far(base + self.nodes[:, None] + self.nodes[None, :]) * self.weights[None, :]
        else:
            self.nodes = np.zeros(0)
            self.weights = np.zeros(0)
        self.size = V + self.nodes.size

    def unit(self) -> np.ndarray:
        x = np.zeros(self.size)
        x[0] = 1.0
        return x

    def apply(self, x: np.ndarray) -> np.ndarray:
        V = self.V
        xi, xf = x[:V], x[V:]
        yi = correlate_tail(self.seg, xi, 0, V)
        if not self.nodes.size:
            return yi
        wf = self.weights * xf
        yi = yi + self.B.T @ wf
        yf = self.B @ xi + self.C @ xf
        return np.concatenate((yi, yf))

    def pair(self, seq_int: np.ndarray, seq_far: np.ndarray | None, x: np.ndarray) -> float:
        """sum_v seq(v) x(v) over the integer block and the far nodes."""
        total = float(np.dot(seq_int, x[: self.V]))
        if self.nodes.size:
            total += float(np.dot(seq_far * self.weights, x[self.V:]))
        return total

    def beta_functional(self, n: int) -> tuple[np.ndarray, np.ndarray | None]:
        """The sequence v -> beta_{n+v} on this grid."""
        self.table.require(n + self.V)
        far = self.table.far(n + self.nodes) if self.nodes.size else None
        return self.table.beta[n: n + self.V], far


@dataclass(frozen=True)
class PacfResult:
    n: int
    alpha: float
    terms_used: int
    last_term: float
    est_trunc_error: float
    converged: bool


def _check_table(table: BetaTable) -> None:
    if table.d < 0:
        raise ValueError("the phase series representation needs d >= 0")


def _small(t: float, partial: float, policy: TruncationPolicy) -> bool:
    return abs(t) < policy.term_tol * max(abs(partial), policy.abs_floor)


def _odd_terms(table: BetaTable, n: int, V: int, policy: TruncationPolicy):
    """alpha_1(n), alpha_3(n), ... on a grid of block length V, with the stop rule applied."""
    grid = HankelGrid(table, n + 1, V, policy)
    u_int, u_far = grid.beta_functional(n)
    terms = [float(table.beta[n])]
    partial = terms[0]
    x = grid.unit()
    converged = False
    while len(terms) < policy.K_max:
        x = grid.apply(grid.apply(x))
        t = grid.pair(u_int, u_far, x)
        terms.append(t)
        partial += t
        if _small(terms[-1], partial, policy) and _small(terms[-2], partial, policy):
            converged = True
            break
    return terms, partial, converged


def _series_tail(terms: list[float]) -> float:
    last = abs(terms[-1])
    if last == 0.0:
        return 0.0
    prev = abs(terms[-2]) if len(terms) > 1 else 0.0
    q = min(last / prev, 0.999) if prev > 0 else 0.5
    return last * q / (1.0 - q)


def _beta_sensitivity(table: BetaTable, n: int, V: int, terms: list[float]) -> float:
    """Effect of the table's own error, as a relative perturbation of every beta.

    A relative change eta in each beta moves alpha_{2k+1} by about
    (2k + 1) eta |alpha_{2k+1}|; eta is the magnitude-weighted relative
    error over the entries the grid reads.
    """
    window = slice(n, n + 2 * V)
    mass = float(np.sum(np.abs(table.beta[window])))
    if mass == 0.0:
        return 0.0
    eta = float(np.sum(table.est_error[window])) / mass
    return eta * sum((2 * k + 1) * abs(t) for k, t in enumerate(terms))


def alpha(table: BetaTable, n: int, policy: TruncationPolicy | None = None) -> PacfResult:
    """alpha(n) for n >= 2 by the odd-term series.

    est_trunc_error adds a geometric bound on the unsummed terms, the change
    from re-running on a block of length V/2, the propagated error of the
    beta table, and a rounding floor.
    """
    policy = policy or TruncationPolicy()
    if n < 2:
        raise ValueError("the series holds for n >= 2; alpha(1) = gamma(1)/gamma(0) comes from the oracle")
    _check_table(table)
    terms, value, converged = _odd_terms(table, n, policy.V, policy)
    err = _series_tail(terms)
    if policy.error_check and policy.V >= 32:
        half = TruncationPolicy(**{**policy.__dict__, "V": policy.V // 2})
        try:
            _, coarse, _ = _odd_terms(table, n, half.V, half)
            err += abs(value - coarse)
        except ValueError:
            pass  # far field not valid at V/2; other terms still apply
    err += _beta_sensitivity(table, n, policy.V, terms)
    scale = max(sum(abs(t) for t in terms), float(np.max(np.abs(table.beta))))
    err += 64 * _EPS * scale
    return PacfResult(n, value, len(terms), terms[-1], err, converged)


def pacf(table: BetaTable, n_values, policy: TruncationPolicy | None = None) -> list[PacfResult]:
    return [alpha(table, int(n), policy) for n in n_values]


def dk_state(table: BetaTable, n: int, k: int, policy: TruncationPolicy | None = None):
    """d_k(n, .) on the grid of H_n; returns (values, grid)."""
    policy = policy or TruncationPolicy()
    _check_table(table)
    grid = HankelGrid(table, n, policy.V, policy)
    x = grid.unit()
    for _ in range(k):
        x = grid.apply(x)
    return x, grid


def dk_vector(table: BetaTable, n: int, k: int, policy: TruncationPolicy | None = None) -> np.ndarray:
    """d_k(n, j) for 0 <= j < V."""
    policy = policy or TruncationPolicy()
    x, _ = dk_state(table, n, k, policy)
    return x[: policy.V]


def alpha_term(table: BetaTable, n: int, k: int, policy: TruncationPolicy | None = None) -> float:
    """alpha_{2k+1}(n) = sum_v beta_{n+v} d_{2k}(n+1, v); k = 0 gives beta_n."""
    policy = policy or TruncationPolicy()
    if k == 0:
        return float(table.beta[n])
    x, grid = dk_state(table, n + 1, 2 * k, policy)
    return grid.pair(*grid.beta_functional(n), x)


class _ARFunctional:
    """Rows u -> a_{j+u} on a grid, for j = 1..n."""

    def __init__(self, ct: CoeffTable, grid: HankelGrid, far: ARFunction | None, js: np.ndarray):
        V = grid.V
        need = int(js.max()) + V
        if ct.a.size < need:
            raise ValueError(f"AR table has length {ct.a.size}; {need} are required")
        self.grid = grid
        self.rows = ct.a[js[:, None] + np.arange(V)[None, :]]
        if grid.nodes.size:
            self.far = far(js[:, None] + grid.nodes[None, :]) * grid.weights[None, :]
        else:
            self.far = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = self.rows @ x[: self.grid.V]
        if self.far is not None:
            out = out + self.far @ x[self.grid.V:]
        return out


def _ar_far(ct: CoeffTable) -> ARFunction | None:
    return ARFunction(ct.spec) if ct.spec.d > 0 else None


def b_coeff(ct: CoeffTable, table: BetaTable, n: int, j: int, k: int,
            policy: TruncationPolicy | None = None) -> float:
    """b_k(n, j) = c_0 sum_u a_{j+u} d_{k-1}(n+1, u)."""
    policy = policy or TruncationPolicy()
    if j < 1 or k < 1:
        raise ValueError("b_k(n, j) needs j >= 1 and k >= 1")
    x, grid = dk_state(table, n + 1, k - 1, policy)
    row = _ARFunctional(ct, grid, _ar_far(ct), np.array([j]))
    return float(ct.c[0] * row(x)[0])


@dataclass
class PredictorTable:
    """phi[n, j] for 1 <= j <= n <= n_max (other entries are zero)."""

    n_max: int
    phi: np.ndarray
    converged: np.ndarray

    def row(self, n: int) -> np.ndarray:
        return self.phi[n, 1: n + 1]

    def szego_residual(self, alpha_of) -> np.ndarray:
        """max_j |phi[n,j] - phi[n+1,j] - phi[n,n+1-j] alpha(n+1)| for n = 1..n_max-1.

        ``alpha_of`` maps n to alpha(n) (array or callable).
        """
        get = alpha_of if callable(alpha_of) else (lambda m: alpha_of[m])
        out = np.zeros(self.n_max)
        for n in range(1, self.n_max):
            cur, nxt = self.row(n), self.row(n + 1)[:n]
            out[n] = np.max(np.abs(cur - nxt - cur[::-1] * get(n + 1)))
        return out


def predictor_coeffs(ct: CoeffTable, table: BetaTable, n_max: int,
                     policy: TruncationPolicy | None = None) -> PredictorTable:
    """Finite predictor coefficients phi_{n,j} = sum_k {b_{2k-1}(n,j) + b_{2k}(n,n+1-j)}."""
    policy = policy or TruncationPolicy()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    _check_table(table)
    far = _ar_far(ct)
    phi = np.zeros((n_max + 1, n_max + 1))
    conv = np.zeros(n_max + 1, dtype=bool)
    c0 = float(ct.c[0])
    for n in range(1, n_max + 1):
        grid = HankelGrid(table, n + 1, policy.V, policy)
        b_of = _ARFunctional(ct, grid, far, np.arange(1, n + 1))
        x = grid.unit()
        row = np.zeros(n)
        small_run = 0
        for _ in range(policy.K_max):
            odd = c0 * b_of(x)
            x = grid.apply(x)
            even = c0 * b_of(x)
            x = grid.apply(x)
            term = odd + even[::-1]
            row += term
            bound = policy.term_tol * max(float(np.max(np.abs(row))), policy.abs_floor)
            small_run = small_run + 1 if float(np.max(np.abs(term))) < bound else 0
            if small_run >= 2:
                conv[n] = True
                break
        phi[n, 1: n + 1] = row
    return PredictorTable(n_max, phi, conv)
