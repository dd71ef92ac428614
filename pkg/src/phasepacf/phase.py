"""Phase coefficients beta_n = sum_v c_v a_{v+n} and related quantities.

``beta`` evaluates the defining sums with a fitted power-law tail. For long
memory models the table is paired with ``BetaFarField``, an analytic
continuation of n -> beta_n used past the end of the table: writing
h = (Theta/Phi) (1 - z)^(-d), the coefficients factor as

    beta_n = sum_k g_k * sin(pi d) / (pi (n + k - d)),

where g is the two-sided coefficient sequence of
(Theta(z)/Phi(z)) * (Phi(1/z)/Theta(1/z)), and the FARIMA(0, d, 0) phase
coefficients sin(pi d) / (pi (m - d)) hold for every integer m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import CoeffTable, ModelSpec, arma_weights, coeff_table, require_valid
from .policy import TruncationPolicy
from .seriesops import compensated_sum, correlate_tail, decaying_series

TAIL_WINDOW = 64
_EPS = np.finfo(float).eps


class BetaFarField:
    """x -> beta(x) for large real x, from the model's phase kernel.

    Uses an expansion in powers of 1/(x - d) when it converges to double
    precision on the requested range and a direct kernel sum otherwise.
    """

    def __init__(self, spec: ModelSpec, x_min: float | None = None):
        if spec.d == 0.0:
            raise ValueError("short-memory phase coefficients decay geometrically; no far field")
        self.d = spec.d
        self.scale = math.sin(math.pi * spec.d) / math.pi
        r = arma_weights(spec, tol=1e-18)
        rho = decaying_series(spec.ar_poly, spec.ma_poly, tol=1e-18)
        self.g = np.correlate(r, rho, mode="full")
        self.k = np.arange(-(rho.size - 1), r.size, dtype=float)
        self.k_reach = float(np.abs(self.k).max())
        self.x_min = float(x_min) if x_min is not None else 4.0 * self.k_reach + 16.0
        y_min = self.x_min - self.d
        if y_min <= 4.0 * self.k_reach:
            raise ValueError(
                f"far field starts at {self.x_min:.1f} but the phase kernel reaches {self.k_reach:.0f}; "
                "increase V"
            )
        self.moments = None
        absg = np.abs(self.g)
        kk = np.abs(self.k)
        mu, bound = [], []
        power = np.ones_like(self.k)
        signed = np.ones_like(self.k)
        for p in range(64):
            mu.append(float(np.dot(self.g, signed)))
            bound.append(float(np.dot(absg, power)) / y_min ** p)
            if p and bound[-1] < 1e-18 * bound[0]:
                self.moments = np.array(mu)
                break
            power = power * kk
            signed = signed * (-self.k)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size and x.min() < self.x_min:
            raise ValueError(f"far field evaluated at {x.min():.1f} < {self.x_min:.1f}")
        y = x - self.d
        if self.moments is not None:
            inv = 1.0 / y
            acc = np.zeros_like(y)
            for mu in self.moments[::-1]:
                acc = acc * inv + mu
            return self.scale * acc * inv
        out = np.zeros_like(y)
        for gk, k in zip(self.g, self.k):
            out += gk / (y + k)
        return self.scale * out


@dataclass(frozen=True)
class BetaTable:
    """beta_0..beta_{len-1} with per-entry truncation error estimates."""

    beta: np.ndarray
    trunc_v: int
    tail_corrected: bool
    est_error: np.ndarray
    d: float
    far: BetaFarField | None = None

    def __len__(self) -> int:
        return self.beta.size

    def require(self, upto: int) -> None:
        if upto > self.beta.size:
            raise ValueError(f"beta table has {self.beta.size} entries; {upto} are required")


def tail_integral(n, x0: float, d: float) -> np.ndarray:
    """Integral over [x0, inf) of v^(d-1) (n + v)^(-1-d) dv, stable for n << x0."""
    n = np.asarray(n, dtype=float)
    out = np.empty_like(n)
    zero = n == 0
    out[zero] = 1.0 / x0
    nz = n[~zero]
    out[~zero] = -np.expm1(-d * np.log1p(nz / x0)) / (nz * d)
    return out


def beta(ct: CoeffTable, n_max: int, policy: TruncationPolicy | None = None) -> BetaTable:
    """Phase coefficients beta_0..beta_{n_max}.

    The first ``policy.inner_for(d)`` summands of every sum are taken exactly
    (one Hankel correlation for all n). With tail correction on, the rest is
    modelled as A v^(d-1) (n + v)^(-1-d), A matched to the last 64 summands,
    and integrated from V - 1/2. est_error combines the drift of that fit
    across its window with an FFT rounding bound.
    """
    policy = policy or TruncationPolicy()
    d = ct.spec.d
    V = policy.inner_for(d)
    need = n_max + V
    if ct.trunc_len < need:
        raise ValueError(f"coefficient tables have length {ct.trunc_len}; beta up to {n_max} needs {need}")
    c, a = ct.c[:V], ct.a
    out_len = n_max + 1
    raw = correlate_tail(a, c, 0, out_len)
    mag = correlate_tail(np.abs(a), np.abs(c), 0, out_len)
    # FFT rounding is global: bounded by the input norms, not by each output
    norms = float(np.linalg.norm(a[: need]) * np.linalg.norm(c))
    err = 8.0 * _EPS * math.log2(max(V, 2)) * (np.abs(mag) + norms)

    window = min(TAIL_WINDOW, V)
    v = np.arange(V - window, V, dtype=float)
    n = np.arange(out_len, dtype=float)
    summands = c[V - window:][None, :] * a[(np.arange(out_len)[:, None] + v[None, :]).astype(int)]
    corrected = policy.tail_for(d) and d != 0.0
    if corrected:
        model = v[None, :] ** (d - 1.0) * (n[:, None] + v[None, :]) ** (-1.0 - d)
        ratio = summands / model
        amp = ratio.mean(axis=1)
        q = max(window // 4, 1)
        slope = np.abs(ratio[:, -q:].mean(axis=1) - ratio[:, :q].mean(axis=1)) / max(window - q, 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            drift = np.where(amp != 0, slope / np.abs(amp), 0.0)
        tail = amp * tail_integral(n, V - 0.5, d)
        raw = raw + tail
        err = err + np.abs(tail) * (2.0 * drift * V + 1e-4)
    else:
        # remaining summands are at most of the size of the last window
        err = err + np.abs(summands).sum(axis=1)
    far = BetaFarField(ct.spec) if d > 0 else None
    return BetaTable(raw, V, corrected, err, d, far)


def beta_table_for(spec: ModelSpec, n_max: int, policy: TruncationPolicy | None = None) -> BetaTable:
    """Build coefficients and phase coefficients sized for the engines at n_max."""
    policy = policy or TruncationPolicy()
    length = policy.beta_len(n_max)
    ct = coeff_table(spec, policy.coeff_len(n_max, spec.d))
    return beta(ct, length - 1, policy)


def _geometric_tail(x: np.ndarray) -> float:
    """Sum of |x_i| beyond the table, assuming the last entries decay geometrically."""
    ax = np.abs(x)
    nz = np.flatnonzero(ax > 0)
    if nz.size < 2 or nz[-1] < ax.size - 33:
        return 0.0  # exact zeros or underflow: nothing left to add
    last = ax[nz[-1]]
    prev = ax[max(nz[-1] - 32, nz[0])]
    steps = nz[-1] - max(nz[-1] - 32, nz[0])
    q = (last / prev) ** (1.0 / steps)
    if not q < 1.0:
        raise ValueError("coefficients are not decaying geometrically; F is undefined")
    return float(last * q / (1.0 - q))


def envelope_F(ct: CoeffTable, j_max: int) -> np.ndarray:
    """F(j) = (sum_v |c_v|) (sum_{u >= j} |a_u|) for j = 0..j_max (short memory only)."""
    if ct.spec.d != 0.0:
        raise ValueError("F undefined under (A2)")
    sum_c = compensated_sum(np.abs(ct.c)) + _geometric_tail(ct.c)
    abs_a = np.abs(ct.a)
    tail_a = _geometric_tail(ct.a)
    suffix = np.cumsum(abs_a[::-1])[::-1] + tail_a
    if j_max >= suffix.size:
        suffix = np.concatenate((suffix, np.full(j_max + 1 - suffix.size, tail_a)))
    return sum_c * suffix[: j_max + 1]


def phase_values(spec: ModelSpec, theta: np.ndarray) -> np.ndarray:
    """conj(h)/h on the unit circle, principal branch of (1 - z)^(-d)."""
    z = np.exp(1j * theta)
    h = np.polyval(spec.ma_poly[::-1], z) / np.polyval(spec.ar_poly[::-1], z) * (1 - z) ** (-spec.d)
    return np.conj(h) / h


def _refined_rule(panels: int = 40, nodes: int = 24, levels: int = 12):
    """Gauss-Legendre rule on (0, 2 pi), panels halving toward both endpoints."""
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    edges = [math.pi * 2.0 ** -k for k in range(levels, 0, -1)]
    inner = np.linspace(math.pi / 2, 3 * math.pi / 2, panels + 1)
    left = [0.0] + edges
    cuts = np.unique(np.concatenate((left, inner, 2 * math.pi - np.array(left[::-1]))))
    a, b = cuts[:-1], cuts[1:]
    t = ((b - a)[:, None] * (gx[None, :] + 1) / 2 + a[:, None]).ravel()
    w = ((b - a)[:, None] * gw[None, :] / 2).ravel()
    return t, w


@dataclass(frozen=True)
class FourierCheck:
    n: int
    quadrature: float
    series: float
    diff: float


def phase_fourier_coeff(spec: ModelSpec, n_list, sign: float = -1.0) -> np.ndarray:
    """sign * (1/2 pi) * integral of exp(-i n theta) conj(h)/h by quadrature."""
    theta, w = _refined_rule()
    ph = phase_values(spec, theta) * w
    n = np.asarray(n_list, dtype=float)
    vals = np.exp(-1j * n[:, None] * theta[None, :]) @ ph / (2 * math.pi)
    return sign * vals.real


def fourier_sign() -> float:
    """Which sign makes the Fourier coefficient of conj(h)/h equal beta_n.

    Decided on AR(1) with phi = 0.5, where beta_1 = 0.5 exactly.
    """
    q = phase_fourier_coeff(ModelSpec(phi=(0.5,)), [1], sign=1.0)[0]
    return 1.0 if abs(q - 0.5) < abs(q + 0.5) else -1.0


def beta_fourier_check(spec: ModelSpec, n_list, table: BetaTable | None = None) -> list[FourierCheck]:
    """Compare phase coefficients with Fourier coefficients of the phase function."""
    require_valid(spec)
    if spec.d < 0:
        raise ValueError("Fourier cross-check needs d >= 0")
    n_list = [int(n) for n in n_list]
    if table is None:
        policy = TruncationPolicy()
        ct = coeff_table(spec, max(n_list) + policy.inner_for(spec.d) + 1)
        table = beta(ct, max(n_list), policy)
    quad = phase_fourier_coeff(spec, n_list, sign=fourier_sign())
    return [FourierCheck(n, float(q), float(table.beta[n]), float(q - table.beta[n]))
            for n, q in zip(n_list, quad)]
