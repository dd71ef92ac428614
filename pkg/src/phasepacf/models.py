"""ARMA / FARIMA process models.

A model is h(z) = Theta(z) / Phi(z) * (1 - z)^(-d) with Phi(0) = Theta(0) = 1.
This module expands h and -1/h as power series (MA coefficients c_n and AR
coefficients a_n, with a_0 = -1) and computes autocovariances from the
closed-form FARIMA(0, d, 0) covariances filtered through the ARMA part.

Polynomial conventions follow the usual time-series ones:
Phi(z) = 1 - phi_1 z - ... - phi_p z^p and Theta(z) = 1 + theta_1 z + ... .
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal, special

from .seriesops import decaying_series, gamma_ratio, gamma_ratio_seq

RESULTANT_TOL = 1e-10
FILTER_TOL = 1e-16


@dataclass(frozen=True)
class ModelSpec:
    """FARIMA(p, d, q) parameters; d = 0 gives a plain ARMA(p, q) model."""

    phi: tuple[float, ...] = ()
    theta: tuple[float, ...] = ()
    d: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        object.__setattr__(self, "d", float(self.d))

    @property
    def ar_poly(self) -> np.ndarray:
        """Coefficients of Phi(z), lowest degree first."""
        return np.concatenate(([1.0], -np.asarray(self.phi, dtype=float)))

    @property
    def ma_poly(self) -> np.ndarray:
        """Coefficients of Theta(z), lowest degree first."""
        return np.concatenate(([1.0], np.asarray(self.theta, dtype=float)))

    @property
    def long_memory(self) -> bool:
        return self.d > 0.0

    def label(self) -> str:
        p, q = len(self.phi), len(self.theta)
        if self.d == 0.0:
            return f"ARMA({p},{q})"
        return f"FARIMA({p},{self.d:g},{q})"


def parse_config(text: str) -> ModelSpec:
    """Parse the key-value model format.

    One ``key = value`` (or ``key: value``) per line; keys are ``phi``,
    ``theta`` and ``d``; list values are comma separated and may be empty.
    ``#`` starts a comment.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split(sep, 1))
        key = key.lower()
        if key not in ("phi", "theta", "d"):
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    return ModelSpec(
        phi=parse_coeff_list(values.get("phi", "")),
        theta=parse_coeff_list(values.get("theta", "")),
        d=float(values.get("d", "0") or 0.0),
    )


def parse_coeff_list(text: str) -> tuple[float, ...]:
    text = text.strip().strip("[]()")
    if not text:
        return ()
    return tuple(float(tok) for tok in text.replace(" ", ",").split(",") if tok)


def load_config(path) -> ModelSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _trim(poly) -> np.ndarray:
    poly = np.asarray(poly, dtype=float)
    nz = np.flatnonzero(poly)
    return poly[: nz[-1] + 1] if nz.size else poly[:1]


def schur_cohn(poly) -> np.ndarray:
    """Step-down reflection coefficients of a polynomial with nonzero constant term.

    Returns the coefficients k_deg, ..., k_1 produced by the Schur-Cohn
    (Levinson step-down) recursion, stopping early at the first |k| >= 1.
    """
    p = _trim(poly)
    if p[0] == 0.0:
        raise ValueError("constant term must be nonzero")
    p = p / p[0]
    ks = []
    while p.size > 1:
        k = p[-1]
        ks.append(k)
        if abs(k) >= 1.0:
            break
        p = (p - k * p[::-1])[:-1] / (1.0 - k * k)
    return np.array(ks)


def zeros_outside_unit_disk(poly) -> bool:
    """True when every zero of the polynomial lies strictly outside |z| <= 1."""
    return bool(np.all(np.abs(schur_cohn(poly)) < 1.0))


def resultant(p, q) -> float:
    """Resultant of two polynomials (lowest degree first) via the Sylvester matrix."""
    p, q = _trim(p), _trim(q)
    m, n = p.size - 1, q.size - 1
    if m == 0:
        return float(p[0] ** n)
    if n == 0:
        return float(q[0] ** m)
    hp, hq = p[::-1], q[::-1]
    syl = np.zeros((m + n, m + n))
    for i in range(n):
        syl[i, i:i + m + 1] = hp
    for i in range(m):
        syl[n + i, i:i + n + 1] = hq
    return float(np.linalg.det(syl))


@dataclass
class ValidationReport:
    ar_stable: bool
    ma_stable: bool
    coprime: bool
    d_in_range: bool
    resultant: float
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ar_stable and self.ma_stable and self.coprime and self.d_in_range


def validate(spec: ModelSpec) -> ValidationReport:
    """Check the stationarity/invertibility conditions of a model.

    Phi and Theta must have no zeros in the closed unit disk and no common
    zeros, and d must lie in (-1/2, 1/2). Failures are reported, not raised.
    """
    msgs = []
    ar_ok = zeros_outside_unit_disk(spec.ar_poly)
    ma_ok = zeros_outside_unit_disk(spec.ma_poly)
    res = resultant(spec.ar_poly, spec.ma_poly)
    coprime = abs(res) > RESULTANT_TOL
    d_ok = -0.5 < spec.d < 0.5
    if not ar_ok:
        msgs.append("AR polynomial has a zero in the closed unit disk")
    if not ma_ok:
        msgs.append("MA polynomial has a zero in the closed unit disk")
    if not coprime:
        msgs.append(f"AR and MA polynomials share a zero (resultant {res:.3g})")
    if not d_ok:
        msgs.append(f"d = {spec.d} is outside (-1/2, 1/2)")
    return ValidationReport(ar_ok, ma_ok, coprime, d_ok, res, msgs)


def require_valid(spec: ModelSpec) -> None:
    report = validate(spec)
    if not report.ok:
        raise ValueError(f"invalid model {spec.label()}: " + "; ".join(report.messages))


def fractional_ma(d: float, length: int) -> np.ndarray:
    """Coefficients of (1 - z)^(-d): Gamma(n + d) / (Gamma(n + 1) Gamma(d))."""
    return gamma_ratio_seq(1.0, lambda n: (n + d) / (n + 1.0), length)


def fractional_ar(d: float, length: int) -> np.ndarray:
    """Coefficients of -(1 - z)^d: -1 at n = 0, then Gamma(n - d) d / (Gamma(n + 1) Gamma(1 - d))."""
    return gamma_ratio_seq(-1.0, lambda n: (n - d) / (n + 1.0), length)


def ma_coeffs(spec: ModelSpec, length: int) -> np.ndarray:
    """MA coefficients c_0..c_{length-1} of h(z); c_0 = 1."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return signal.lfilter(spec.ma_poly, spec.ar_poly, fractional_ma(spec.d, length))


def ar_coeffs(spec: ModelSpec, length: int) -> np.ndarray:
    """Coefficients a_0..a_{length-1} of -1/h(z); a_0 = -1."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return signal.lfilter(spec.ar_poly, spec.ma_poly, fractional_ar(spec.d, length))


def fractional_autocovariance(d: float, length: int) -> np.ndarray:
    """Autocovariances of FARIMA(0, d, 0) with unit innovation variance."""
    g0 = math.exp(special.gammaln(1 - 2 * d) - 2 * special.gammaln(1 - d))
    return gamma_ratio_seq(g0, lambda n: (n + d) / (n + 1.0 - d), length)


def arma_weights(spec: ModelSpec, tol: float = FILTER_TOL) -> np.ndarray:
    """Impulse response of Theta/Phi, cut where it falls below tol (relative)."""
    return decaying_series(spec.ma_poly, spec.ar_poly, tol=tol)


def autocovariance(spec: ModelSpec, length: int) -> np.ndarray:
    """gamma(0..length-1) of the model.

    gamma(n) = sum_{j,k} r_j r_k gamma'(n + j - k), where r is the ARMA
    impulse response and gamma' the FARIMA(0, d, 0) closed form; for d = 0
    this is the usual sum_v c_v c_{v+n}. The c/a expansions are not used.
    """
    r = arma_weights(spec)
    m = r.size
    auto = np.correlate(r, r, mode="full")  # lags -(m-1)..(m-1)
    gp = fractional_autocovariance(spec.d, length + m)
    lags = np.abs(np.arange(-(m - 1), length + m - 1))
    return np.convolve(gp[lags], auto, mode="valid")[:length]


@dataclass(frozen=True)
class CoeffTable:
    """Truncated MA/AR/autocovariance sequences of one model."""

    spec: ModelSpec
    c: np.ndarray
    a: np.ndarray
    gamma: np.ndarray
    trunc_len: int
    tail_exponents: tuple[float, float]


def coeff_table(spec: ModelSpec, length: int, gamma_len: int | None = None) -> CoeffTable:
    require_valid(spec)
    c = ma_coeffs(spec, length)
    a = ar_coeffs(spec, length)
    gamma = autocovariance(spec, gamma_len if gamma_len is not None else min(length, 4096))
    if spec.d == 0.0:
        tails = (-math.inf, -math.inf)  # geometric: faster than any power
    else:
        tails = (spec.d - 1.0, -1.0 - spec.d)
    return CoeffTable(spec, c, a, gamma, length, tails)


class ARFunction:
    """Analytic continuation x -> a(x) of the AR coefficients for large real x.

    a = (AR-polynomial filter) * a', with a'(y) = d Gamma(y - d) / (Gamma(y + 1) Gamma(1 - d)),
    so a(x) = sum_l rho_l a'(x - l) with rho the expansion of Phi/Theta.
    Only used beyond the end of stored tables, where x exceeds the filter length.
    """

    def __init__(self, spec: ModelSpec):
        if spec.d == 0.0:
            raise ValueError("AR coefficients of an ARMA model decay geometrically; no continuation needed")
        self.d = spec.d
        self.rho = decaying_series(spec.ar_poly, spec.ma_poly, tol=1e-18)
        self.scale = spec.d / special.gamma(1 - spec.d)
        self.x_min = 4.0 * self.rho.size + 32.0

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size and x.min() < self.x_min:
            raise ValueError(f"AR continuation used at x = {x.min():.1f} < {self.x_min:.1f}")
        lags = np.arange(self.rho.size)
        vals = gamma_ratio(x[..., None] - lags, -self.d, 1.0)
        return self.scale * (vals @ self.rho)
