"""Low-level numerical kernels.

Gamma-ratio recurrences, power-series expansion of rational functions,
Hankel-type correlation sums (naive and FFT), and the quadrature rule used
to carry infinite index sums past the end of a stored table.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import fft as sfft
from scipy import signal, special

FFT_CROSSOVER = 512
COMPENSATED_MIN_LEN = 10_000


def gamma_ratio_seq(start: float, ratio_fn: Callable, length: int) -> np.ndarray:
    """Sequence s with s[0] = start and s[n+1] = s[n] * ratio_fn(n).

    ``ratio_fn`` may be vectorized (called once on an index array) or a
    plain scalar function. The products are accumulated strictly left to
    right, so the recurrence holds exactly in floating point.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    idx = np.arange(length - 1)
    try:
        ratios = np.broadcast_to(np.asarray(ratio_fn(idx), dtype=float), idx.shape)
    except (TypeError, ValueError):
        ratios = np.array([float(ratio_fn(int(i))) for i in idx])
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.cumprod(np.concatenate(([float(start)], ratios)))
    bad = np.flatnonzero(~np.isfinite(out))
    if bad.size:
        raise OverflowError(f"overflow in recurrence at index {int(bad[0])}")
    return out


def rational_series(numer, denom, length: int) -> np.ndarray:
    """First ``length`` power-series coefficients of numer(z)/denom(z).

    Coefficients are given lowest degree first.
    """
    numer = np.atleast_1d(np.asarray(numer, dtype=float))
    denom = np.atleast_1d(np.asarray(denom, dtype=float))
    if denom[0] == 0.0:
        raise ZeroDivisionError("non-invertible constant term")
    impulse = np.zeros(length)
    if length:
        impulse[0] = 1.0
    # lfilter runs exactly the recurrence r_n = (numer_n - sum denom_k r_{n-k}) / denom_0
    return signal.lfilter(numer, denom, impulse)


def decaying_series(numer, denom, tol: float = 1e-17, max_len: int = 1 << 22) -> np.ndarray:
    """Expansion of numer/denom cut where the coefficients have decayed below tol.

    The denominator must have no zeros in the closed unit disk, so the
    coefficients decay geometrically. Raises if they have not decayed by
    ``max_len`` terms.
    """
    length = 256
    while True:
        r = rational_series(numer, denom, length)
        scale = np.max(np.abs(r))
        tail = np.abs(r[-32:]).max()
        if tail <= tol * scale:
            keep = np.flatnonzero(np.abs(r) > tol * scale)
            return r[: keep[-1] + 1] if keep.size else r[:1]
        if length >= max_len:
            raise ValueError(
                f"series has not decayed below {tol:g} within {max_len} terms; "
                "a zero of the denominator is too close to the unit circle"
            )
        length *= 4


def compensated_sum(values) -> float:
    """Sum with error compensation once the input is long."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size > COMPENSATED_MIN_LEN:
        return math.fsum(values)
    return float(values.sum())


def correlate_tail(b, x, offset: int, out_len: int, mode: str = "auto",
                   crossover: int = FFT_CROSSOVER) -> np.ndarray:
    """Hankel matrix-vector product y[j] = sum_v b[offset + j + v] * x[v].

    ``mode`` is ``"naive"``, ``"fft"`` or ``"auto"`` (FFT once len(x) >=
    ``crossover``).
    """
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    lx = x.size
    need = offset + out_len + lx - 1
    if out_len <= 0 or lx == 0:
        return np.zeros(max(out_len, 0))
    if b.size < need:
        raise ValueError(f"b has length {b.size}; correlate_tail needs at least {need}")
    seg = b[offset:need]
    if mode == "auto":
        mode = "fft" if lx >= crossover else "naive"
    if mode == "naive":
        if lx * out_len <= 1 << 24:
            windows = np.lib.stride_tricks.sliding_window_view(seg, lx)
            return windows @ x
        return np.array([np.dot(seg[j:j + lx], x) for j in range(out_len)])
    if mode != "fft":
        raise ValueError(f"unknown mode {mode!r}")
    # cyclic convolution with reversed x; wrap-around only touches discarded entries
    n = sfft.next_fast_len(seg.size, real=True)
    y = sfft.irfft(sfft.rfft(seg, n) * sfft.rfft(x[::-1], n), n)
    return y[lx - 1: lx - 1 + out_len]


_BERNOULLI = special.bernoulli(24)


def _bernoulli_poly(k: int, a: float) -> float:
    return sum(math.comb(k, j) * _BERNOULLI[j] * a ** (k - j) for j in range(k + 1))


_ASYMPTOTIC_FROM = 10.0


def gamma_ratio(y, a: float, b: float) -> np.ndarray:
    """Gamma(y + a) / Gamma(y + b), accurate for very large y.

    Small arguments use ``scipy.special.poch``; from y ~ 10 on, the
    Bernoulli-polynomial expansion of the log-gamma difference, good to a
    few 1e-15 relative at any size (``poch`` drops digits past y ~ 20, and
    ``gammaln`` differences lose everything for large y).
    """
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = y.ravel()
    out = np.empty_like(y)
    big = y + min(a, b) >= _ASYMPTOTIC_FROM
    out[~big] = special.poch(y[~big] + b, a - b)
    if np.any(big):
        yb = y[big]
        log_ratio = (a - b) * np.log(yb)
        inv = 1.0 / yb
        power = inv.copy()
        for k in range(2, 20):
            coef = (-1) ** k * (_bernoulli_poly(k, a) - _bernoulli_poly(k, b)) / (k * (k - 1))
            log_ratio += coef * power
            power = power * inv
        out[big] = np.exp(log_ratio)
    return out.reshape(shape)


def log_panel_rule(start: float, width: float = 2.0, nodes: int = 10,
                   t_max: float = 80.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals over [start, inf) of slowly decaying functions.

    Gauss-Legendre panels of equal width in t = log(u / start), up to
    u = start * exp(t_max). Used to carry index sums past the end of an
    exact integer block: sum_{v >= V} f(v) ~ integral_{V - 1/2}^inf f.
    """
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    lefts = np.arange(0.0, t_max, width)
    t = (lefts[:, None] + (gx[None, :] + 1.0) * width / 2).ravel()
    wt = np.tile(gw * width / 2, lefts.size)
    u = start * np.exp(t)
    return u, wt * u
