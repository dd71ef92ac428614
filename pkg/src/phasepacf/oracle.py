"""Independent references: Durbin-Levinson from autocovariances, and literal nested sums.

``levinson`` sees only gamma(n), never the MA/AR/phase sequences, so a
defect in the series pipeline cannot cancel against it.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .phase import BetaTable
from .verblunsky import PredictorTable


class LevinsonResult(NamedTuple):
    alpha: np.ndarray  # alpha[n] for 1 <= n <= n_max; alpha[0] is unused (nan)
    phi: PredictorTable
    v: np.ndarray  # v[n] = one-step prediction error variance from n observations


def levinson(gamma, n_max: int) -> LevinsonResult:
    """Durbin-Levinson recursion for the PACF and the predictor coefficients."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.size < n_max + 1:
        raise ValueError(f"need gamma(0..{n_max}); got {gamma.size} values")
    if not gamma[0] > 0:
        raise ValueError("gamma not positive definite at step 0")
    alpha = np.full(n_max + 1, np.nan)
    phi = np.zeros((n_max + 1, n_max + 1))
    v = np.zeros(n_max + 1)
    v[0] = gamma[0]
    row = np.zeros(0)
    for n in range(n_max):
        # alpha(n+1) from the order-n predictor
        num = gamma[n + 1] - np.dot(row, gamma[n:0:-1])
        a = num / v[n]
        row = np.concatenate((row - a * row[::-1], [a]))
        v[n + 1] = v[n] * (1.0 - a * a)
        if not v[n + 1] > 0:
            raise ValueError(f"gamma not positive definite at step {n + 1}")
        alpha[n + 1] = a
        phi[n + 1, 1: n + 2] = row
    return LevinsonResult(alpha, PredictorTable(n_max, phi, np.ones(n_max + 1, dtype=bool)), v)


def _nested_sum(factors: list[np.ndarray]) -> float:
    """Contract a chain vector, matrix, ..., matrix, vector over shared indices."""
    letters = "abcdefghijklmnop"
    if len(factors) == 1:
        return float(np.sum(factors[0]))
    subs = [letters[0]]
    for i in range(1, len(factors) - 1):
        subs.append(letters[i - 1] + letters[i])
    subs.append(letters[len(factors) - 2])
    return float(np.einsum(",".join(subs) + "->", *factors, optimize="greedy"))


def _check_len(table: BetaTable, upto: int) -> None:
    if upto > len(table):
        raise ValueError(f"beta table has {len(table)} entries; brute-force sum needs {upto}")


def brute_alpha_term(table: BetaTable, n: int, k: int, V: int) -> float:
    """alpha_k(n) as the literal (k-1)-fold sum, every index truncated at V.

    alpha_k(n) = sum beta_{n+v1} beta_{n+1+v1+v2} ... beta_{n+1+v_{k-2}+v_{k-1}} beta_{n+1+v_{k-1}}.
    """
    if k < 1 or k % 2 == 0 or k > 5:
        raise ValueError("brute_alpha_term supports k = 1, 3, 5")
    if V > 4000:
        raise ValueError("V must be <= 4000")
    b = table.beta
    if k == 1:
        return float(b[n])
    _check_len(table, n + 2 * V)
    idx = np.arange(V)
    first = b[n + idx]
    middle = b[n + 1 + idx[:, None] + idx[None, :]]
    last = b[n + 1 + idx]
    return _nested_sum([first] + [middle] * (k - 2) + [last])


def brute_dk(table: BetaTable, n: int, j: int, k: int, V: int) -> float:
    """d_k(n, j) as the literal nested sum, every index truncated at V.

    d_k(n, j) = sum beta_{n+j+v_{k-1}} beta_{n+v_{k-1}+v_{k-2}} ... beta_{n+v_2+v_1} beta_{n+v_1}.
    """
    if k < 0 or k > 4:
        raise ValueError("brute_dk supports 0 <= k <= 4")
    if k >= 3 and V > 4000:
        raise ValueError("V must be <= 4000")  # a V x V factor appears from k = 3 on
    b = table.beta
    if k == 0:
        return float(j == 0)
    if k == 1:
        return float(b[n + j])
    _check_len(table, n + j + 2 * V)
    idx = np.arange(V)
    first = b[n + j + idx]
    middle = b[n + idx[:, None] + idx[None, :]]
    last = b[n + idx]
    return _nested_sum([first] + [middle] * (k - 2) + [last])
