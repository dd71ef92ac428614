"""Truncation settings shared by the phase-coefficient and Verblunsky engines."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class TruncationPolicy:
    """How infinite sums are cut and when series summation stops.

    V is the length of the exact integer block of every state vector; sums
    past it are carried to infinity by a log-graded quadrature rule when the
    model has long memory. ``inner_len`` is the number of summands taken
    exactly in each phase coefficient before tail correction. With
    ``far_field`` off every sum is plainly cut at V.
    """

    V: int = 512
    K_max: int = 200
    term_tol: float = 1e-10
    abs_floor: float = 1e-300
    inner_len: int | None = None
    tail_correction: bool | None = None
    error_check: bool = True
    far_field: bool = True
    panel_width: float = 2.0
    panel_nodes: int = 10
    t_max: float = 80.0

    def __post_init__(self):
        if self.V < 1 or self.K_max < 1:
            raise ValueError("V and K_max must be >= 1")
        if not (self.term_tol > 0 and self.abs_floor > 0):
            raise ValueError("term_tol and abs_floor must be positive")

    def inner_for(self, d: float) -> int:
        if self.inner_len is not None:
            return self.inner_len
        return 1 << 18 if d != 0.0 else 1 << 10

    def tail_for(self, d: float) -> bool:
        if self.tail_correction is not None:
            return self.tail_correction
        return d != 0.0

    def beta_len(self, n_max: int) -> int:
        """Number of phase coefficients the engines read for indices up to n_max."""
        return n_max + 2 * self.V + 2

    def coeff_len(self, n_max: int, d: float) -> int:
        """Length of c/a tables needed to build phase coefficients up to n_max."""
        return self.beta_len(n_max) + self.inner_for(d) + 1

    def doubled(self) -> "TruncationPolicy":
        return replace(self, V=2 * self.V)
