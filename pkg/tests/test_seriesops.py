import numpy as np
import pytest
from scipy import special

from phasepacf.seriesops import (compensated_sum, correlate_tail, decaying_series, gamma_ratio,
                                 gamma_ratio_seq, log_panel_rule, rational_series)


def test_gamma_ratio_seq_examples():
    np.testing.assert_allclose(gamma_ratio_seq(1.0, lambda n: (n + 0.4) / (n + 1), 3), [1, 0.4, 0.28], rtol=1e-15)
    np.testing.assert_allclose(gamma_ratio_seq(-1.0, lambda n: (n - 0.4) / (n + 1), 2), [-1, 0.4], rtol=1e-15)
    assert list(gamma_ratio_seq(5.0, lambda n: 1.0, 4)) == [5, 5, 5, 5]


def test_gamma_ratio_seq_scalar_callable():
    out = gamma_ratio_seq(1.0, lambda n: 2.0 if n % 2 else 0.5, 4)
    assert list(out) == [1.0, 0.5, 1.0, 0.5]


def test_gamma_ratio_seq_overflow_names_index():
    with pytest.raises(OverflowError, match="overflow in recurrence at index 3"):
        gamma_ratio_seq(1e300, lambda n: np.where(n == 2, 1e10, 1.0), 5)


def test_gamma_ratio_seq_recurrence_is_exact():
    s = gamma_ratio_seq(1.0, lambda n: (n + 0.3) / (n + 1.0), 500)
    for n in range(499):
        assert s[n + 1] == s[n] * ((n + 0.3) / (n + 1.0))


def test_rational_series_examples():
    assert list(rational_series([1], [1, -0.5], 4)) == [1, 0.5, 0.25, 0.125]
    assert list(rational_series([1, 0.4], [1], 3)) == [1, 0.4, 0]
    r = rational_series([1], [1, -0.5], 4)
    np.testing.assert_allclose(np.convolve(r, [1, -0.5])[:4], [1, 0, 0, 0], atol=0)


def test_rational_series_bad_denominator():
    with pytest.raises(ZeroDivisionError, match="non-invertible constant term"):
        rational_series([1], [0, 1], 3)


def test_decaying_series_cuts_geometric_tail():
    r = decaying_series([1], [1, -0.5], tol=1e-12)
    assert r.size == 40  # 0.5^39 > 1e-12 > 0.5^40
    with pytest.raises(ValueError, match="too close to the unit circle"):
        decaying_series([1], [1, -0.999999], max_len=1024)


def test_correlate_tail_examples():
    assert list(correlate_tail([0, 1, 2, 3, 4], [1, 1], 1, 2)) == [3, 5]
    b = np.arange(10.0)
    np.testing.assert_array_equal(correlate_tail(b, [1, 0, 0], 2, 4, mode="naive"), b[2:6])


def test_correlate_tail_length_error():
    with pytest.raises(ValueError, match="needs at least 6"):
        correlate_tail(np.ones(5), np.ones(2), 1, 4)


@pytest.mark.parametrize("mode", ["naive", "fft"])
def test_correlate_tail_random_4096(mode):
    rng = np.random.default_rng(1)
    b = rng.standard_normal(8194)
    x = rng.standard_normal(4096)
    ref = np.array([np.dot(b[3 + j: 3 + j + 4096], x) for j in range(4096)])
    y = correlate_tail(b, x, 3, 4096, mode=mode)
    assert np.max(np.abs(y - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_correlate_tail_unknown_mode():
    with pytest.raises(ValueError, match="unknown mode"):
        correlate_tail(np.ones(4), np.ones(2), 0, 2, mode="magic")


def test_compensated_sum_long_input():
    vals = np.concatenate(([1.0], np.full(20000, 1e-17)))
    assert compensated_sum(vals) == 1.0 + 2e-13
    assert compensated_sum([1.0, 2.0]) == 3.0


@pytest.mark.parametrize("y", [0.05, 0.5, 3.0, 9.7, 10.3, 24.9, 30.0, 1e3, 1e8, 1e15])
def test_gamma_ratio_accuracy(y):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    for a, b in ((-0.3, 1.0), (0.25, 1.0), (-0.45, 0.0), (0.45, 1.0)):
        ref = mpmath.gamma(mpmath.mpf(y) + a) / mpmath.gamma(mpmath.mpf(y) + b)
        got = gamma_ratio(y, a, b)
        assert abs(float((got - ref) / ref)) <= 1e-14


def test_gamma_ratio_vectorized_shape():
    y = np.array([[1.0, 40.0], [2.0, 1e6]])
    out = gamma_ratio(y, -0.2, 1.0)
    assert out.shape == y.shape
    assert out[0, 0] == pytest.approx(special.gamma(0.8), rel=1e-14)


def test_log_panel_rule_integrates_power_law():
    u, w = log_panel_rule(100.5)
    for p in (1.5, 2.0, 3.0):
        exact = 100.5 ** (1 - p) / (p - 1)
        assert np.dot(w, u ** -p) == pytest.approx(exact, rel=1e-12)
    # cut at start * e^80: a u^-1.1 tail loses e^-8 of its mass
    lost = np.exp(-8.0)
    assert np.dot(w, u ** -1.1) == pytest.approx(100.5 ** -0.1 / 0.1 * (1 - lost), rel=1e-10)
    assert u.min() > 100.5 and w.min() > 0
