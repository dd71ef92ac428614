import math

import numpy as np
import pytest
from scipy import special

from phasepacf.models import (ARFunction, ModelSpec, ar_coeffs, autocovariance, coeff_table,
                              fractional_autocovariance, fractional_ma, load_config, ma_coeffs,
                              parse_config, require_valid, resultant, schur_cohn, validate,
                              zeros_outside_unit_disk)
from phasepacf.oracle import levinson
from phasepacf.seriesops import compensated_sum

from .conftest import AR1, ARMA11


def test_ma_coeffs_examples():
    np.testing.assert_allclose(ma_coeffs(ModelSpec(d=0.4), 3), [1, 0.4, 0.28], rtol=1e-15)
    np.testing.assert_allclose(ma_coeffs(AR1, 6), 0.5 ** np.arange(6), rtol=1e-15)
    assert ma_coeffs(ModelSpec(phi=(0.5,), d=0.3), 2)[1] == pytest.approx(0.8, rel=1e-15)


def test_ar_coeffs_examples():
    np.testing.assert_allclose(ar_coeffs(ModelSpec(d=0.4), 3), [-1, 0.4, 0.12], rtol=1e-15)
    np.testing.assert_array_equal(ar_coeffs(AR1, 5), [-1, 0.5, 0, 0, 0])


@pytest.mark.parametrize("spec", [AR1, ARMA11, ModelSpec(d=0.3), ModelSpec(phi=(0.5,), theta=(0.4,), d=0.3),
                                  ModelSpec(phi=(0.3, -0.2), theta=(-0.5,), d=0.45)])
def test_convolution_identity(spec):
    ct = coeff_table(spec, 201)
    conv = np.convolve(ct.a, ct.c)[:201]
    conv[0] += 1.0
    assert np.max(np.abs(conv)) <= 1e-10
    assert ct.c[0] == 1.0 and ct.a[0] == -1.0


def test_autocovariance_ar1():
    g = autocovariance(AR1, 4)
    np.testing.assert_allclose(g, [4 / 3, 2 / 3, 1 / 3, 1 / 6], rtol=1e-14)


def test_autocovariance_farima_closed_form():
    g = autocovariance(ModelSpec(d=0.25), 3)
    assert g[0] == pytest.approx(special.gamma(0.5) / special.gamma(0.75) ** 2, rel=1e-14)
    assert g[1] / g[0] == pytest.approx(0.25 / 0.75, rel=1e-14)


def test_fractional_autocovariance_against_direct_sum():
    d, V = 0.25, 1 << 20
    c = fractional_ma(d, V + 32)
    direct = []
    for m in (0, 1, 5):
        s = compensated_sum(c[:V] * c[m: m + V])
        # c_v ~ v^(d-1)/Gamma(d): tail of c_v c_{v+m} integrated from V - 1/2
        tail = (V - 0.5) ** (2 * d - 1) / ((1 - 2 * d) * special.gamma(d) ** 2)
        direct.append(s + tail)
    ref = fractional_autocovariance(d, 6)[[0, 1, 5]]
    assert np.max(np.abs(np.array(direct) / ref - 1)) <= 1e-5


def test_arma_autocovariance_is_sum_of_products():
    ct = coeff_table(ARMA11, 200)
    direct = [np.dot(ct.c[: 200 - n], ct.c[n:]) for n in range(5)]
    np.testing.assert_allclose(autocovariance(ARMA11, 5), direct, rtol=1e-14)


def test_levinson_positive_definite_on_models():
    for spec in (ARMA11, ModelSpec(d=0.45), ModelSpec(phi=(0.9,), d=0.3)):
        v = levinson(autocovariance(spec, 9), 8).v
        assert np.all(v > 0) and np.all(np.diff(v) <= 0)


def test_validate_examples():
    assert validate(AR1).ok
    bad = validate(ModelSpec(phi=(2.0,)))
    assert not bad.ar_stable and not bad.ok
    shared = validate(ModelSpec(phi=(-0.4,), theta=(0.4,)))  # Phi = Theta = 1 + 0.4 z
    assert not shared.coprime and "share a zero" in shared.messages[0]
    assert not validate(ModelSpec(d=0.5)).d_in_range
    with pytest.raises(ValueError, match="invalid model"):
        require_valid(ModelSpec(theta=(1.0,)))


def test_schur_cohn_and_resultant():
    assert zeros_outside_unit_disk([1, -0.5])
    assert not zeros_outside_unit_disk([1, -2])
    assert not zeros_outside_unit_disk([1, 0, 1])  # zeros on the circle
    assert schur_cohn([1, -0.5])[0] == -0.5
    assert resultant([1, -0.5], [1, -0.5]) == pytest.approx(0.0, abs=1e-15)
    # Res(1 - z/2, 1 + z/3): product of p_lead^deg q * q(root of p)
    assert abs(resultant([1, -0.5], [1, 1 / 3])) == pytest.approx(0.5 * (1 + 2 / 3), rel=1e-14)


def test_parse_config(tmp_path):
    spec = parse_config("# model\nphi = 0.5, -0.2\ntheta: 0.4\nd = 0.3\n")
    assert spec == ModelSpec(phi=(0.5, -0.2), theta=(0.4,), d=0.3)
    assert parse_config("phi =\n") == ModelSpec()
    for bad in ("rho = 1", "phi = 1\nphi = 2", "nonsense"):
        with pytest.raises(ValueError):
            parse_config(bad)
    path = tmp_path / "m.cfg"
    path.write_text("d = 0.25\n")
    assert load_config(path).d == 0.25


def test_tail_exponents_and_labels():
    assert coeff_table(AR1, 4).tail_exponents == (-math.inf, -math.inf)
    assert coeff_table(ModelSpec(d=0.3), 4).tail_exponents == pytest.approx((-0.7, -1.3))
    assert ModelSpec(phi=(0.5,), d=0.3).label() == "FARIMA(1,0.3,0)"
    assert ARMA11.label() == "ARMA(1,1)"


def test_power_law_tails():
    spec = ModelSpec(phi=(0.5,), theta=(0.4,), d=0.3)
    ct = coeff_table(spec, (1 << 16) + 1, gamma_len=2)
    n = np.arange(1 << 12, (1 << 16) + 1)
    for x, e in ((ct.c, spec.d - 1), (ct.a, -1 - spec.d)):
        scaled = x[n] * n ** (-e)
        assert scaled.max() / scaled.min() - 1 < 0.01


def test_ar_function_matches_table():
    spec = ModelSpec(phi=(0.5,), theta=(0.4,), d=0.3)
    a = ar_coeffs(spec, 5000)
    f = ARFunction(spec)
    x = np.array([240, 1000, 4999])
    # the recurrence table carries ~n eps of rounding by index n
    np.testing.assert_allclose(f(x.astype(float)), a[x], rtol=1e-12)
    with pytest.raises(ValueError):
        f(np.array([1.0]))
    with pytest.raises(ValueError):
        ARFunction(ARMA11)
