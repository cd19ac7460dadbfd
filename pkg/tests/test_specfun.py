import csv
import math
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest
from scipy.special import jv, yv

from oracle.bessel_mp import besselj_series, bessely_connection, jy
from vortexwave import DomainError
from vortexwave.specfun import (
    bessel_j,
    bessel_y,
    hankel1,
    jh_ratio,
    log_jy_large_order,
    scaled_jy,
    wronskian_residual,
)

GOLDEN = Path(__file__).parent / "oracle" / "golden_bessel.csv"


def _golden():
    with GOLDEN.open() as fh:
        rows = list(csv.DictReader(fh))
    return [(float(r["nu"]), float(r["x"]), float(r["J"]), float(r["Y"])) for r in rows]


def _scale(nu, x, fn):
    """max(|C|, x |C'|): error scale that stays meaningful near zeros."""
    c = fn(nu, x)
    d = fn(nu - 1, x) - nu / x * c if nu >= 1 else nu / x * c - fn(nu + 1, x)
    return max(abs(c), x * abs(d))


def test_j0_at_origin():
    assert bessel_j(0, 0) == 1.0


def test_half_order_closed_forms():
    x = math.pi / 2
    assert bessel_j(0.5, x) == pytest.approx(2 / math.pi, rel=1e-14)
    assert abs(bessel_y(0.5, x)) < 1e-15
    h = hankel1(0.5, x)
    assert h.real == pytest.approx(2 / math.pi, rel=1e-14)
    assert abs(h.imag) < 1e-15


def test_against_series_oracle_spot_values():
    for nu, x in [(7.3, 2.0), (3.7, 10.0), (0.3, 2.0)]:
        J, Y, _, _ = jy(nu, x)
        assert bessel_j(nu, x) == pytest.approx(float(J), rel=1e-13)
        assert bessel_y(nu, x) == pytest.approx(float(Y), rel=1e-13)


def test_hankel_imag_is_y():
    nu = np.array([0.0, 0.7, 3.3, 40.0])
    x = np.array([0.2, 5.0, 12.0, 35.0])
    assert np.array_equal(np.imag(hankel1(nu, x)), bessel_y(nu, x))


def test_hankel_large_order_magnitude():
    Y = float(bessely_connection(20, 5))
    assert abs(hankel1(20, 5)) == pytest.approx(abs(Y), rel=1e-13)


def test_wronskian_at_spec_point():
    assert abs(wronskian_residual(0.3, 2.0)) < 1e-15


@pytest.mark.parametrize("row", _golden()[:: 7])
def test_golden_rows(row):
    nu, x, J, Y = row
    assert abs(bessel_j(nu, x) - J) <= 1e-12 * _scale(nu, x, jv)
    assert abs(bessel_y(nu, x) - Y) <= 1e-12 * _scale(nu, x, yv)


def test_golden_matches_live_oracle():
    # guards against a stale golden file
    for nu, x, J, Y in _golden()[:5]:
        assert float(besselj_series(nu, x)) == pytest.approx(J, rel=1e-15, abs=1e-300)
        assert float(bessely_connection(nu, x)) == pytest.approx(Y, rel=1e-15)


def test_recurrence_consistency():
    nu = np.linspace(1.0, 30.0, 30)
    x = np.full_like(nu, 40.0)
    for fn in (bessel_j, bessel_y):
        lhs = fn(nu + 1, x)
        rhs = 2 * nu / x * fn(nu, x) - fn(nu - 1, x)
        scale = np.abs(2 * nu / x * fn(nu, x)) + np.abs(fn(nu - 1, x))
        assert np.all(np.abs(lhs - rhs) <= 1e-10 * scale)


def test_ratio_examples():
    assert abs(jh_ratio(200, 10)) < 1e-100
    r = jh_ratio(0.5, math.pi / 2)
    assert r == pytest.approx(1.0 + 0j, abs=1e-15)
    r0 = jh_ratio(0.0, 500.0)
    assert abs(r0) <= 1.0


@pytest.mark.parametrize("nu,x", [(60.0, 10.0), (150.0, 3.0), (45.5, 40.0)])
def test_ratio_deep_regime_oracle(nu, x):
    J = besselj_series(nu, x)
    Y = bessely_connection(nu, x)
    expected = complex(J / mp.mpc(J, Y))
    assert jh_ratio(nu, x) == pytest.approx(expected, rel=1e-12)


def test_ratio_decay_threshold():
    for x in (0.3, 3.0, 30.0, 300.0, 3000.0):
        cut = x + 10 * x ** (1 / 3) + 10
        assert abs(jh_ratio(cut, x)) < 1e-8
        orders = np.linspace(x + 1, cut + 50, 200)
        mags = np.abs(jh_ratio(orders, x))
        assert np.all(np.diff(mags) <= 0)


def test_ratio_never_nan_deep_regime():
    nu = np.array([500.0, 5000.0, 10000.0])
    r = jh_ratio(nu, 1e-3)
    assert np.all(np.isfinite(r)) and np.all(np.abs(r) < 1e-300)


def test_unitarity_of_ratio():
    nu = np.linspace(0, 120, 241)
    r = jh_ratio(nu, 60.0)
    assert np.all(np.abs(np.abs(r) ** 2 - r.real) < 1e-14)


@pytest.mark.parametrize("nu,x,tol", [
    (60.0, 1e-4, 1e-11),
    (300.0, 50.0, 1e-11),
    (25.0, 2.0, 1e-9),
    (1000.0, 900.0, 1e-8),  # near the transition the series through u_4 is weakest
])
def test_debye_logs_against_oracle(nu, x, tol):
    lj, ly = log_jy_large_order(nu, x)
    J = besselj_series(nu, x, dps=1200)
    Y = bessely_connection(nu, x, dps=1200)
    assert abs(float(lj - mp.log(J))) < tol
    assert abs(float(ly - mp.log(-Y))) < tol


def test_scaled_representation_consistent():
    nu = np.array([0.0, 2.5, 30.0, 80.0])
    x = np.array([1.0, 7.0, 31.0, 120.0])
    L, j, y = scaled_jy(nu, x)
    assert np.allclose(j * np.exp(L), jv(nu, x), rtol=1e-14, atol=0)
    assert np.allclose(y * np.exp(L), yv(nu, x), rtol=1e-14, atol=0)


@pytest.mark.parametrize("nu,x", [(-1.0, 1.0), (1.0, math.inf), (math.nan, 1.0)])
def test_domain_errors(nu, x):
    with pytest.raises(DomainError):
        bessel_j(nu, x)


def test_y_rejects_origin():
    with pytest.raises(DomainError):
        bessel_y(0.5, 0.0)
    with pytest.raises(DomainError):
        hankel1(0.5, -1.0)


def test_subnormal_order():
    tiny = 2.225073858507e-311
    assert bessel_y(tiny, 1.0) == bessel_y(0.0, 1.0)
    assert abs(wronskian_residual(tiny, 1.0)) < 1e-15


@pytest.mark.parametrize("nu,x", [(0.0, 1.0), (2.0, 150.0), (37.25, 3.5), (99.5, 180.0)])
def test_oracle_agrees_with_mpmath(nu, x):
    with mp.workdps(40):
        assert abs(besselj_series(nu, x) / mp.besselj(nu, x) - 1) < mp.mpf(10) ** -30
        assert abs(bessely_connection(nu, x) / mp.bessely(nu, x) - 1) < mp.mpf(10) ** -30
