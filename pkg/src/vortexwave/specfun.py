"""Bessel and Hankel functions of real order nu >= 0 at real argument x > 0.

The regular regime is delegated to the AMOS routines wrapped by
``scipy.special``.  Where ``J_nu`` underflows or ``Y_nu`` overflows (nu much
larger than x) the functions are carried in log-magnitude form, using the
Debye large-order expansion, so that the quotient ``J/H^(1)`` and Hankel
quotients at two arguments stay finite.

All functions broadcast over array inputs and return Python scalars for
scalar inputs.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln, jv, yv

from vortexwave.errors import DomainError

__all__ = [
    "bessel_j",
    "bessel_y",
    "hankel1",
    "jh_ratio",
    "scaled_jy",
    "log_jy_large_order",
    "wronskian_residual",
]

# |J| below / |Y| above these marks is treated in log form.
_TINY = 1e-280
_HUGE = 1e280

# Debye polynomials u_k(t), coefficients in ascending powers of t.
_DEBYE_U = (
    np.array([1.0]),
    np.array([0.0, 3.0, 0.0, -5.0]) / 24.0,
    np.array([0.0, 0.0, 81.0, 0.0, -462.0, 0.0, 385.0]) / 1152.0,
    np.array([0.0, 0.0, 0.0, 30375.0, 0.0, -369603.0, 0.0, 765765.0, 0.0, -425425.0])
    / 414720.0,
    np.array(
        [0.0, 0.0, 0.0, 0.0, 4465125.0, 0.0, -94121676.0, 0.0, 349922430.0, 0.0,
         -446185740.0, 0.0, 185910725.0]
    )
    / 39813120.0,
)


def _as_arrays(nu, x, *, allow_zero):
    nu_a = np.asarray(nu, dtype=float)
    x_a = np.asarray(x, dtype=float)
    if not (np.all(np.isfinite(nu_a)) and np.all(np.isfinite(x_a))):
        raise DomainError("order and argument must be finite")
    if np.any(nu_a < 0):
        raise DomainError("order must be nonnegative")
    if allow_zero:
        if np.any(x_a < 0):
            raise DomainError("argument must be nonnegative")
    elif np.any(x_a <= 0):
        raise DomainError("argument must be positive")
    # scipy's yv returns 0 for subnormal orders; Y is smooth in nu, so flush them
    nu_a = np.where(nu_a < np.finfo(float).tiny, 0.0, nu_a)
    return nu_a, x_a


def _unwrap(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for nu >= 0, x >= 0."""
    nu_a, x_a = _as_arrays(nu, x, allow_zero=True)
    return _unwrap(jv(nu_a, x_a))


def bessel_y(nu, x):
    """Bessel function of the second kind ``Y_nu(x)`` for nu >= 0, x > 0.

    Returns ``-inf`` where the value exceeds the double range.
    """
    nu_a, x_a = _as_arrays(nu, x, allow_zero=False)
    return _unwrap(yv(nu_a, x_a))


def hankel1(nu, x):
    """First-kind Hankel function ``H^(1)_nu(x) = J_nu(x) + i Y_nu(x)``."""
    nu_a, x_a = _as_arrays(nu, x, allow_zero=False)
    return _unwrap(jv(nu_a, x_a) + 1j * yv(nu_a, x_a))


def log_jy_large_order(nu, x):
    """Return ``(log J_nu(x), log |Y_nu(x)|)`` for nu > x.

    Uses the Debye expansion through u_4 for nu >= 20 and the leading
    small-argument power terms below that.  Intended for the regime where the
    plain values leave the double range, i.e. nu far above x.
    """
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    nu, x = np.broadcast_arrays(nu, x)
    log_j = np.empty(nu.shape)
    log_y = np.empty(nu.shape)

    big = nu >= 20.0
    if np.any(big):
        n = nu[big]
        z = x[big]
        root = np.sqrt((n - z) * (n + z))  # nu * tanh(alpha)
        t = n / root  # coth(alpha)
        eta = root - n * np.log((n + root) / z)  # nu * (tanh(alpha) - alpha)
        s_j = np.zeros_like(n)
        s_y = np.zeros_like(n)
        for k, coeffs in enumerate(_DEBYE_U):
            term = np.polynomial.polynomial.polyval(t, coeffs) / n**k
            s_j += term
            s_y += (-1) ** k * term
        log_j[big] = eta - 0.5 * np.log(2.0 * np.pi * root) + np.log(s_j)
        log_y[big] = -eta - 0.5 * np.log(0.5 * np.pi * root) + np.log(s_y)

    small = ~big
    if np.any(small):
        n = nu[small]
        h = 0.5 * x[small]
        log_j[small] = n * np.log(h) - gammaln(n + 1.0) + np.log1p(-h * h / (n + 1.0))
        # leading term only; reached solely for absurdly small x
        log_y[small] = gammaln(np.maximum(n, 1e-300)) - n * np.log(h) - np.log(np.pi)
    return log_j, log_y


def scaled_jy(nu, x):
    """Common-scale representation ``J = j e^L``, ``Y = y e^L``.

    ``max(|j|, |y|) == 1`` in the regular regime.  In the large-order regime
    ``y == -1`` and ``j = J/|Y|`` may underflow to zero, which is harmless for
    every quotient built from it.
    """
    nu_a, x_a = _as_arrays(nu, x, allow_zero=False)
    nu_a, x_a = np.broadcast_arrays(nu_a, x_a)
    shape = nu_a.shape
    nu_a = nu_a.ravel()
    x_a = x_a.ravel()
    J = jv(nu_a, x_a)
    Y = yv(nu_a, x_a)
    with np.errstate(over="ignore", invalid="ignore"):
        deep = (~np.isfinite(Y)) | (np.abs(Y) > _HUGE) | (np.abs(J) < _TINY)
    deep &= nu_a > x_a
    with np.errstate(divide="ignore", invalid="ignore"):
        m = np.maximum(np.abs(J), np.abs(Y))
        m = np.where(deep | (m == 0), 1.0, m)
        L = np.log(m)
        j = np.where(deep, 0.0, J / m)
        y = np.where(deep, -1.0, Y / m)
    if np.any(deep):
        lj, ly = log_jy_large_order(nu_a[deep], x_a[deep])
        L[deep] = ly
        j[deep] = np.exp(lj - ly)
    return L.reshape(shape), j.reshape(shape), y.reshape(shape)


def jh_ratio(nu, x):
    """Quotient ``J_nu(x) / H^(1)_nu(x)`` without over- or underflow.

    Satisfies ``|ratio|**2 == Re(ratio)`` (so ``|ratio| <= 1``) and decays
    monotonically to zero once nu exceeds x.
    """
    _, j, y = scaled_jy(nu, x)
    return _unwrap(j / (j + 1j * y))


def wronskian_residual(nu, x):
    """``J Y' - J' Y - 2/(pi x)`` with derivatives from the order recurrences."""
    nu_a, x_a = _as_arrays(nu, x, allow_zero=False)
    nu_a, x_a = np.broadcast_arrays(nu_a, x_a)
    J = jv(nu_a, x_a)
    Y = yv(nu_a, x_a)
    # C' = C_{nu-1} - (nu/x) C for nu >= 1, C' = (nu/x) C - C_{nu+1} otherwise
    low = nu_a < 1.0
    step = np.where(low, nu_a + 1.0, nu_a - 1.0)
    Js = jv(step, x_a)
    Ys = yv(step, x_a)
    Jp = np.where(low, nu_a / x_a * J - Js, Js - nu_a / x_a * J)
    Yp = np.where(low, nu_a / x_a * Y - Ys, Ys - nu_a / x_a * Y)
    return _unwrap(J * Yp - Jp * Y - 2.0 / (np.pi * x_a))
