"""Reference partial-wave sums.

``zero_radius_abel`` sums the distributionally convergent sine series
-sqrt(i/(2 pi k)) sum_n e^{in(phi-pi)} sin(alpha_n pi) with Abel weights
r^|n - n0| and removes the O(1 - r) bias by Richardson extrapolation.

``tube_amplitude_mp`` sums the flux-free flat-space amplitude
-sqrt(2/(pi i k)) sum_n e^{in phi} J_|n|/H_|n| term by term in mpmath.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

try:
    from oracle.bessel_mp import besselj_series, bessely_connection
except ImportError:
    from bessel_mp import besselj_series, bessely_connection


def _abel(k, phi, eta, nu, r):
    s = 1.0 / (1.0 - eta)
    n0 = math.floor(nu)
    nterms = int(40.0 / (1.0 - r))
    d = np.arange(nterms, dtype=float)
    w = np.exp(d * math.log(r))
    total = 0j
    for n in (n0 + 1 + d, n0 - d):
        alpha = np.abs(n - nu) * s
        # chunked to keep memory flat
        for a in range(0, n.size, 1 << 20):
            sl = slice(a, a + (1 << 20))
            total += np.sum(w[sl] * np.exp(1j * n[sl] * (phi - math.pi)) * np.sin(alpha[sl] * math.pi))
    return -np.sqrt(1j / (2 * math.pi * k)) * total


def zero_radius_abel(k, phi, eta, nu, h=2e-5):
    """Abel-regularised value, extrapolated to r -> 1."""
    f1 = _abel(k, phi, eta, nu, 1.0 - h)
    f2 = _abel(k, phi, eta, nu, 1.0 - 2.0 * h)
    return 2.0 * f1 - f2


def tube_amplitude_mp(krc, phi, k=None, nmax=200, dps=60):
    """Direct high-precision sum of the flat-space tube amplitude (r_c = krc / k)."""
    k = krc if k is None else k
    with mp.workdps(dps):
        total = mp.mpc(0)
        for n in range(-nmax, nmax + 1):
            m = abs(n)
            J = besselj_series(m, krc, dps=dps + 340)
            Y = bessely_connection(m, krc, dps=dps + 340)
            total += mp.expjpi(n * mp.mpf(phi) / mp.pi) * J / (J + 1j * Y)
        pref = -mp.sqrt(2 / (mp.pi * 1j * mp.mpf(k)))
        return complex(pref * total)
