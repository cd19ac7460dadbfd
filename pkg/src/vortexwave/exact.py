"""Exact partial-wave amplitudes and wave functions for a hard magnetic vortex.

The amplitude of a vortex of radius r_c, flux ratio nu = Phi/Phi_0, in a cone
with deficit parameter eta is

    f(k, phi) = -c sqrt(2/(pi i k)) sum_n e^{in(phi - pi)}
                [ (i/2) sin(alpha_n pi) + e^{-i alpha_n pi} J/H1(alpha_n, k r_c) ]

with alpha_n = |n - nu| / (1 - eta) and c = exp(2ik(r_c - xi_c)).  The sine
("zero-radius") series only converges as a distribution, so it is always
taken in closed form; only the Bessel quotient part is summed term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from vortexwave.errors import (
    DomainError,
    KinematicsError,
    SingularityError,
    TruncationError,
)
from vortexwave.geometry import ConeGeometry, TubeSpec, reduce_angle
from vortexwave.specfun import scaled_jy

__all__ = [
    "VortexConfig",
    "WaveState",
    "TruncationPolicy",
    "PartialWaves",
    "AmplitudeResult",
    "IncidentWave",
    "PeakData",
    "OpticalCheck",
    "transverse_wavenumber",
    "alpha_order",
    "partial_waves",
    "amplitude_exact",
    "amplitude_zero_radius",
    "wavefunction_exact",
    "wavefunction_halfflux",
    "incident_wave",
    "branch_count",
    "smatrix_peak_data",
    "near_peak",
    "optical_theorem_exact",
    "sigma_total_exact",
]

_CHUNK = 256


@dataclass(frozen=True)
class VortexConfig:
    """Scatterer description.

    ``spin`` is ``None`` for a spinless particle or the spin projection
    +1 / -1 on the vortex axis for spin 1/2; the latter shifts the flux ratio
    by -/+ eta/2 (see ``effective_flux``).
    """

    geom: ConeGeometry = field(default_factory=ConeGeometry)
    tube: TubeSpec = field(default_factory=TubeSpec)
    flux_ratio: float = 0.0
    spin: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.flux_ratio):
            raise DomainError("flux_ratio must be finite")
        if self.spin not in (None, 1, -1):
            raise DomainError("spin must be None, +1 or -1")

    @property
    def eta(self) -> float:
        return self.geom.eta

    @property
    def r_c(self) -> float:
        return self.tube.r_c

    @property
    def effective_flux(self) -> float:
        if self.spin is None:
            return self.flux_ratio
        return self.flux_ratio - 0.5 * self.spin * self.geom.eta

    def with_flux(self, flux_ratio: float) -> "VortexConfig":
        return VortexConfig(self.geom, self.tube, flux_ratio, self.spin)


@dataclass(frozen=True)
class WaveState:
    """Transverse wavenumber k, optionally with the (m, E, k_z) it came from."""

    k: float
    m: float | None = None
    E: float | None = None
    k_z: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise KinematicsError("k must be positive")

    @classmethod
    def from_kinematics(cls, m, E, k_z=0.0, hbar=1.0) -> "WaveState":
        return cls(transverse_wavenumber(m, E, k_z, hbar), m, E, k_z)


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for the partial-wave sums.

    Terms are added in the symmetric window around the flux until the
    largest of the last ``block`` terms falls below ``tol`` times the running
    sum of magnitudes and the orders exceed the argument.  ``max_terms`` caps
    the window half-width (default 4 x max(1, 1 - eta) + 200 with x the
    largest Bessel argument); ``fixed_terms`` bypasses the tolerance test.
    """

    tol: float = 1e-15
    block: int = 20
    max_terms: int | None = None
    fixed_terms: int | None = None


class PartialWaves(NamedTuple):
    n: np.ndarray
    alpha: np.ndarray
    coeff: np.ndarray
    error: float


class AmplitudeResult(NamedTuple):
    value: complex | np.ndarray
    error: float
    terms: int
    near_peak: bool | np.ndarray


class IncidentWave(NamedTuple):
    value: complex | np.ndarray
    n_l: int | np.ndarray


class PeakData(NamedTuple):
    directions: tuple[float, float]
    phases: tuple[complex, complex]
    prefactor: complex


@dataclass(frozen=True)
class OpticalCheck:
    lhs: float
    sigma_quadrature: float
    sigma_unitarity: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.sigma_quadrature) / self.sigma_quadrature


def _kval(k) -> float:
    if isinstance(k, WaveState):
        return k.k
    k = float(k)
    if not (math.isfinite(k) and k > 0):
        raise KinematicsError("k must be positive")
    return k


def _unwrap(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def transverse_wavenumber(m: float, E: float, k_z: float = 0.0, hbar: float = 1.0) -> float:
    """Positive root of k^2 = 2 m E / hbar^2 - k_z^2."""
    radicand = 2.0 * m * E / hbar**2 - k_z**2
    if not radicand > 0:
        raise KinematicsError("2 m E / hbar^2 must exceed k_z^2")
    return math.sqrt(radicand)


def alpha_order(n, cfg: VortexConfig):
    """Bessel order |n - nu_eff| / (1 - eta) of partial wave n."""
    return np.abs(np.asarray(n) - cfg.effective_flux) * cfg.geom.stretch


def _global_phase(k: float, tube: TubeSpec) -> complex:
    return complex(np.exp(2j * k * (tube.r_c - tube.xi_c)))


def _prefactor(k: float) -> complex:
    # -sqrt(2 / (pi i k)) on the principal branch
    return -math.sqrt(2.0 / (math.pi * k)) * complex(np.exp(-0.25j * math.pi))


def _window(cfg: VortexConfig, size: int):
    """Partial-wave indices ordered N, N+1, N-1, N+2, N-2, ..., N+size+1."""
    N = math.floor(cfg.effective_flux)
    d = np.arange(1, size + 1)
    n = np.empty(2 * size + 2, dtype=np.int64)
    n[0] = N
    n[1:-1:2] = N + d
    n[2:-1:2] = N - d
    n[-1] = N + size + 1
    return n


def _truncate(mags_by_distance, alpha_by_distance, arg, trunc, cap, what):
    """Half-width of the summation window for distance-ordered magnitudes."""
    if trunc.fixed_terms is not None:
        m = int(trunc.fixed_terms)
        return m, float(np.sum(mags_by_distance[m + 1:]))
    total = np.cumsum(mags_by_distance)
    big = (mags_by_distance > trunc.tol * total) | (alpha_by_distance <= arg)
    last = int(np.nonzero(big)[0].max()) if np.any(big) else 0
    m = last + trunc.block
    if m > cap:
        raise TruncationError(
            f"{what}: tolerance {trunc.tol:g} not reached within {cap} terms per side",
            partial=m,
        )
    return m, float(np.sum(mags_by_distance[m + 1:]))


def _distance_view(values, size):
    """Max magnitude over the two partners at each distance from the centre."""
    mags = np.abs(values)
    out = np.empty(size + 1)
    out[0] = max(mags[0], mags[1])
    out[1:] = np.maximum(mags[2:-1:2], mags[3::2])
    return out


def _distance_min(values, size):
    """Smaller of the two partner values at each distance from the centre."""
    out = np.empty(size + 1)
    out[0] = min(values[0], values[1])
    out[1:] = np.minimum(values[2:-1:2], values[3::2])
    return out


def partial_waves(k, cfg: VortexConfig, trunc: TruncationPolicy | None = None) -> PartialWaves:
    """Truncated Bessel-quotient coefficients e^{-i alpha_n pi} J/H1(alpha_n, k r_c)."""
    trunc = trunc or TruncationPolicy()
    k = _kval(k)
    x = k * cfg.r_c
    cap = trunc.max_terms or int(4 * x * max(1.0, 1.0 - cfg.eta)) + 200
    size = cap if trunc.fixed_terms is None else int(trunc.fixed_terms)
    n = _window(cfg, size + 1)
    alpha = alpha_order(n, cfg)
    _, j, y = scaled_jy(alpha, x)
    coeff = np.exp(-1j * np.pi * alpha) * (j / (j + 1j * y))
    mags = _distance_view(coeff, size + 1)
    amin = _distance_min(alpha, size + 1)
    m, tail = _truncate(mags, amin, x, trunc, size, "scattering amplitude")
    keep = 2 * m + 2
    return PartialWaves(n[:keep], alpha[:keep], coeff[:keep], tail)


def _zero_radius_vanishes(cfg: VortexConfig) -> bool:
    s = cfg.geom.stretch
    sn = s * cfg.effective_flux
    return abs(s - round(s)) < 1e-12 and abs(sn - round(sn)) < 1e-12


def near_peak(phi, k, cfg: VortexConfig):
    """True where phi lies within 2 / (k r_c (1 - eta)) of a diffraction peak."""
    k = _kval(k)
    width = 2.0 / (k * cfg.r_c * (1.0 - cfg.eta))
    pe = cfg.geom.phi_eta
    d1 = np.abs(reduce_angle(np.asarray(phi) + pe))
    d2 = np.abs(reduce_angle(np.asarray(phi) - pe))
    return _unwrap(np.minimum(d1, d2) < width)


def amplitude_zero_radius(k, phi, cfg: VortexConfig):
    """Closed-form sum of the sine series (vortex of zero transverse size).

    Diverges in the two peak directions phi = -/+ phi_eta.
    """
    k = _kval(k)
    phi = np.asarray(phi, dtype=float)
    if _zero_radius_vanishes(cfg):
        return _unwrap(np.zeros(phi.shape, dtype=complex))
    nu = cfg.effective_flux
    N = math.floor(nu)
    pe = cfg.geom.phi_eta
    theta = math.pi - pe
    sp = np.sin(0.5 * (phi + pe))
    sm = np.sin(0.5 * (phi - pe))
    if np.any(np.abs(sp) < 1e-14) or np.any(np.abs(sm) < 1e-14):
        raise SingularityError("zero-radius amplitude diverges at phi = -/+ phi_eta")
    cot_p = np.cos(0.5 * (phi + pe)) / sp
    cot_m = np.cos(0.5 * (phi - pe)) / sm
    c = 0.5 * np.sqrt(1j / (2.0 * math.pi * k))
    value = c * (
        np.exp(1j * nu * theta + 1j * N * (phi + pe)) * (cot_p + 1j)
        - np.exp(-1j * nu * theta + 1j * N * (phi - pe)) * (cot_m + 1j)
    )
    return _unwrap(value)


def _fourier_sum(phi, n, coeff):
    """sum_n e^{i n (phi - pi)} coeff_n over a flat array of angles."""
    out = np.empty(phi.size, dtype=complex)
    flat = phi.ravel()
    for start in range(0, flat.size, _CHUNK):
        block = flat[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(1j * np.outer(block - np.pi, n)) @ coeff
    return out.reshape(phi.shape)


def amplitude_exact(
    k, phi, cfg: VortexConfig, trunc: TruncationPolicy | None = None, part: str = "full"
) -> AmplitudeResult:
    """Exact scattering amplitude, in units of sqrt(length).

    ``part`` is ``"full"``, ``"ratio"`` (Bessel-quotient series only, finite
    everywhere) or ``"zero_radius"`` (closed-form sine series only).
    """
    if part not in ("full", "ratio", "zero_radius"):
        raise ValueError(f"unknown amplitude part {part!r}")
    k = _kval(k)
    phi_a = np.asarray(phi, dtype=float)
    flags = near_peak(phi_a, k, cfg)
    value = np.zeros(phi_a.shape, dtype=complex)
    error, terms = 0.0, 0
    if part in ("full", "ratio"):
        pw = partial_waves(k, cfg, trunc)
        scale = _prefactor(k) * _global_phase(k, cfg.tube)
        value = value + scale * _fourier_sum(phi_a, pw.n, pw.coeff)
        error = abs(scale) * pw.error
        terms = pw.n.size
    if part in ("full", "zero_radius"):
        value = value + _global_phase(k, cfg.tube) * np.asarray(amplitude_zero_radius(k, phi_a, cfg))
    return AmplitudeResult(_unwrap(value), error, terms, flags)


def _radial_coefficients(kr, krc, alpha):
    """J_a(kr) - J_a(krc)/H1_a(krc) H1_a(kr) without overflow.

    Written as i [J(kr) Y(krc) - J(krc) Y(kr)] / H1(krc) on a common scale.
    """
    L1, j1, y1 = scaled_jy(alpha, kr)
    _, j2, y2 = scaled_jy(alpha, krc)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.sign(j1) * np.exp(L1 + np.log(np.abs(j1)))
        b = np.sign(j2) * np.exp(L1 + np.log(np.abs(j2)))
    a = np.where(j1 == 0, 0.0, a)
    b = np.where(j2 == 0, 0.0, b)
    return 1j * (a * y2 - b * y1) / (j2 + 1j * y2)


def _check_radius(r, cfg):
    r = float(r)
    if not r >= cfg.r_c:
        raise DomainError("wave function is defined only outside the tube, r >= r_c")
    return r


def wavefunction_exact(
    r: float, phi, k, cfg: VortexConfig, trunc: TruncationPolicy | None = None
):
    """Full scattering wave function at distance r >= r_c (dimensionless, incident ~ 1)."""
    trunc = trunc or TruncationPolicy()
    k = _kval(k)
    r = _check_radius(r, cfg)
    kr, krc = k * r, k * cfg.r_c
    cap = trunc.max_terms or int(4 * kr * max(1.0, 1.0 - cfg.eta)) + 200
    size = cap if trunc.fixed_terms is None else int(trunc.fixed_terms)
    n = _window(cfg, size + 1)
    alpha = alpha_order(n, cfg)
    coeff = np.exp(-0.5j * np.pi * alpha) * _radial_coefficients(kr, krc, alpha)
    mags = _distance_view(coeff, size + 1)
    amin = _distance_min(alpha, size + 1)
    m, _ = _truncate(mags, amin, kr, trunc, size, "wave function")
    keep = 2 * m + 2
    tube = cfg.tube
    pref = np.exp(1j * k * (tube.r_c - tube.xi_c)) * math.sqrt(r / (r - tube.r_c + tube.xi_c))
    phi_a = np.asarray(phi, dtype=float)
    return _unwrap(pref * _fourier_sum(phi_a, n[:keep], coeff[:keep]))


def wavefunction_halfflux(
    r: float, phi, k, cfg: VortexConfig, trunc: TruncationPolicy | None = None
):
    """Wave function at half-odd-integer flux as a sine series in (n' - 1/2) phi.

    Every term is odd in phi, so the value at phi = 0 is exactly zero.
    """
    trunc = trunc or TruncationPolicy()
    nu = cfg.effective_flux
    N = nu - 0.5
    if abs(N - round(N)) > 1e-12:
        raise DomainError("flux ratio must be a half-odd integer")
    N = round(N)
    k = _kval(k)
    r = _check_radius(r, cfg)
    kr, krc = k * r, k * cfg.r_c
    s = cfg.geom.stretch
    cap = trunc.max_terms or int(4 * kr * max(1.0, 1.0 - cfg.eta)) + 200
    size = cap if trunc.fixed_terms is None else int(trunc.fixed_terms)
    half = np.arange(1, size + 2) - 0.5  # n' - 1/2
    beta = half * s
    sign = np.where(np.arange(1, size + 2) % 2 == 0, 1.0, -1.0)  # e^{i n' pi}
    coeff = sign * np.exp(-0.5j * np.pi * beta) * _radial_coefficients(kr, krc, beta)
    mags = np.abs(coeff)
    m, _ = _truncate(mags, beta, kr, trunc, size, "half-flux wave function")
    half, coeff = half[: m + 1], coeff[: m + 1]
    tube = cfg.tube
    phi_a = np.asarray(phi, dtype=float)
    pref = (
        2j
        * np.exp(1j * k * (tube.r_c - tube.xi_c) + 0.5j * phi_a + 1j * N * (phi_a - np.pi))
        * math.sqrt(r / (r - tube.r_c + tube.xi_c))
    )
    flat = phi_a.ravel()
    acc = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, _CHUNK):
        block = flat[start:start + _CHUNK]
        acc[start:start + _CHUNK] = np.sin(np.outer(block, half)) @ coeff
    return _unwrap(pref * acc.reshape(phi_a.shape))


def _branches(phi, geom: ConeGeometry):
    """Candidate branch indices l and the mask of those inside the window

        -(phi - phi_eta)/(2 pi) < l <= -(phi + phi_eta)/(2 pi) + 1.

    Both endpoints describe the same ray (cone angle -pi vs +pi), so the
    window is half-open to count it once.
    """
    phi = np.asarray(phi, dtype=float)
    pe = geom.phi_eta
    lo = -(phi - pe) / (2.0 * math.pi)
    hi = -(phi + pe) / (2.0 * math.pi) + 1.0
    ls = np.arange(math.floor(np.min(lo)), math.ceil(np.max(hi)) + 1)
    shape = (ls.size,) + phi.shape
    lgrid = ls.reshape((-1,) + (1,) * phi.ndim) * np.ones(shape)
    mask = (lgrid > lo) & (lgrid <= hi)
    return lgrid, mask


def branch_count(phi, geom: ConeGeometry):
    """Number n_l of classical branches (terms in the l-sums) reaching phi."""
    _, mask = _branches(phi, geom)
    return _unwrap(mask.sum(axis=0))


def incident_wave(r: float, phi, k, cfg: VortexConfig) -> IncidentWave:
    """Incident wave distorted by the cone and the vortex flux.

    Reduces to exp(i k r cos phi) for eta = 0, nu = 0.  Zero (with n_l = 0)
    in the shadow window.
    """
    k = _kval(k)
    phi_a = np.asarray(phi, dtype=float)
    eta = cfg.eta
    nu = cfg.effective_flux
    lgrid, mask = _branches(phi_a, cfg.geom)
    arg = phi_a - np.pi + 2.0 * np.pi * lgrid
    terms = np.exp(-1j * k * r * np.cos((1.0 - eta) * arg) + 1j * nu * arg)
    value = (1.0 - eta) * np.where(mask, terms, 0.0).sum(axis=0)
    return IncidentWave(_unwrap(value), _unwrap(mask.sum(axis=0)))


def smatrix_peak_data(cfg: VortexConfig, k=None) -> PeakData:
    """Directions and weights of the two delta peaks of the modified unit S-matrix.

    Direction -phi_eta carries exp(+i nu (pi - phi_eta)), direction +phi_eta
    carries exp(-i nu (pi - phi_eta)); both share exp(2ik(r_c - xi_c))/2.
    """
    pe = cfg.geom.phi_eta
    theta = math.pi - pe
    nu = cfg.effective_flux
    if k is None:
        if cfg.tube.xi_c != cfg.tube.r_c:
            raise DomainError("k is required when xi_c differs from r_c")
        pref = 0.5 + 0j
    else:
        pref = 0.5 * _global_phase(_kval(k), cfg.tube)
    return PeakData(
        (-pe, pe),
        (complex(np.exp(1j * nu * theta)), complex(np.exp(-1j * nu * theta))),
        pref,
    )


def sigma_total_exact(k, cfg: VortexConfig, trunc: TruncationPolicy | None = None) -> float:
    """Integrated |f|^2 of the finite-size (Bessel-quotient) amplitude via unitarity.

    Each partial-wave quotient R obeys |R|^2 = Re R, so the integral equals
    (4/k) sum_n Re R_n.
    """
    k = _kval(k)
    pw = partial_waves(k, cfg, trunc)
    ratio = pw.coeff * np.exp(1j * np.pi * pw.alpha)
    return 4.0 / k * float(np.sum(ratio.real))


def optical_theorem_exact(
    k, cfg: VortexConfig, trunc: TruncationPolicy | None = None, epsrel: float = 1e-11
) -> OpticalCheck:
    """Generalised optical theorem for the exact finite-size amplitude.

    The left-hand side uses the two half-sums of the series (n > nu and
    n <= nu) evaluated in the peak directions -phi_eta and +phi_eta,
    weighted by cos / sin of nu (pi - phi_eta); for eta = 0, nu = 0 it is
    2 sqrt(2 pi / k) Im[i^{-1/2} f(k, 0)].  The right-hand side integrates
    |f|^2 over the full circle by adaptive quadrature.
    """
    k = _kval(k)
    pw = partial_waves(k, cfg, trunc)
    nu = cfg.effective_flux
    pe = cfg.geom.phi_eta
    theta = math.pi - pe
    scale = _prefactor(k)  # global phase removed
    upper = pw.n > nu
    f_plus = scale * np.sum(np.exp(1j * pw.n[upper] * (-pe - np.pi)) * pw.coeff[upper])
    f_minus = scale * np.sum(np.exp(1j * pw.n[~upper] * (pe - np.pi)) * pw.coeff[~upper])
    root_i = np.exp(-0.25j * math.pi)
    lhs = (2.0 * math.sqrt(2.0 * math.pi / k)) * (
        math.cos(nu * theta) * (root_i * (f_plus + f_minus)).imag
        - math.sin(nu * theta) * (root_i * (f_plus - f_minus)).real
    )

    n, coeff = pw.n.astype(float), pw.coeff

    def intensity(p):
        return abs(scale * np.dot(np.exp(1j * n * (p - np.pi)), coeff)) ** 2

    points = sorted({0.0, reduce_angle(pe), reduce_angle(-pe)} - {math.pi, -math.pi})
    sigma = quad(
        intensity, -math.pi, math.pi, points=points, epsabs=0.0, epsrel=epsrel,
        limit=max(200, 4 * n.size),
    )[0]
    ratio = pw.coeff * np.exp(1j * np.pi * pw.alpha)
    return OpticalCheck(float(lhs), float(sigma), 4.0 / k * float(np.sum(ratio.real)))
