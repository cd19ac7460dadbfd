"""Short-wavelength (k r_c >> 1) decomposition of vortex scattering.

The amplitude splits into two Fraunhofer diffraction peaks centred on
phi = -/+ phi_eta, a reflected (geometric-optics) part, and a remainder of
relative order (k r_c)^(-1/6).  This module holds the closed forms of each
part, the associated differential and integrated cross sections, the
forward "gate" factors for fluxes quantised in half flux quanta, and the
short-wavelength forms of the optical theorem.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from vortexwave.errors import DomainError, RangeError, UnsupportedRegimeError
from vortexwave.exact import VortexConfig, _branches, _kval, _unwrap, amplitude_exact, near_peak
from vortexwave.geometry import TWO_PI, reduce_angle, sigma_classical_totals

__all__ = [
    "PeakBranch",
    "Channel",
    "IntegratedChannel",
    "OpticalMode",
    "Parity",
    "SpinKind",
    "GateSpec",
    "QuasiDecomposition",
    "OpticalResidual",
    "ComparisonTable",
    "delta_reg",
    "f_peak",
    "f_qclass",
    "dsigma_analytic",
    "sigma_integrated",
    "optical_residual",
    "optical_lhs",
    "gate_function",
    "compose_quasiclassical",
    "compare_with_exact",
    "double_image_excess",
    "peak_norm_quadrature",
    "peak_interference_integral",
]


class PeakBranch(enum.Enum):
    PLUS = "plus"  # centred on phi = -phi_eta
    MINUS = "minus"  # centred on phi = +phi_eta
    EUCLID_TUBE = "euclid_tube"
    EUCLID_VORTEX = "euclid_vortex"


class Channel(enum.Enum):
    QCLASS_OUTSIDE = "qclass_outside"
    QCLASS_DOUBLE_IMAGE = "qclass_double_image"
    PEAK_PLUS = "peak_plus"
    PEAK_MINUS = "peak_minus"
    EUCLID_PEAK_FLUX = "euclid_peak_flux"
    FORWARD_WINDOW = "forward_window"
    EUCLID_FORWARD = "euclid_forward"


class IntegratedChannel(enum.Enum):
    PEAK = "peak"
    PEAK_PLUS = "peak_plus"
    PEAK_MINUS = "peak_minus"
    QCLASS = "qclass"
    TOTAL = "total"


class OpticalMode(enum.Enum):
    EUCLID = "euclid"
    CONE = "cone"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


class SpinKind(enum.Enum):
    SPINLESS = "spinless"
    UNPOLARIZED = "unpolarized"
    POLARIZED = "polarized"


@dataclass(frozen=True)
class GateSpec:
    """Which gate factor to evaluate for flux n/2 flux quanta.

    ``parity`` is that of n; ``sigma`` (+1 or -1) selects the polarisation
    and is required only for ``SpinKind.POLARIZED``.
    """

    parity: Parity = Parity.EVEN
    spin: SpinKind = SpinKind.SPINLESS
    sigma: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        object.__setattr__(self, "spin", SpinKind(self.spin))
        if self.spin is SpinKind.POLARIZED and self.sigma not in (1, -1):
            raise DomainError("polarized gate needs sigma = +1 or -1")


class QuasiDecomposition(NamedTuple):
    f_peak_plus: complex | np.ndarray
    f_peak_minus: complex | np.ndarray
    f_qclass: complex | np.ndarray
    remainder_bound: float

    @property
    def total(self):
        return self.f_peak_plus + self.f_peak_minus + self.f_qclass

    @property
    def interference(self):
        """f+ f-* + f- f+*, the cross term between the two peaks."""
        return 2.0 * np.real(self.f_peak_plus * np.conj(self.f_peak_minus))


class OpticalResidual(NamedTuple):
    lhs: float
    sigma_tot: float
    residual: float


class ComparisonTable(NamedTuple):
    phi: np.ndarray
    exact: np.ndarray  # |f|^2 from the partial-wave series
    quasi: np.ndarray  # |f|^2 from the composed short-wavelength amplitude
    rel_error: np.ndarray
    masked: np.ndarray


def _require_classical(cfg: VortexConfig):
    cfg.geom.require_classical()


def _phase(k: float, cfg: VortexConfig) -> complex:
    t = cfg.tube
    return complex(np.exp(2j * k * (t.r_c - t.xi_c)))


def _delta(x, phi):
    """Unchecked Delta_x(phi) = (x/pi) [sinc(x phi/pi) / sinc(phi/(2 pi))]^2."""
    phi = np.asarray(phi, dtype=float)
    return x / math.pi * (np.sinc(x * phi / math.pi) / np.sinc(phi / TWO_PI)) ** 2


def _dirichlet(m, x):
    """sin(m x / 2) / sin(x / 2), finite at x = 0."""
    return m * np.sinc(m * x / TWO_PI) / np.sinc(x / TWO_PI)


def delta_reg(x: float, phi):
    """Smoothed angular delta function (1/(4 pi x)) sin^2(x phi) / sin^2(phi/2).

    Defined on -pi < phi < pi; equals x/pi at phi = 0 and integrates to
    1 + O(x^-2).
    """
    if not x > 0:
        raise DomainError("sharpness x must be positive")
    phi = np.asarray(phi, dtype=float)
    if np.any(np.abs(phi) >= math.pi):
        raise RangeError("delta_reg is defined for -pi < phi < pi")
    return _unwrap(_delta(x, phi))


def f_peak(k, phi, branch: PeakBranch, cfg: VortexConfig):
    """Fraunhofer diffraction amplitude.

    ``PLUS`` and ``MINUS`` are the two peaks of conical space, evaluated at
    the distance x = phi +/- phi_eta from their centre (reduced to
    (-pi, pi]).  ``EUCLID_TUBE`` is the flux-free Euclidean geometric sum
    with floor(k r_c) + 1/2, and ``EUCLID_VORTEX`` its flux-dependent
    Euclidean counterpart (eta must be 0).
    """
    k = _kval(k)
    branch = PeakBranch(branch)
    phi = np.asarray(phi, dtype=float)
    krc = k * cfg.r_c
    nu = cfg.effective_flux
    N = math.floor(nu)
    c = _phase(k, cfg)
    root = np.sqrt(2j * math.pi * k)
    if branch in (PeakBranch.PLUS, PeakBranch.MINUS):
        eta = cfg.eta
        pe = cfg.geom.phi_eta
        m = krc * (1.0 - eta)
        theta = math.pi - pe
        s = 1.0 if branch is PeakBranch.PLUS else -1.0
        x = reduce_angle(phi + s * pe)
        value = (
            -c / root * _dirichlet(m, x)
            * np.exp(1j * s * nu * theta + 1j * (N + 0.5 + 0.5 * s * m) * x)
        )
    elif branch is PeakBranch.EUCLID_TUBE:
        value = -c / root * _dirichlet(2 * math.floor(krc) + 1, phi)
    else:
        if cfg.eta != 0.0:
            raise UnsupportedRegimeError("the Euclidean vortex peak requires eta = 0")
        value = (
            -c * np.sqrt(2.0 / (1j * math.pi * k)) * _dirichlet(krc, phi)
            * np.cos(0.5 * krc * phi + nu * math.pi)
            * np.exp(1j * (N + 0.5) * phi)
        )
    return _unwrap(value)


def f_qclass(k, phi, cfg: VortexConfig):
    """Reflected (geometric-optics) amplitude: one term per classical branch.

    Zero in the shadow window; two interfering terms in the double-image
    window, which is what makes the forward cross section flux dependent.
    """
    k = _kval(k)
    phi = np.asarray(phi, dtype=float)
    eta = cfg.eta
    lgrid, mask = _branches(phi, cfg.geom)
    a = phi - math.pi + TWO_PI * lgrid
    cosv = np.cos(0.5 * (1.0 - eta) * a)
    if np.any(cosv[mask] < -1e-12):
        raise AssertionError("reflection branch with negative radicand")
    cosv = np.clip(cosv, 0.0, None)
    terms = np.sqrt(cosv) * np.exp(1j * cfg.effective_flux * a - 2j * k * cfg.r_c * cosv)
    pref = -_phase(k, cfg) * (1.0 - eta) * math.sqrt(0.5 * cfg.r_c)
    return _unwrap(pref * np.where(mask, terms, 0.0).sum(axis=0))


def _qclass_outside(phi, cfg):
    eta, w = cfg.eta, cfg.geom.omega_eta
    p = np.mod(phi, TWO_PI)
    inside = (p < w) | (p > TWO_PI - w)
    if eta > 0 and np.any(inside):
        raise RangeError("phi lies in the double-image window; use QCLASS_DOUBLE_IMAGE")
    value = 0.5 * cfg.r_c * (1 - eta) ** 2 * np.sin(0.5 * (1 - eta) * p + 0.5 * eta * math.pi)
    return np.where(inside, 0.0, value)


def _qclass_double_image(phi, k, cfg):
    eta = cfg.eta
    if not 0.0 < eta < 0.5:
        raise RangeError("the double-image window exists only for 0 < eta < 1/2")
    p = reduce_angle(phi)
    if np.any(np.abs(p) >= cfg.geom.omega_eta):
        raise RangeError("phi is outside the double-image window")
    sh = math.sin(0.5 * eta * math.pi)
    ch = math.cos(0.5 * eta * math.pi)
    sp = np.sin(0.5 * (1 - eta) * p)
    krc = k * cfg.r_c
    return cfg.r_c * (1 - eta) ** 2 * (
        np.cos(0.5 * (1 - eta) * p) * sh
        + np.sqrt(sh**2 - sp**2)
        * np.cos(2.0 * cfg.effective_flux * math.pi + 4.0 * krc * sp * ch)
    )


def _forward_window_ok(k, cfg):
    eta = cfg.eta
    if not 0.0 < eta < 0.5:
        return False
    return math.sin(0.5 / (k * cfg.r_c)) / math.sin(0.5 * eta * math.pi) < 0.1


def dsigma_analytic(phi, channel: Channel, cfg: VortexConfig, k):
    """Closed-form differential cross sections of the individual channels.

    QCLASS_OUTSIDE        reflection outside the forward window (0 in a shadow)
    QCLASS_DOUBLE_IMAGE   flux-dependent reflection inside the double image
    PEAK_PLUS/PEAK_MINUS  r_c (1 - eta) Delta of each diffraction peak
    EUCLID_PEAK_FLUX      flux-dependent Euclidean peak (eta = 0)
    FORWARD_WINDOW        small-angle form of the double-image result
    EUCLID_FORWARD        small-angle expansion of the Euclidean peak
    """
    k = _kval(k)
    channel = Channel(channel)
    phi = np.asarray(phi, dtype=float)
    _require_classical(cfg)
    eta, r_c = cfg.eta, cfg.r_c
    krc = k * r_c
    nu = cfg.effective_flux
    if channel is Channel.QCLASS_OUTSIDE:
        out = _qclass_outside(phi, cfg)
    elif channel is Channel.QCLASS_DOUBLE_IMAGE:
        out = _qclass_double_image(phi, k, cfg)
    elif channel in (Channel.PEAK_PLUS, Channel.PEAK_MINUS):
        s = 1.0 if channel is Channel.PEAK_PLUS else -1.0
        x = reduce_angle(phi + s * cfg.geom.phi_eta)
        out = r_c * (1 - eta) * _delta(0.5 * krc * (1 - eta), x)
    elif channel is Channel.EUCLID_PEAK_FLUX:
        if eta != 0.0:
            raise RangeError("EUCLID_PEAK_FLUX requires eta = 0")
        p = reduce_angle(phi)
        c2, s2 = math.cos(2 * nu * math.pi), math.sin(2 * nu * math.pi)
        out = 2 * r_c * (
            c2 * _delta(krc, p)
            + (1 - c2 - s2 * np.sin(krc * p)) * _delta(0.5 * krc, p)
        )
    elif channel is Channel.FORWARD_WINDOW:
        if not _forward_window_ok(k, cfg):
            raise RangeError("forward-window form needs 0 < eta < 1/2 and sin(1/(2 k r_c)) << sin(eta pi/2)")
        p = reduce_angle(phi)
        if np.any((1 - eta) * np.abs(p) >= 1.0 / krc):
            raise RangeError("phi outside (1 - eta)|phi| < 1/(k r_c)")
        ch = math.cos(0.5 * eta * math.pi)
        out = (
            2 * r_c * (1 - eta) ** 2 * math.sin(0.5 * eta * math.pi)
            * np.cos(nu * math.pi + krc * (1 - eta) * p * ch) ** 2
        )
    else:
        if eta != 0.0:
            raise RangeError("EUCLID_FORWARD requires eta = 0")
        p = reduce_angle(phi)
        if np.any(krc * np.abs(p) >= 1.0):
            raise RangeError("phi outside |phi| << 1/(k r_c)")
        u = krc * p
        out = 2.0 / math.pi * k * r_c**2 * (
            math.cos(nu * math.pi) ** 2
            - 0.5 * u * math.sin(2 * nu * math.pi)
            - u**2 / 24.0 * (1 + 7 * math.cos(2 * nu * math.pi))
        )
    return _unwrap(out)


def sigma_integrated(channel: IntegratedChannel, cfg: VortexConfig) -> float:
    """Closed-form integrated cross sections; none depends on the flux."""
    channel = IntegratedChannel(channel)
    _require_classical(cfg)
    one_peak = cfg.r_c * (1.0 - cfg.eta)
    qclass = sigma_classical_totals(cfg.geom, cfg.tube).sigma_total
    if channel in (IntegratedChannel.PEAK_PLUS, IntegratedChannel.PEAK_MINUS):
        return one_peak
    if channel is IntegratedChannel.PEAK:
        return 2.0 * one_peak
    if channel is IntegratedChannel.QCLASS:
        return qclass
    return qclass + 2.0 * one_peak


def optical_lhs(k, cfg: VortexConfig, mode: OpticalMode) -> float:
    """Left-hand side of the short-wavelength optical theorem.

    EUCLID at zero flux uses 2 sqrt(2 pi/k) Im[i^(-1/2) f(k, 0)] with the
    flux-free Euclidean peak (the reflected part vanishes forward); EUCLID
    at nonzero flux adds the sin^2(nu pi) Delta term.  CONE combines both
    peak amplitudes at their centres with cos / sin of nu (pi - phi_eta)
    and adds (2 pi/k) Delta_{k r_c (1 - eta)}(0).
    """
    k = _kval(k)
    mode = OpticalMode(mode)
    _require_classical(cfg)
    nu = cfg.effective_flux
    krc = k * cfg.r_c
    root_i = np.exp(-0.25j * math.pi)
    scale = math.sqrt(2.0 * math.pi / k)
    cstar = np.conj(_phase(k, cfg))
    if mode is OpticalMode.EUCLID:
        if cfg.eta != 0.0:
            raise UnsupportedRegimeError("Euclidean optical theorem requires eta = 0")
        if nu == 0.0:
            f0 = f_peak(k, 0.0, PeakBranch.EUCLID_TUBE, cfg)
            return float(2.0 * scale * (root_i * cstar * f0).imag)
        f0 = f_peak(k, 0.0, PeakBranch.EUCLID_VORTEX, cfg)
        return float(
            2.0 * math.cos(nu * math.pi) * scale * (root_i * cstar * f0).imag
            + math.sin(nu * math.pi) ** 2 * 4.0 * math.pi / k * _delta(krc, 0.0)
        )
    pe = cfg.geom.phi_eta
    theta = math.pi - pe
    fp = f_peak(k, -pe, PeakBranch.PLUS, cfg)
    fm = f_peak(k, pe, PeakBranch.MINUS, cfg)
    return float(
        math.cos(nu * theta) * scale * (root_i * cstar * (fp + fm)).imag
        - math.sin(nu * theta) * scale * (root_i * cstar * (fp - fm)).real
        + TWO_PI / k * _delta(krc * (1 - cfg.eta), 0.0)
    )


def optical_residual(k, cfg: VortexConfig, mode: OpticalMode) -> OpticalResidual:
    """Relative mismatch between the optical-theorem LHS and 4 r_c (1 - eta)."""
    lhs = optical_lhs(k, cfg, mode)
    tot = sigma_integrated(IntegratedChannel.TOTAL, cfg)
    return OpticalResidual(lhs, tot, abs(lhs - tot) / tot)


def gate_function(phi, gate: GateSpec, cfg: VortexConfig, k):
    """Forward gate factor F(phi, +/-) for flux n/2 flux quanta.

    The reflected forward cross section equals F times the classical
    forward value; F(+) + F(-) = 2 for the spinless and unpolarised forms.
    """
    k = _kval(k)
    eta = cfg.eta
    _require_classical(cfg)
    phi = np.asarray(phi, dtype=float)
    krc = k * cfg.r_c
    if np.any((1 - eta) * np.abs(phi) >= 1.0 / krc):
        raise RangeError("phi outside the gate window (1 - eta)|phi| < 1/(k r_c)")
    s = 1.0 if gate.parity is Parity.EVEN else -1.0
    t = 2.0 * krc * (1 - eta) * phi * math.cos(0.5 * eta * math.pi)
    if gate.spin is SpinKind.SPINLESS:
        out = 1.0 + s * np.cos(t)
    elif gate.spin is SpinKind.UNPOLARIZED:
        out = 1.0 + s * np.cos(t) * math.cos(eta * math.pi)
    else:
        out = (
            1.0 + s * np.cos(t) * math.cos(eta * math.pi)
            + s * gate.sigma * np.sin(t) * math.sin(eta * math.pi)
        )
    return _unwrap(out)


def compose_quasiclassical(k, phi, cfg: VortexConfig) -> QuasiDecomposition:
    """Peak, peak and reflection parts of the short-wavelength amplitude."""
    k = _kval(k)
    _require_classical(cfg)
    bound = math.sqrt(cfg.r_c) * (k * cfg.r_c) ** (-1.0 / 6.0)
    return QuasiDecomposition(
        f_peak(k, phi, PeakBranch.PLUS, cfg),
        f_peak(k, phi, PeakBranch.MINUS, cfg),
        f_qclass(k, phi, cfg),
        bound,
    )


def compare_with_exact(k, phi, cfg: VortexConfig, mask_peaks: bool = True, trunc=None) -> ComparisonTable:
    """|f|^2 from the exact series next to the composed short-wavelength form.

    Directions within 2/(k r_c (1 - eta)) of a peak are masked (error set
    to NaN) when ``mask_peaks`` is set.
    """
    k = _kval(k)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    masked = np.asarray(near_peak(phi, k, cfg)) if mask_peaks else np.zeros(phi.shape, bool)
    exact = np.full(phi.shape, np.nan)
    ok = ~masked
    if np.any(ok):
        exact[ok] = np.abs(amplitude_exact(k, phi[ok], cfg, trunc).value) ** 2
    quasi_v = np.abs(compose_quasiclassical(k, phi, cfg).total) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(exact - quasi_v) / exact
    rel = np.where(masked, np.nan, rel)
    return ComparisonTable(phi, exact, quasi_v, rel, masked)


def double_image_excess(k, cfg: VortexConfig, epsabs: float = 1e-14) -> float:
    """Integral over the double-image window of the flux-free reflected
    cross section minus the classical one (the oscillating square-root term).

    With u = sin((1 - eta) phi / 2) / sin(eta pi / 2) the integral becomes
    2 r_c (1 - eta) s^2 int_{-1}^{1} sqrt(1-u^2)/sqrt(1-s^2 u^2) cos(w u) du
    with s = sin(eta pi/2) and w = 2 k r_c sin(eta pi), done with a
    Fourier-weighted quadrature.
    """
    k = _kval(k)
    eta = cfg.eta
    if not 0.0 < eta < 0.5:
        raise RangeError("the double-image window exists only for 0 < eta < 1/2")
    s = math.sin(0.5 * eta * math.pi)
    w = 2.0 * k * cfg.r_c * math.sin(eta * math.pi)

    def g(u):
        return math.sqrt(max(0.0, 1.0 - u * u)) / math.sqrt(1.0 - s * s * u * u)

    half = quad(g, 0.0, 1.0, weight="cos", wvar=w, epsabs=epsabs, limit=500)[0]
    return 2.0 * cfg.r_c * (1 - eta) * s * s * 2.0 * half


def peak_norm_quadrature(k, cfg: VortexConfig, branch: PeakBranch = PeakBranch.PLUS) -> float:
    """Integral of |f_peak|^2 over a full turn around the peak centre."""
    k = _kval(k)
    branch = PeakBranch(branch)
    pe = cfg.geom.phi_eta
    centre = -pe if branch is PeakBranch.PLUS else pe
    krc = k * cfg.r_c * (1 - cfg.eta)

    def g(x):
        return abs(f_peak(k, centre + x, branch, cfg)) ** 2

    pts = np.linspace(-math.pi, math.pi, 2 * int(krc) + 3)[1:-1]
    total = 0.0
    edges = np.concatenate(([-math.pi], pts, [math.pi]))
    for a, b in zip(edges[:-1], edges[1:]):
        total += quad(g, a, b, epsabs=0.0, epsrel=1e-10)[0]
    return total


def peak_interference_integral(k, cfg: VortexConfig) -> float:
    """Integral over the circle of f+ f-* + f- f+*."""
    k = _kval(k)
    krc = k * cfg.r_c * (1 - cfg.eta)

    def g(p):
        fp = f_peak(k, p, PeakBranch.PLUS, cfg)
        fm = f_peak(k, p, PeakBranch.MINUS, cfg)
        return 2.0 * (fp * np.conj(fm)).real

    edges = np.linspace(-math.pi, math.pi, 2 * int(krc) + 3)
    pe = cfg.geom.phi_eta
    edges = np.unique(np.concatenate((edges, reduce_angle(np.array([pe, -pe])))))
    return float(sum(quad(g, a, b, epsabs=1e-13, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])))
