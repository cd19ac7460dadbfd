"""Conical-space kinematics and classical hard-tube scattering.

Angle convention used throughout the package: the incident beam travels in
the direction phi = 0, so phi = 0 is strictly forward and phi = pi is
backscattering.  Particles passing above the tube (upper half-space) are
deflected into phi_eta < phi < pi, particles passing below it into
pi < phi < 2 pi - phi_eta.  Angles handed to public functions may be any
real number; they are reduced modulo 2 pi internally.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from vortexwave.errors import DomainError, RangeError, UnsupportedRegimeError

__all__ = [
    "ConeGeometry",
    "TubeSpec",
    "Region",
    "Half",
    "ClassicalKinematics",
    "ClassicalDSigma",
    "ClassicalTotals",
    "reduce_angle",
    "classify_angle",
    "kinematics",
    "impact_parameter",
    "dsigma_classical",
    "sigma_classical_totals",
    "sigma_classical_quadrature",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ConeGeometry:
    """Cone with deficit angle 2 pi eta (proficit angle for eta < 0)."""

    eta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.eta) or self.eta >= 1.0:
            raise DomainError("eta must be < 1")

    @property
    def phi_eta(self) -> float:
        """Kinematic deflection angle -eta pi / (1 - eta)."""
        if self.eta == 0.0:
            return 0.0
        return -self.eta * math.pi / (1.0 - self.eta)

    @property
    def omega_eta(self) -> float:
        """Half-width of the shadow or double-image window."""
        return abs(self.phi_eta)

    @property
    def stretch(self) -> float:
        """1 / (1 - eta), the factor multiplying angular momenta."""
        return 1.0 / (1.0 - self.eta)

    def require_classical(self):
        if self.eta >= 0.5:
            raise UnsupportedRegimeError(
                "classical and quasiclassical formulas require eta < 1/2"
            )


@dataclass(frozen=True)
class TubeSpec:
    """Impenetrable tube of coordinate radius ``r_c``.

    ``xi_c`` is the geodesic radius through the curved interior; it enters
    only through the global phase exp(2ik(r_c - xi_c)) and defaults to r_c.
    """

    r_c: float = 1.0
    xi_c: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r_c) and self.r_c > 0):
            raise DomainError("r_c must be positive")
        if self.xi_c is None:
            object.__setattr__(self, "xi_c", self.r_c)
        elif not (math.isfinite(self.xi_c) and self.xi_c > 0):
            raise DomainError("xi_c must be positive")


class Region(enum.Enum):
    REGULAR = "regular"
    SHADOW = "shadow"
    DOUBLE_IMAGE = "double_image"


class Half(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    COMBINED = "combined"


class ClassicalKinematics(NamedTuple):
    chi: float  # incidence (= reflection) angle
    rho: float  # impact parameter


class ClassicalDSigma(NamedTuple):
    value: float
    region: Region


@dataclass(frozen=True)
class ClassicalTotals:
    sigma_total: float
    sigma_out: float | None = None
    sigma_in: float | None = None


def reduce_angle(phi):
    """Map angles onto (-pi, pi]."""
    a = np.asarray(phi, dtype=float)
    r = np.mod(a + math.pi, TWO_PI) - math.pi
    r = np.where(r == -math.pi, math.pi, r)
    # in-range angles pass through untouched, so small angles keep full precision
    r = np.where((a > -math.pi) & (a <= math.pi), a, r)
    return r.item() if r.ndim == 0 else r


def classify_angle(phi: float, geom: ConeGeometry) -> Region:
    """Classify a scattering direction as regular, shadow or double image."""
    phi = reduce_angle(phi)
    if abs(phi) >= geom.omega_eta:
        return Region.REGULAR
    if geom.eta < 0:
        return Region.SHADOW
    if geom.eta < 0.5:
        return Region.DOUBLE_IMAGE
    raise UnsupportedRegimeError(
        "no classical description inside the forward window for eta >= 1/2"
    )


def _upper_angle(phi: float, geom: ConeGeometry) -> float | None:
    """Representative of phi in the upper-half range [phi_eta, pi], if any."""
    p = reduce_angle(phi)
    if geom.phi_eta <= p <= math.pi:
        return p
    return None


def _lower_angle(phi: float, geom: ConeGeometry) -> float | None:
    """Representative of phi in the lower-half range [pi, 2 pi - phi_eta], if any."""
    p = reduce_angle(phi)
    if p < math.pi:
        p += TWO_PI
    if p <= TWO_PI - geom.phi_eta:
        return p
    return None


def _dsigma_branch(p: float, geom: ConeGeometry, tube: TubeSpec) -> float:
    eta = geom.eta
    return 0.5 * tube.r_c * (1 - eta) ** 2 * math.sin(0.5 * (1 - eta) * p + 0.5 * eta * math.pi)


def kinematics(phi: float, geom: ConeGeometry, tube: TubeSpec) -> ClassicalKinematics:
    """Incidence angle and impact parameter for an upper-half trajectory."""
    geom.require_classical()
    p = _upper_angle(phi, geom)
    if p is None:
        raise RangeError(f"phi={phi!r} is outside the upper-half range (phi_eta, pi]")
    chi = 0.5 * (1 - geom.eta) * (math.pi - p)
    return ClassicalKinematics(chi, tube.r_c * (1 - geom.eta) * math.sin(chi))


def impact_parameter(phi: float, geom: ConeGeometry, tube: TubeSpec) -> float:
    """r_c (1 - eta) sin[(1 - eta)(pi - phi)/2] for phi_eta <= phi <= pi."""
    return kinematics(phi, geom, tube).rho


def dsigma_classical(
    phi: float, geom: ConeGeometry, tube: TubeSpec, mode: Half = Half.COMBINED
) -> ClassicalDSigma:
    """Classical differential cross section d sigma / d phi.

    ``UPPER`` and ``LOWER`` select particles incident above or below the
    tube and raise ``RangeError`` outside their angular range.  ``COMBINED``
    adds every branch reaching the direction, which inside the double-image
    window is the sum of both halves.  Shadow directions give 0.
    """
    geom.require_classical()
    mode = Half(mode)
    region = classify_angle(phi, geom)
    if region is Region.SHADOW:
        return ClassicalDSigma(0.0, region)
    up = _upper_angle(phi, geom)
    lo = _lower_angle(phi, geom)
    if mode is Half.UPPER:
        if up is None:
            raise RangeError(f"phi={phi!r} is not reached from the upper half-space")
        return ClassicalDSigma(_dsigma_branch(up, geom, tube), region)
    if mode is Half.LOWER:
        if lo is None:
            raise RangeError(f"phi={phi!r} is not reached from the lower half-space")
        return ClassicalDSigma(_dsigma_branch(lo, geom, tube), region)
    total = 0.0
    if up is not None:
        total += _dsigma_branch(up, geom, tube)
    if lo is not None and lo != math.pi:  # backscattering ray belongs to both ranges
        total += _dsigma_branch(lo, geom, tube)
    return ClassicalDSigma(total, region)


def sigma_classical_totals(geom: ConeGeometry, tube: TubeSpec) -> ClassicalTotals:
    """Closed-form classical cross sections.

    The total is 2 r_c (1 - eta): the tube circumference divided by the half
    azimuthal angle.  For 0 < eta < 1/2 the split into the part outside the
    double-image window and the part inside it (reached twice) is returned.
    """
    geom.require_classical()
    eta, r_c = geom.eta, tube.r_c
    total = 2.0 * r_c * (1 - eta)
    if eta > 0:
        c = math.cos(eta * math.pi)
        return ClassicalTotals(total, 2.0 * r_c * (1 - eta) * c, r_c * (1 - eta) * (1 - c))
    return ClassicalTotals(total)


def sigma_classical_quadrature(geom: ConeGeometry, tube: TubeSpec) -> ClassicalTotals:
    """Classical cross sections by adaptive quadrature of the two half-space branches."""
    geom.require_classical()
    pe = geom.phi_eta

    def branch(p):
        return _dsigma_branch(p, geom, tube)

    kw = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    upper = quad(branch, pe, math.pi, **kw)[0]
    lower = quad(branch, math.pi, TWO_PI - pe, **kw)[0]
    total = upper + lower
    if geom.eta > 0:
        w = geom.omega_eta
        out = quad(branch, w, math.pi, **kw)[0] + quad(branch, math.pi, TWO_PI - w, **kw)[0]
        inside = quad(branch, -w, w, **kw)[0]
        return ClassicalTotals(total, out, inside)
    return ClassicalTotals(total)
