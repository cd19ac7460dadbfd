"""Executable invariant checks, grouped into suites by module."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vortexwave import exact, geometry, quasi, specfun
from vortexwave.exact import TruncationPolicy, VortexConfig
from vortexwave.geometry import ConeGeometry, TubeSpec

__all__ = ["Check", "run_suites", "SUITE_NAMES"]

SUITE_NAMES = ("specfun", "geometry", "exact", "quasi")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value)) and self.value < self.threshold

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.name,
            "value": float(self.value),
            "threshold": float(self.threshold),
            "status": "pass" if self.passed else "fail",
        }


def _spec_checks():
    rng = np.random.default_rng(20240607)
    nu = rng.uniform(0.0, 50.0, 200)
    x = rng.uniform(0.1, 100.0, 200)
    wr = np.abs(specfun.wronskian_residual(nu, x)) * (np.pi * x / 2.0)
    yield Check("specfun", "wronskian", float(wr.max()), 1e-10)
    xs = np.array([0.5, 5.0, 50.0, 500.0])
    cut = xs + 10.0 * np.cbrt(xs) + 10.0
    yield Check("specfun", "ratio_decay", float(np.abs(specfun.jh_ratio(cut, xs)).max()), 1e-8)
    r = specfun.jh_ratio(np.linspace(0, 60, 61), 20.0)
    yield Check("specfun", "ratio_unitarity", float(np.abs(np.abs(r) ** 2 - r.real).max()), 1e-12)


def _geometry_checks(cfg: VortexConfig):
    if cfg.eta >= 0.5:
        return
    closed = geometry.sigma_classical_totals(cfg.geom, cfg.tube)
    num = geometry.sigma_classical_quadrature(cfg.geom, cfg.tube)
    yield Check("geometry", "classical_total",
                abs(num.sigma_total - closed.sigma_total) / closed.sigma_total, 1e-9)
    if closed.sigma_in is not None:
        yield Check("geometry", "split_identity",
                    abs(closed.sigma_out + 2 * closed.sigma_in - closed.sigma_total) / closed.sigma_total,
                    1e-12)


def _exact_checks(cfg: VortexConfig, k: float):
    worst = 0.0
    for krc in (1.0, 5.0, 20.0):
        oc = exact.optical_theorem_exact(krc / cfg.r_c, cfg)
        worst = max(worst, oc.residual)
    yield Check("exact", "optical_theorem", worst, 1e-6)

    half = cfg.with_flux(math.floor(cfg.effective_flux) + 0.5 + (cfg.flux_ratio - cfg.effective_flux))
    phi = np.linspace(-math.pi, math.pi, 129)
    null = 0.0
    for kr, krc in ((5.0, 1.0), (20.0, 2.0)):
        kk = krc / cfg.r_c
        psi = exact.wavefunction_exact(kr / kk, phi, kk, half)
        null = max(null, abs(exact.wavefunction_exact(kr / kk, 0.0, kk, half)) / np.abs(psi).max())
    yield Check("exact", "forward_null", null, 1e-8)

    kk = 10.0 / cfg.r_c
    a = exact.wavefunction_exact(3.0 * cfg.r_c, phi, kk, half)
    b = exact.wavefunction_halfflux(3.0 * cfg.r_c, phi, kk, half)
    yield Check("exact", "halfflux_consistency", float(np.abs(a - b).max() / np.abs(a).max()), 1e-8)

    grid = np.linspace(-math.pi, math.pi, 64)
    yield Check("exact", "dirichlet",
                float(np.abs(exact.wavefunction_exact(cfg.r_c, grid, kk, cfg)).max()), 1e-12)

    phis = np.linspace(0.3, 2.9, 9)
    f0 = np.abs(exact.amplitude_exact(k, phis, cfg, part="ratio").value) ** 2
    f1 = np.abs(exact.amplitude_exact(k, phis, cfg.with_flux(cfg.flux_ratio + 1), part="ratio").value) ** 2
    yield Check("exact", "flux_periodicity", float(np.abs(f0 - f1).max() / f0.max()), 1e-10)

    big = TruncationPolicy(fixed_terms=2 * exact.partial_waves(k, cfg).n.size)
    g0 = exact.amplitude_exact(k, phis, cfg, part="ratio").value
    g1 = exact.amplitude_exact(k, phis, cfg, big, part="ratio").value
    yield Check("exact", "truncation_stability", float(np.abs(g0 - g1).max() / np.abs(g0).max()), 1e-8)


def _quasi_checks(cfg: VortexConfig, k: float):
    if cfg.eta >= 0.5:
        return
    tot = quasi.sigma_integrated("total", cfg)
    cls = geometry.sigma_classical_totals(cfg.geom, cfg.tube).sigma_total
    yield Check("quasi", "doubling", abs(tot - 2.0 * cls), 1e-15)
    vals = {quasi.sigma_integrated("total", cfg.with_flux(v)) for v in (0.0, 0.3, 0.5)}
    yield Check("quasi", "flux_invariance", 0.0 if len(vals) == 1 else 1.0, 0.5)

    mode = "euclid" if cfg.eta == 0.0 else "cone"
    res = quasi.optical_residual(100.0 / cfg.r_c, cfg, mode).residual
    yield Check("quasi", "optical_residual", res, 0.05)

    krc = k * cfg.r_c
    win = 0.99 / (krc * (1 - cfg.eta))
    phi = np.linspace(-win, win, 33)
    worst = 0.0
    for spin in (quasi.SpinKind.SPINLESS, quasi.SpinKind.UNPOLARIZED):
        s = quasi.gate_function(phi, quasi.GateSpec("even", spin), cfg, k) + \
            quasi.gate_function(phi, quasi.GateSpec("odd", spin), cfg, k)
        worst = max(worst, float(np.abs(s - 2.0).max()))
    yield Check("quasi", "semifluxon_rule", worst, 1e-14)

    if 0.0 < cfg.eta < 0.5:
        kq = 1000.0 / cfg.r_c
        ref = 2 * cfg.r_c * (1 - cfg.eta) ** 2 * math.sin(0.5 * cfg.eta * math.pi)
        base = VortexConfig(cfg.geom, cfg.tube, 0.0)
        on = quasi.dsigma_analytic(0.0, "qclass_double_image", base, kq)
        off = quasi.dsigma_analytic(0.0, "qclass_double_image", base.with_flux(0.5), kq)
        yield Check("quasi", "forward_integer_flux", abs(on - ref) / ref, 1e-12)
        yield Check("quasi", "forward_halfodd_flux", off / cfg.r_c, 1e-6)
        w = 0.99 / (1000.0 * (1 - cfg.eta))
        p = np.linspace(-w, w, 41)
        a = quasi.dsigma_analytic(p, "forward_window", cfg, kq)
        b = np.abs(quasi.f_qclass(kq, p, cfg)) ** 2
        yield Check("quasi", "forward_window_consistency", float(np.abs(a - b).max() / np.abs(b).max()), 0.01)


def run_suites(eta: float, flux_ratio: float, spin: int | None, k_rc: float,
               r_c: float = 1.0, xi_c: float | None = None, suite: str = "all") -> list[Check]:
    """Run the selected suite(s) at one physical parameter point."""
    cfg = VortexConfig(ConeGeometry(eta), TubeSpec(r_c, xi_c), flux_ratio, spin)
    k = k_rc / r_c
    wanted = SUITE_NAMES if suite == "all" else (suite,)
    checks: list[Check] = []
    if "specfun" in wanted:
        checks.extend(_spec_checks())
    if "geometry" in wanted:
        checks.extend(_geometry_checks(cfg))
    if "exact" in wanted:
        checks.extend(_exact_checks(cfg, k))
    if "quasi" in wanted:
        checks.extend(_quasi_checks(cfg, k))
    return checks
