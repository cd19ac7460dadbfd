"""Scenario execution: builds result tables and reports from a ScenarioConfig."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from vortexwave import exact, geometry, quasi
from vortexwave.cli.config import ScenarioConfig
from vortexwave.cli.verify import run_suites
from vortexwave.errors import SingularityError, VortexwaveError
from vortexwave.exact import TruncationPolicy, VortexConfig
from vortexwave.geometry import ConeGeometry, Half, Region, TubeSpec

__all__ = ["RunResult", "ScenarioError", "run_scenario", "LABELS"]

# Closed vocabulary for the provenance column.
LABELS = (
    "classical",
    "exact_series",
    "quasi_outside",
    "quasi_shadow",
    "quasi_double_image",
    "compare",
    "verify",
)

_BLOCK = 64  # fixed grid block size, independent of thread count


class ScenarioError(VortexwaveError):
    """A module error annotated with the scenario that raised it."""


@dataclass
class RunResult:
    columns: list[str]
    rows: list[dict]
    report: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.report.get("all_pass") is False


def _spin(cfg: ScenarioConfig):
    return {"none": None, "up": 1, "down": -1}[cfg.spin]


def _vortex(cfg: ScenarioConfig) -> VortexConfig:
    return VortexConfig(
        ConeGeometry(cfg.eta), TubeSpec(cfg.r_c, cfg.xi_c), cfg.flux_ratio, _spin(cfg)
    )


def _grid(cfg: ScenarioConfig) -> np.ndarray:
    g = cfg.phi_grid
    return np.linspace(g.lo, g.hi, g.count)


def _blocks(phi: np.ndarray, fn, threads: int) -> list:
    """Apply ``fn`` to fixed-size blocks of the grid, in order."""
    chunks = [phi[i:i + _BLOCK] for i in range(0, phi.size, _BLOCK)]
    if threads <= 1 or len(chunks) == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, chunks))
    out = []
    for part in parts:
        out.extend(part)
    return out


def _classical(cfg: ScenarioConfig, threads: int) -> RunResult:
    v = _vortex(cfg)
    geom, tube = v.geom, v.tube

    def branch(p, mode):
        try:
            return geometry.dsigma_classical(p, geom, tube, mode).value
        except VortexwaveError:
            return None

    def rows(block):
        out = []
        for p in block:
            p = float(p)
            res = geometry.dsigma_classical(p, geom, tube)
            out.append({
                "phi": p,
                "region": res.region.value,
                "dsigma_upper": branch(p, Half.UPPER),
                "dsigma_lower": branch(p, Half.LOWER),
                "dsigma": res.value,
                "label": "classical",
            })
        return out

    closed = geometry.sigma_classical_totals(geom, tube)
    numeric = geometry.sigma_classical_quadrature(geom, tube)
    report = {
        "sigma_total": closed.sigma_total,
        "sigma_out": closed.sigma_out,
        "sigma_in": closed.sigma_in,
        "sigma_total_quadrature": numeric.sigma_total,
    }
    cols = ["phi", "region", "dsigma_upper", "dsigma_lower", "dsigma", "label"]
    return RunResult(cols, _blocks(_grid(cfg), rows, threads), report)


def _trunc(cfg: ScenarioConfig) -> TruncationPolicy:
    if cfg.term_budget is None:
        return TruncationPolicy(tol=cfg.tol)
    return TruncationPolicy(tol=cfg.tol, max_terms=cfg.term_budget)


def _exact(cfg: ScenarioConfig, threads: int) -> RunResult:
    v = _vortex(cfg)
    k = cfg.k
    trunc = _trunc(cfg)
    mask = cfg.resolved_mask
    radius = None if cfg.radius is None else cfg.radius * cfg.r_c

    def rows(block):
        near = np.atleast_1d(exact.near_peak(block, k, v))
        ratio = np.atleast_1d(exact.amplitude_exact(k, block, v, trunc, part="ratio").value)
        psi = None
        if radius is not None:
            psi = np.atleast_1d(exact.wavefunction_exact(radius, block, k, v, trunc))
        out = []
        for i, p in enumerate(block):
            try:
                f = complex(ratio[i] + exact._global_phase(k, v.tube)
                            * exact.amplitude_zero_radius(k, float(p), v))
            except SingularityError:
                f = None
            hide = f is None or (mask and near[i])
            row = {
                "phi": float(p),
                "re_f": None if hide else f.real,
                "im_f": None if hide else f.imag,
                "abs_f2": None if hide else abs(f) ** 2,
                "near_peak": bool(near[i]),
            }
            if psi is not None:
                row["re_psi"] = float(psi[i].real)
                row["im_psi"] = float(psi[i].imag)
            row["label"] = "exact_series"
            out.append(row)
        return out

    pw = exact.partial_waves(k, v, trunc)
    oc = exact.optical_theorem_exact(k, v, trunc)
    report = {
        "terms": int(pw.n.size),
        "truncation_error": pw.error,
        "optical_lhs": oc.lhs,
        "sigma_quadrature": oc.sigma_quadrature,
        "sigma_unitarity": oc.sigma_unitarity,
        "optical_residual": oc.residual,
    }
    cols = ["phi", "re_f", "im_f", "abs_f2", "near_peak"]
    if radius is not None:
        cols += ["re_psi", "im_psi"]
    return RunResult(cols + ["label"], _blocks(_grid(cfg), rows, threads), report)


def _gate_spin(cfg: ScenarioConfig):
    if cfg.spin == "none":
        return quasi.SpinKind.SPINLESS, None
    return quasi.SpinKind.POLARIZED, _spin(cfg)


def _quasi(cfg: ScenarioConfig, threads: int) -> RunResult:
    v = _vortex(cfg)
    k = cfg.k
    krc = cfg.k_rc
    eta = cfg.eta
    kind, sigma = _gate_spin(cfg)
    even = quasi.GateSpec(quasi.Parity.EVEN, kind, sigma)
    odd = quasi.GateSpec(quasi.Parity.ODD, kind, sigma)
    mask = cfg.resolved_mask

    def rows(block):
        d = quasi.compose_quasiclassical(k, block, v)
        near = np.atleast_1d(exact.near_peak(block, k, v))
        pp = quasi.dsigma_analytic(block, "peak_plus", v, k)
        pm = quasi.dsigma_analytic(block, "peak_minus", v, k)
        out = []
        for i, p in enumerate(block):
            p = float(p)
            region = geometry.classify_angle(p, v.geom)
            if region is Region.DOUBLE_IMAGE:
                ds = quasi.dsigma_analytic(p, "qclass_double_image", v, k)
                label = "quasi_double_image"
            else:
                ds = quasi.dsigma_analytic(p, "qclass_outside", v, k)
                label = "quasi_shadow" if region is Region.SHADOW else "quasi_outside"
            in_gate = (1 - eta) * abs(geometry.reduce_angle(p)) < 1.0 / krc
            hide = mask and near[i]
            fp, fm, fq = (np.atleast_1d(x)[i] for x in (d.f_peak_plus, d.f_peak_minus, d.f_qclass))
            tot = fp + fm + fq
            out.append({
                "phi": p,
                "region": region.value,
                "re_f_plus": None if hide else fp.real,
                "im_f_plus": None if hide else fp.imag,
                "re_f_minus": None if hide else fm.real,
                "im_f_minus": None if hide else fm.imag,
                "re_f_qclass": fq.real,
                "im_f_qclass": fq.imag,
                "abs_f2": None if hide else abs(tot) ** 2,
                "dsigma_qclass": ds,
                "dsigma_peak_plus": None if hide else float(np.atleast_1d(pp)[i]),
                "dsigma_peak_minus": None if hide else float(np.atleast_1d(pm)[i]),
                "gate_even": quasi.gate_function(geometry.reduce_angle(p), even, v, k) if in_gate else None,
                "gate_odd": quasi.gate_function(geometry.reduce_angle(p), odd, v, k) if in_gate else None,
                "label": label,
            })
        return out

    mode = "euclid" if eta == 0.0 else "cone"
    opt = quasi.optical_residual(k, v, mode)
    report = {c.value: quasi.sigma_integrated(c, v) for c in quasi.IntegratedChannel}
    report.update({
        "optical_lhs": opt.lhs,
        "optical_residual": opt.residual,
        "remainder_bound": math.sqrt(cfg.r_c) * krc ** (-1.0 / 6.0),
    })
    cols = ["phi", "region", "re_f_plus", "im_f_plus", "re_f_minus", "im_f_minus",
            "re_f_qclass", "im_f_qclass", "abs_f2", "dsigma_qclass", "dsigma_peak_plus",
            "dsigma_peak_minus", "gate_even", "gate_odd", "label"]
    return RunResult(cols, _blocks(_grid(cfg), rows, threads), report)


def _compare(cfg: ScenarioConfig, threads: int) -> RunResult:
    v = _vortex(cfg)
    k = cfg.k
    trunc = _trunc(cfg)
    mask = cfg.resolved_mask

    def rows(block):
        try:
            t = quasi.compare_with_exact(k, block, v, mask, trunc)
            ex, rel = t.exact, t.rel_error
        except SingularityError:
            # unmasked grid hitting a peak exactly: fall back point by point
            ex = np.empty(block.size)
            for i, p in enumerate(block):
                try:
                    ex[i] = abs(exact.amplitude_exact(k, p, v, trunc).value) ** 2
                except SingularityError:
                    ex[i] = np.nan
            t = quasi.compare_with_exact(k, block, v, True, trunc)._replace(exact=ex)
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.abs(ex - t.quasi) / ex
        out = []
        for i, p in enumerate(block):
            e, r = ex[i], rel[i]
            out.append({
                "phi": float(p),
                "exact_abs_f2": None if not np.isfinite(e) else float(e),
                "quasi_abs_f2": float(t.quasi[i]),
                "rel_error": None if not np.isfinite(r) else float(r),
                "masked": bool(t.masked[i]),
                "label": "compare",
            })
        return out

    rows_out = _blocks(_grid(cfg), rows, threads)
    errs = [r["rel_error"] for r in rows_out if r["rel_error"] is not None]
    report = {"max_rel_error": max(errs) if errs else None, "points_compared": len(errs)}
    cols = ["phi", "exact_abs_f2", "quasi_abs_f2", "rel_error", "masked", "label"]
    return RunResult(cols, rows_out, report)


def _verify(cfg: ScenarioConfig, threads: int) -> RunResult:
    checks = run_suites(cfg.eta, cfg.flux_ratio, _spin(cfg), cfg.k_rc, cfg.r_c, cfg.xi_c, cfg.suite)
    rows = [dict(c.as_dict(), label="verify") for c in checks]
    report = {
        "checks": {f"{c.suite}.{c.name}": "pass" if c.passed else "fail" for c in checks},
        "all_pass": all(c.passed for c in checks),
    }
    return RunResult(["suite", "check", "value", "threshold", "status", "label"], rows, report)


_RUNNERS = {
    "classical": _classical,
    "exact": _exact,
    "quasi": _quasi,
    "compare": _compare,
    "verify": _verify,
}


def _run_one(cfg: ScenarioConfig, threads: int) -> RunResult:
    try:
        return _RUNNERS[cfg.scenario](cfg, threads)
    except VortexwaveError as exc:
        raise ScenarioError(
            f"{cfg.scenario} scenario (eta={cfg.eta}, flux_ratio={cfg.flux_ratio}, "
            f"k_rc={cfg.k_rc}): {exc}"
        ) from exc


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> RunResult:
    """Run a scenario, or each point of its sweep, concatenating the rows."""
    if cfg.sweep_param is None:
        return _run_one(cfg, threads)
    columns, rows, reports = None, [], []
    for value in cfg.sweep_values:
        point = replace(cfg, **{cfg.sweep_param: float(value)}, sweep_param=None, sweep_values=())
        res = _run_one(point, threads)
        if columns is None:
            columns = res.columns[:1] + ["sweep_value"] + res.columns[1:]
        rows.extend(dict(r, sweep_value=float(value)) for r in res.rows)
        reports.append(dict(res.report, sweep_value=float(value)))
    report = {"sweep_param": cfg.sweep_param, "points": reports}
    if any("all_pass" in r for r in reports):
        report["all_pass"] = all(r.get("all_pass", True) for r in reports)
    return RunResult(columns, rows, report)
