"""Line-oriented ``key = value`` scenario files.

Blank lines and ``#`` comments are ignored; nested keys are dotted
(``phi_grid.count``).  Numeric values may be simple arithmetic in ``pi``,
e.g. ``phi_grid.lo = -pi/2``.  Unknown keys are rejected.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import asdict, dataclass, field, replace

from vortexwave.errors import ConfigError

__all__ = [
    "SCENARIOS",
    "SPINS",
    "SWEEPABLE",
    "GridSpec",
    "OutputSpec",
    "ScenarioConfig",
    "parse_config",
    "apply_overrides",
    "format_config",
]

SCENARIOS = ("classical", "exact", "quasi", "compare", "verify")
SPINS = ("none", "up", "down")
SWEEPABLE = ("eta", "flux_ratio", "k_rc")
SUITES = ("all", "specfun", "geometry", "exact", "quasi")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "e": math.e}


def _eval_number(text: str) -> float:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"not a number: {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"not a number: {text!r}")

    return ev(tree)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    v = _eval_number(text)
    if v != int(v):
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


def _parse_optional(conv):
    def inner(text):
        if text.strip().lower() in ("", "none", "default"):
            return None
        return conv(text)
    return inner


def _parse_list(text: str) -> tuple[float, ...]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(_eval_number(s) for s in items)


@dataclass(frozen=True)
class GridSpec:
    count: int = 721
    lo: float = -math.pi
    hi: float = math.pi
    mask_peaks: bool | None = None  # None: on for compare, off otherwise


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "exact"
    eta: float = 0.0
    flux_ratio: float = 0.0
    spin: str = "none"
    k_rc: float = 10.0
    r_c: float = 1.0
    xi_c: float | None = None
    radius: float | None = None  # r / r_c for wave-function columns
    tol: float = 1e-15
    term_budget: int | None = None
    suite: str = "all"
    phi_grid: GridSpec = field(default_factory=GridSpec)
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = ()
    output: OutputSpec = field(default_factory=OutputSpec)

    @property
    def k(self) -> float:
        return self.k_rc / self.r_c

    @property
    def resolved_xi_c(self) -> float:
        return self.r_c if self.xi_c is None else self.xi_c

    @property
    def resolved_mask(self) -> bool:
        if self.phi_grid.mask_peaks is None:
            return self.scenario == "compare"
        return self.phi_grid.mask_peaks

    def to_dict(self) -> dict:
        """Fully resolved settings, defaults included."""
        d = asdict(self)
        d["xi_c"] = self.resolved_xi_c
        d["phi_grid"]["mask_peaks"] = self.resolved_mask
        d["sweep_values"] = list(self.sweep_values)
        return d


# key -> (converter, setter)
def _top(name):
    return lambda cfg, v: replace(cfg, **{name: v})


def _grid(name):
    return lambda cfg, v: replace(cfg, phi_grid=replace(cfg.phi_grid, **{name: v}))


def _out(name):
    return lambda cfg, v: replace(cfg, output=replace(cfg.output, **{name: v}))


def _lower(text):
    return text.strip().lower()


_KEYS = {
    "scenario": (_lower, _top("scenario")),
    "eta": (_eval_number, _top("eta")),
    "flux_ratio": (_eval_number, _top("flux_ratio")),
    "spin": (_lower, _top("spin")),
    "k_rc": (_eval_number, _top("k_rc")),
    "r_c": (_eval_number, _top("r_c")),
    "xi_c": (_parse_optional(_eval_number), _top("xi_c")),
    "radius": (_parse_optional(_eval_number), _top("radius")),
    "tol": (_eval_number, _top("tol")),
    "term_budget": (_parse_optional(_parse_int), _top("term_budget")),
    "suite": (_lower, _top("suite")),
    "phi_grid.count": (_parse_int, _grid("count")),
    "phi_grid.lo": (_eval_number, _grid("lo")),
    "phi_grid.hi": (_eval_number, _grid("hi")),
    "phi_grid.mask_peaks": (_parse_optional(_parse_bool), _grid("mask_peaks")),
    "sweep.param": (_parse_optional(_lower), _top("sweep_param")),
    "sweep.values": (_parse_list, _top("sweep_values")),
    "output.format": (_lower, _out("format")),
    "output.path": (_parse_optional(str.strip), _out("path")),
}


def _assign(cfg, key, raw, line=None):
    key = key.strip()
    if key not in _KEYS:
        raise ConfigError(f"unknown key {key!r}", line)
    conv, setter = _KEYS[key]
    try:
        value = conv(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}", line) from None
    return setter(cfg, value)


def _validate_point(cfg: ScenarioConfig, eta: float, k_rc: float, flux: float):
    if not math.isfinite(eta) or eta >= 1.0:
        raise ConfigError("eta must be < 1")
    if eta >= 0.5 and cfg.scenario in ("quasi", "compare"):
        raise ConfigError("quasiclassical formulas require eta < 1/2")
    if eta >= 0.5 and cfg.scenario == "classical":
        raise ConfigError("classical formulas require eta < 1/2")
    if not (math.isfinite(k_rc) and k_rc > 0):
        raise ConfigError("k_rc must be > 0")
    if not math.isfinite(flux):
        raise ConfigError("flux_ratio must be finite")


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {', '.join(SCENARIOS)}")
    if cfg.spin not in SPINS:
        raise ConfigError(f"spin must be one of {', '.join(SPINS)}")
    if cfg.suite not in SUITES:
        raise ConfigError(f"suite must be one of {', '.join(SUITES)}")
    if not (math.isfinite(cfg.r_c) and cfg.r_c > 0):
        raise ConfigError("r_c must be > 0")
    if cfg.xi_c is not None and not (math.isfinite(cfg.xi_c) and cfg.xi_c > 0):
        raise ConfigError("xi_c must be > 0")
    if cfg.radius is not None and not cfg.radius >= 1.0:
        raise ConfigError("radius (in units of r_c) must be >= 1")
    if not 0 < cfg.tol < 1:
        raise ConfigError("tol must lie in (0, 1)")
    if cfg.term_budget is not None and cfg.term_budget < 1:
        raise ConfigError("term_budget must be >= 1")
    g = cfg.phi_grid
    if g.count < 2:
        raise ConfigError("phi_grid.count must be >= 2")
    if not (math.isfinite(g.lo) and math.isfinite(g.hi) and g.lo < g.hi):
        raise ConfigError("phi_grid.lo must be < phi_grid.hi")
    if cfg.output.format not in ("csv", "json"):
        raise ConfigError("output.format must be csv or json")
    if (cfg.sweep_param is None) != (len(cfg.sweep_values) == 0):
        raise ConfigError("sweep.param and sweep.values must be given together")
    if cfg.sweep_param is not None and cfg.sweep_param not in SWEEPABLE:
        raise ConfigError(f"sweep.param must be one of {', '.join(SWEEPABLE)}")
    points = [(cfg.eta, cfg.k_rc, cfg.flux_ratio)]
    for v in cfg.sweep_values:
        point = {"eta": cfg.eta, "k_rc": cfg.k_rc, "flux_ratio": cfg.flux_ratio}
        point[cfg.sweep_param] = v
        points.append((point["eta"], point["k_rc"], point["flux_ratio"]))
    for eta, k_rc, flux in points:
        _validate_point(cfg, eta, k_rc, flux)
    return cfg


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document."""
    cfg = ScenarioConfig()
    seen = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", lineno)
        key, raw = body.split("=", 1)
        key = key.strip()
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        cfg = _assign(cfg, key, raw, lineno)
    return validate(cfg)


def apply_overrides(cfg: ScenarioConfig, pairs) -> ScenarioConfig:
    """Apply ``key=value`` command-line overrides and re-validate."""
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} is not key=value")
        key, raw = pair.split("=", 1)
        cfg = _assign(cfg, key, raw)
    return validate(cfg)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_config(cfg: ScenarioConfig) -> str:
    """Serialise a config so that ``parse_config`` gives it back unchanged."""
    lines = [
        f"scenario = {cfg.scenario}",
        f"eta = {_fmt(cfg.eta)}",
        f"flux_ratio = {_fmt(cfg.flux_ratio)}",
        f"spin = {cfg.spin}",
        f"k_rc = {_fmt(cfg.k_rc)}",
        f"r_c = {_fmt(cfg.r_c)}",
        f"xi_c = {_fmt(cfg.xi_c)}",
        f"radius = {_fmt(cfg.radius)}",
        f"tol = {_fmt(cfg.tol)}",
        f"term_budget = {_fmt(cfg.term_budget)}",
        f"suite = {cfg.suite}",
        f"phi_grid.count = {cfg.phi_grid.count}",
        f"phi_grid.lo = {_fmt(cfg.phi_grid.lo)}",
        f"phi_grid.hi = {_fmt(cfg.phi_grid.hi)}",
        f"phi_grid.mask_peaks = {_fmt(cfg.phi_grid.mask_peaks)}",
        f"output.format = {cfg.output.format}",
        f"output.path = {_fmt(cfg.output.path)}",
    ]
    if cfg.sweep_param is not None:
        lines.append(f"sweep.param = {cfg.sweep_param}")
        lines.append("sweep.values = " + ", ".join(_fmt(float(v)) for v in cfg.sweep_values))
    return "\n".join(lines) + "\n"
