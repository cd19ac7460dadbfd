"""Command-line entry point ``vortexwave``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from vortexwave import __version__, specfun
from vortexwave.cli.config import SUITES, apply_overrides, parse_config
from vortexwave.cli.emit import to_csv, to_json, write_output
from vortexwave.cli.runner import LABELS, run_scenario
from vortexwave.cli.verify import run_suites
from vortexwave.errors import ConfigError, VortexwaveError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

CANONICAL = ("euclid-tube", "euclid-halfflux", "shadow", "double-image", "spin-gate")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def canonical_text(name: str) -> str:
    """Text of a shipped canonical config."""
    return resources.files("vortexwave.cli").joinpath("configs", f"{name}.cfg").read_text("utf-8")


def _threads(arg) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("VORTEXWAVE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"VORTEXWAVE_THREADS must be an integer, got {env!r}") from None
    return 1


def _cmd_run(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    overrides = list(args.set or [])
    if args.format:
        overrides.append(f"output.format={args.format}")
    if args.out:
        overrides.append(f"output.path={args.out}")
    cfg = apply_overrides(cfg, overrides)
    result = run_scenario(cfg, _threads(args.threads))
    if cfg.output.format == "json":
        text = to_json(result, cfg.to_dict(), __version__, LABELS)
    else:
        text = to_csv(result)
    write_output(text, cfg.output.path, sys.stdout)
    return EXIT_NUMERIC if result.failed else EXIT_OK


def _cmd_verify(args) -> int:
    suite = args.suite or "all"
    failures = 0
    report = {}
    for name in CANONICAL:
        cfg = parse_config(canonical_text(name))
        spin = {"none": None, "up": 1, "down": -1}[cfg.spin]
        # suites independent of the physical point run once
        wanted = [s for s in ("geometry", "exact", "quasi") if suite in ("all", s)]
        checks = []
        for s in wanted:
            checks.extend(run_suites(cfg.eta, cfg.flux_ratio, spin, cfg.k_rc, cfg.r_c, cfg.xi_c, s))
        report[name] = {f"{c.suite}.{c.name}": c.as_dict() for c in checks}
        failures += sum(not c.passed for c in checks)
    if suite in ("all", "specfun"):
        checks = run_suites(0.0, 0.0, None, 1.0, suite="specfun")
        report["specfun"] = {f"{c.suite}.{c.name}": c.as_dict() for c in checks}
        failures += sum(not c.passed for c in checks)
    for group, checks in report.items():
        for key, c in checks.items():
            print(f"{group:16s} {key:36s} {c['status']:4s} value={c['value']:.3e} threshold={c['threshold']:.1e}")
    doc = {"version": __version__, "failures": failures, "report": report}
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    print("verify: " + ("all checks passed" if failures == 0 else f"{failures} check(s) failed"))
    return EXIT_OK if failures == 0 else EXIT_NUMERIC


def _cmd_oracle(args) -> int:
    nu, x = args.nu, args.x
    rows = [
        ("J", specfun.bessel_j(nu, x)),
        ("Y", specfun.bessel_y(nu, x)),
        ("J/H1", specfun.jh_ratio(nu, x)),
        ("wronskian_residual", specfun.wronskian_residual(nu, x)),
    ]
    for name, v in rows:
        if isinstance(v, complex):
            print(f"{name} = {v.real:.17g} {v.imag:+.17g}i")
        else:
            print(f"{name} = {v:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vortexwave", description="Scattering off a hard magnetic vortex in conical space.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a scenario file and emit a table")
    r.add_argument("config", help="scenario file (key = value lines)")
    r.add_argument("--out", help="output path (default: stdout)")
    r.add_argument("--format", choices=("csv", "json"))
    r.add_argument("--threads", type=int, help="worker threads (default: $VORTEXWAVE_THREADS or 1)")
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    r.set_defaults(func=_cmd_run)

    v = sub.add_parser("verify", help="run the invariant suites on the canonical configs")
    v.add_argument("--suite", choices=SUITES)
    v.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="print Bessel values for one (order, argument)")
    o.add_argument("nu", type=float)
    o.add_argument("x", type=float)
    o.set_defaults(func=_cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"vortexwave: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"vortexwave: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (VortexwaveError, ValueError) as exc:
        print(f"vortexwave: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
