"""Command-line front end: scenario files, runs, verification and emission."""

from vortexwave.cli.config import ScenarioConfig, parse_config
from vortexwave.cli.runner import RunResult, run_scenario

__all__ = ["ScenarioConfig", "RunResult", "parse_config", "run_scenario"]
