"""Command-line front end."""
from cli.config import RunConfig
from cli.commands import cmd_compare, cmd_dump_dgp, cmd_estimate, cmd_runs, cmd_simulate, cmd_verify
from cli.report import (
    EstimateReport,
    EstimatorReport,
    render_ci_table,
    render_comparison,
    render_estimate,
    render_runs,
    render_summary,
    to_json,
)
from cli.verify import CheckResult, run_verification

__all__ = [
    "RunConfig",
    "cmd_compare", "cmd_dump_dgp", "cmd_estimate", "cmd_runs", "cmd_simulate", "cmd_verify",
    "EstimateReport", "EstimatorReport", "render_ci_table", "render_comparison", "render_estimate",
    "render_runs", "render_summary", "to_json",
    "CheckResult", "run_verification",
]
