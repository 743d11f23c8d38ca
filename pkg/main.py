"""Main entry point for debias-ate."""
import logging
import argparse
import sys

from pydantic import ValidationError

from config import settings, ensure_directories
from utils.errors import exit_code_for

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _split(value: str):
    return [item.strip() for item in value.split(",") if item.strip()]


def _add_inference_flags(parser, default_flavors: str, default_ci: str):
    parser.add_argument('--flavors', default=default_flavors,
                        help='Comma-separated variance flavors: hc2,hc3,bc-hc2,bc-hc3')
    parser.add_argument('--ci', default=default_ci,
                        help='Comma-separated interval modes: z,t,satterthwaite')
    parser.add_argument('--level', type=float, default=None, help='Confidence level')
    parser.add_argument('--t-df', choices=['units', 'residual'], default=None,
                        help='Student-t degrees of freedom: n-1 (units) or n-rank(X) (residual)')
    parser.add_argument('--out', default=None, help='Output file (relative paths go under OUTPUT_DIR)')
    parser.add_argument('--format', choices=['json', 'csv'], default='json', help='Output file format')


def _add_scheme_flags(parser):
    parser.add_argument('--scheme', type=int, default=1, help='Covariate scheme 1-4')
    parser.add_argument('--variant', type=int, default=1, help='Outcome variant 1-3')
    parser.add_argument('--n', type=int, default=24, help='Population size')
    parser.add_argument('--n-treated', type=int, default=None, help='Treated units (default n/3)')
    parser.add_argument('--leverage-intercept', action='store_true',
                        help='Add an intercept column before computing raw leverages')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="debias-ate - exact bias corrections for regression-adjusted ATE estimators"
    )
    commands = parser.add_subparsers(dest='command', required=True)

    estimate = commands.add_parser('estimate', help='Analyze a CSV dataset')
    estimate.add_argument('input', help='CSV file with a header row')
    estimate.add_argument('--y-col', default='y')
    estimate.add_argument('--t-col', default='t')
    estimate.add_argument('--z-cols', default=None, help='Comma-separated covariate columns')
    _add_inference_flags(estimate, settings.DEFAULT_FLAVORS, settings.DEFAULT_CI)

    simulate = commands.add_parser('simulate', help='Randomization distribution of a simulation scheme')
    _add_scheme_flags(simulate)
    simulate.add_argument('--mode', choices=['exact', 'mc'], default='exact')
    simulate.add_argument('--reps', type=int, default=None)
    simulate.add_argument('--seed', type=int, default=None)
    simulate.add_argument('--threads', type=int, default=None, help='Worker processes (1 = serial)')
    simulate.add_argument('--budget', type=int, default=None, help='Largest space exact mode enumerates')
    simulate.add_argument('--skip-singular', action='store_true',
                          help='Exclude assignments with singular fits instead of aborting')
    simulate.add_argument('--dump-assignments', default=None, help='Per-assignment CSV path')
    simulate.add_argument('--table', choices=['main', 'ci'], default='main')
    simulate.add_argument('--compare', action='store_true',
                          help='Report rows that differ from the published n=24 values')
    _add_inference_flags(simulate, 'hc2,bc-hc2', 'z,t,satterthwaite')

    dump = commands.add_parser('dump-dgp', help='Write a generated population as CSV')
    _add_scheme_flags(dump)
    dump.add_argument('--out', default=None)

    verify = commands.add_parser('verify', help='Run the identity suite')
    verify.add_argument('--sizes', default='8,10,12', help='Population sizes for the unbiasedness checks')
    verify.add_argument('--fault', default=None, help=argparse.SUPPRESS)

    runs = commands.add_parser('runs', help='List recorded simulation runs')
    runs.add_argument('--clear', action='store_true', help='Delete all recorded runs')
    runs.add_argument('--limit', type=int, default=20)

    return parser


def config_from_args(args: argparse.Namespace):
    """Merge parsed flags over settings into a validated RunConfig."""
    from cli import RunConfig

    values = {k: v for k, v in vars(args).items() if v is not None}
    values['command'] = args.command
    for key in ('flavors', 'ci', 'z_cols'):
        if key in values:
            values[key] = _split(values[key])
    if 'sizes' in values:
        values['sizes'] = [int(s) for s in _split(values['sizes'])]
    if args.command == 'simulate' and values.get('mode') == 'mc':
        values.setdefault('reps', settings.MC_REPS)
        values.setdefault('seed', settings.SEED)
    return RunConfig(**values)


def run(config) -> int:
    """Dispatch one command and print its rendering."""
    from cli import (
        cmd_compare,
        cmd_dump_dgp,
        cmd_estimate,
        cmd_runs,
        cmd_simulate,
        cmd_verify,
        render_ci_table,
        render_comparison,
        render_estimate,
        render_runs,
        render_summary,
    )

    if config.command == 'estimate':
        print(render_estimate(cmd_estimate(config)))
    elif config.command == 'simulate':
        summary = cmd_simulate(config)
        label = f"DGP{config.scheme}.{config.variant}"
        render = render_ci_table if config.table == 'ci' else render_summary
        print(render(summary, label))
        if config.compare:
            for title, frame in cmd_compare(config, summary):
                print()
                print(render_comparison(frame, title))
    elif config.command == 'dump-dgp':
        frame = cmd_dump_dgp(config)
        if not config.out:
            print(frame.to_csv(index=False, float_format="%.17g"), end="")
    elif config.command == 'verify':
        cmd_verify(config)
    elif config.command == 'runs':
        result = cmd_runs(config)
        if config.clear:
            print(f"Cleared {result} runs")
        else:
            print(render_runs(result))
    return 0


def main(argv=None) -> int:
    """Main entry point with argument parsing."""
    args = build_parser().parse_args(argv)
    try:
        ensure_directories()
        config = config_from_args(args)
        return run(config)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return 2
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
