"""Command-line interface: `searchlight <command> [scenario] [options]`.

Commands:
    plan       Write allocation snapshots (`plan.csv`) and a summary (`plan.json`).
    curves     Write the detection curves (`curves.csv`).
    compare    Write the composite-prior against composite-plan series (`compare.csv`).
    mean-time  Write μ and μ# (`mean_time.json`).
    examples   Run the built-in check suite; write `examples/*.csv` and `report.json`.

Exit codes: 0 on success, 1 when a suite check fails, 2 on an invalid scenario,
3 on numeric non-convergence, 4 on a divergent mean time without `--allow-divergent`.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import logging
import os
import pathlib
import sys
import typing as t

import inflection

from searchlight import constants, errors, marshals, scenario, serdes, suite, tables
from searchlight.py import compat

__all__ = ("main", "run", "ExitCode", "COMMANDS")

logger = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    OK = 0
    SUITE_FAILED = 1
    INVALID = 2
    NOT_CONVERGED = 3
    DIVERGENT = 4


@dataclasses.dataclass(frozen=True, slots=True)
class Options:
    out: pathlib.Path
    moment_matched: bool = False
    seed: int | None = None
    allow_divergent: bool = False
    workers: int = 1


CommandFn: t.TypeAlias = t.Callable[["scenario.ScenarioConfig | None", Options], ExitCode]
COMMANDS: dict[str, CommandFn] = {}


def _command(func: CommandFn) -> CommandFn:
    COMMANDS[inflection.dasherize(func.__name__.removeprefix("_"))] = func
    return func


def run(
    command: str,
    config: scenario.ScenarioConfig | None,
    *,
    out: str | os.PathLike | None = None,
    moment_matched: bool = False,
    seed: int | None = None,
    allow_divergent: bool = False,
    workers: int = 1,
) -> int:
    """Run one command against a loaded scenario and return its exit code.

    Domain and numeric errors are reported through the log and mapped to exit codes;
    anything else propagates.
    """
    if command not in COMMANDS:
        raise ValueError(f"Unknown command {command!r}; expected one of {tuple(COMMANDS)}")
    if config is None and command != "examples":
        raise ValueError(f"The {command!r} command needs a scenario")
    options = Options(
        out=_output_dir(out),
        moment_matched=moment_matched,
        seed=seed,
        allow_divergent=allow_divergent,
        workers=workers,
    )
    try:
        return int(COMMANDS[command](config, options))
    except errors.ConvergenceError as e:
        logger.error("Numeric solve did not converge: %s", e)
        return ExitCode.NOT_CONVERGED
    except (errors.ValidationError, errors.ScenarioError, errors.SpaceMismatchError) as e:
        logger.error("Invalid scenario: %s", e)
        return ExitCode.INVALID


def _output_dir(out: str | os.PathLike | None) -> pathlib.Path:
    if out is None:
        out = os.environ.get(constants.OUTPUT_DIR_ENV, constants.DEFAULT_OUTPUT_DIR)
    return pathlib.Path(out)


def _write_json(path: pathlib.Path, value: t.Any) -> None:
    serdes.write_bytes(path, compat.dumps(marshals.marshal(value)))
    logger.info("Wrote %s", path)


@_command
def _plan(config, options) -> ExitCode:
    plan = scenario.build_plan(config)
    tables.plan_table(config, plan).write(options.out / "plan.csv")
    _write_json(options.out / "plan.json", tables.plan_summary(config, plan))
    return ExitCode.OK


@_command
def _curves(config, options) -> ExitCode:
    table = tables.curves_table(config, workers=options.workers)
    table.write(options.out / "curves.csv")
    logger.info("Wrote %s (%d samples)", options.out / "curves.csv", len(table.rows))
    return ExitCode.OK


@_command
def _compare(config, options) -> ExitCode:
    try:
        table = tables.compare_table(
            config,
            moment_matched=options.moment_matched or config.moment_matched,
            workers=options.workers,
        )
    except ValueError as e:
        if isinstance(e, errors.SearchlightError):
            raise
        logger.error("%s", e)
        return ExitCode.INVALID
    table.write(options.out / "compare.csv")
    return ExitCode.OK


@_command
def _mean_time(config, options) -> ExitCode:
    summary = tables.mean_times(config)
    _write_json(options.out / "mean_time.json", {"scenario": config.name, **summary})
    divergent = [name for name, value in summary.items() if value.divergent]
    if divergent and not options.allow_divergent:
        logger.error("Divergent mean time for %s; pass --allow-divergent to accept", divergent)
        return ExitCode.DIVERGENT
    return ExitCode.OK


@_command
def _examples(config, options) -> ExitCode:
    report = suite.run_suite(
        options.out / "examples", seed=options.seed, workers=options.workers
    )
    _write_json(
        options.out / "report.json",
        {"passed": report.passed, "checks": list(report.results)},
    )
    for failure in report.failures:
        logger.error("Check %s failed: %s", failure.name, failure.detail)
    return ExitCode.OK if report.passed else ExitCode.SUITE_FAILED


def parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog=constants.PKG_NAME,
        description="Optimal search plans and their detection probabilities.",
    )
    root.add_argument("command", choices=tuple(COMMANDS))
    root.add_argument(
        "scenario",
        nargs="?",
        help="A scenario JSON file or the name of a bundled scenario.",
    )
    root.add_argument(
        "--out",
        help=f"Output directory (default: ${constants.OUTPUT_DIR_ENV} or "
        f"{constants.DEFAULT_OUTPUT_DIR!r}).",
    )
    root.add_argument(
        "--paper-mode",
        "--moment-matched",
        dest="moment_matched",
        action="store_true",
        help="Moment-match all-Gaussian composite priors instead of mixing them exactly.",
    )
    root.add_argument("--seed", type=int, help="Override the scenario's Monte Carlo seed.")
    root.add_argument(
        "--allow-divergent",
        action="store_true",
        help="Exit 0 even when a mean time diverges.",
    )
    root.add_argument("--workers", type=int, default=1, help="Worker threads.")
    root.add_argument(
        "--log-level",
        default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
    )
    return root


def main(argv: t.Sequence[str] | None = None) -> int:
    args = parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    config = None
    if args.scenario is not None:
        try:
            config = scenario.load_scenario(args.scenario)
        except (errors.ScenarioError, errors.ValidationError) as e:
            logger.error("Invalid scenario: %s", e)
            return ExitCode.INVALID
    elif args.command != "examples":
        logger.error("The %r command needs a scenario", args.command)
        return ExitCode.INVALID
    if config is not None and args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return run(
        args.command,
        config,
        out=args.out,
        moment_matched=args.moment_matched,
        seed=args.seed,
        allow_divergent=args.allow_divergent,
        workers=args.workers,
    )


if __name__ == "__main__":
    sys.exit(main())
