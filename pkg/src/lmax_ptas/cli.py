from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, NoReturn

from lmax_ptas._version import __version__
from lmax_ptas.config import SolverConfig, load_config
from lmax_ptas.core import (
    Infeasible,
    Instance,
    ScenarioSpec,
    Schedule,
    SearchStats,
    Time,
    Timeline,
    TimelineKind,
    format_time,
)
from lmax_ptas.errors import BadEpsilon, BadParams, GuessBudgetExceeded, LmaxPtasError
from lmax_ptas.instance_file import InstanceFile, Scenario, emit_instance, gen_random, parse_instance_file
from lmax_ptas.oracle import OracleResult, exact_lmax, exact_lmax_branch_bound, exact_pareto
from lmax_ptas.ptas_availability import ptas3, ptas4, unit_fraction
from lmax_ptas.ptas_deadline import ParetoSet, as_epsilon, coverage_ratio, ptas0, ptas1, ptas2

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_GUESS_BUDGET = 3
EXIT_SCHEMA = 4
EXIT_RATIO = 5

REPORT_COLUMNS = (
    "instance",
    "scenario",
    "epsilon",
    "n",
    "status",
    "algorithm_lmax",
    "algorithm_cmax",
    "oracle_lmax",
    "ratio",
    "ratio_decimal",
    "guesses",
    "wall_time_s",
)

_LOG = logging.getLogger("lmax-ptas")
_HANDLER_NAME = "lmax-ptas-stderr"


def configure_logging(*, verbose: bool = False) -> None:
    raw_level = (os.getenv("LMAX_PTAS_LOG_LEVEL") or "").strip().upper()
    if raw_level in {"", "0", "OFF", "NONE"}:
        level = logging.WARNING
    elif raw_level.isdigit():
        level = int(raw_level)
    else:
        level = {
            "CRITICAL": logging.CRITICAL,
            "ERROR": logging.ERROR,
            "WARN": logging.WARNING,
            "WARNING": logging.WARNING,
            "INFO": logging.INFO,
            "DEBUG": logging.DEBUG,
        }.get(raw_level, logging.WARNING)

    _LOG.setLevel(logging.DEBUG if verbose else level)
    if any(h.get_name() == _HANDLER_NAME for h in _LOG.handlers):
        return
    h = logging.StreamHandler(sys.stderr)
    h.set_name(_HANDLER_NAME)
    h.setFormatter(logging.Formatter("[lmax-ptas] %(levelname)s: %(message)s"))
    _LOG.addHandler(h)
    _LOG.propagate = False


class _ArgumentParser(argparse.ArgumentParser):
    # Bad arguments share the exit code of bad instance files.
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class ReportRow:
    instance: str
    scenario: str
    epsilon: Fraction
    n: int
    status: str
    algorithm_lmax: Time | None = None
    algorithm_cmax: Time | None = None
    oracle_lmax: Time | None = None
    ratio: Fraction | None = None
    guesses: int | None = None
    wall_time_s: float | None = None

    def cells(self) -> list[str]:
        def t(value: Time | None) -> str:
            return "" if value is None else format_time(value)

        return [
            self.instance,
            self.scenario,
            format_time(self.epsilon),
            str(self.n),
            self.status,
            t(self.algorithm_lmax),
            t(self.algorithm_cmax),
            t(self.oracle_lmax),
            t(self.ratio),
            "" if self.ratio is None else f"{float(self.ratio):.6f}",
            "" if self.guesses is None else str(self.guesses),
            "" if self.wall_time_s is None else f"{self.wall_time_s:.4f}",
        ]


@dataclass
class RunReport:
    rows: list[ReportRow]

    def write(self, stream: IO[str]) -> None:
        writer = csv.writer(stream, lineterminator="\r\n")
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow(row.cells())


def parse_epsilon(text: str, scenario: Scenario) -> Fraction:
    """Read ``a/b`` (or an integer) exactly; decimals only for the deadline-style scenarios."""
    text = text.strip()
    if scenario in (Scenario.MNA, Scenario.ONA):
        if any(ch in text for ch in ".eE"):
            raise BadEpsilon(f"epsilon for {scenario} must be a unit fraction like 1/2, got {text!r}")
        unit_fraction(text)
    return as_epsilon(text)


def _resolve_scenario(parsed: InstanceFile, requested: str | None) -> Scenario:
    if requested:
        return Scenario(requested)
    if parsed.timeline.has_window:
        return Scenario(str(parsed.timeline.kind))
    if parsed.deadline is not None:
        return Scenario.DEADLINE
    return Scenario.P0


def _resolve_spec(parsed: InstanceFile, scenario: Scenario, args: argparse.Namespace) -> ScenarioSpec:
    deadline = parsed.deadline if getattr(args, "deadline", None) is None else args.deadline
    if scenario is Scenario.DEADLINE:
        if deadline is None:
            raise BadParams("the deadline scenario needs a deadline (file or --deadline)")
        return ScenarioSpec(deadline=deadline)
    if scenario in (Scenario.MNA, Scenario.ONA):
        t1 = parsed.timeline.t1 if getattr(args, "t1", None) is None else args.t1
        t2 = parsed.timeline.t2 if getattr(args, "t2", None) is None else args.t2
        if t1 is None or t2 is None:
            raise BadParams(f"the {scenario} scenario needs a window (file or --t1/--t2)")
        if t1 > t2:
            raise BadParams(f"window start {t1} is after window end {t2}")
        return ScenarioSpec(Timeline(TimelineKind(str(scenario)), t1, t2))
    return ScenarioSpec()


def solve_scenario(
    instance: Instance,
    spec: ScenarioSpec,
    scenario: Scenario,
    epsilon: Fraction,
    *,
    guess_budget: int,
    stats: SearchStats | None = None,
) -> Schedule | Infeasible | ParetoSet:
    kwargs = {"guess_budget": guess_budget, "stats": stats}
    match scenario:
        case Scenario.P0:
            return ptas0(instance, epsilon, **kwargs)
        case Scenario.DEADLINE:
            return ptas1(instance, spec.deadline, epsilon, **kwargs)
        case Scenario.PARETO:
            return ptas2(instance, epsilon, **kwargs)
        case Scenario.MNA:
            return ptas3(instance, spec.timeline.t1, spec.timeline.t2, epsilon, **kwargs)
        case Scenario.ONA:
            return ptas4(instance, spec.timeline.t1, spec.timeline.t2, epsilon, **kwargs)
    raise BadParams(f"unknown scenario {scenario!r}")


def oracle_scenario(instance: Instance, spec: ScenarioSpec, scenario: Scenario, config: SolverConfig) -> OracleResult | ParetoSet:
    if scenario is Scenario.PARETO:
        return exact_pareto(instance, cap=config.oracle_cap)
    if scenario is Scenario.DEADLINE or instance.n <= config.oracle_cap:
        return exact_lmax(instance, spec.timeline, spec.deadline, cap=config.oracle_cap)
    return exact_lmax_branch_bound(instance, spec.timeline, cap=config.branch_bound_cap)


def _print_schedule(schedule: Schedule, out: IO[str]) -> None:
    print("sequence: " + " ".join(str(j) for j in schedule.sequence), file=out)
    print("job\tstart\tcompletion", file=out)
    for job_id, start, completion in schedule.rows():
        print(f"{job_id}\t{format_time(start)}\t{format_time(completion)}", file=out)
    print(f"lmax: {format_time(schedule.lmax)}", file=out)
    print(f"cmax: {format_time(schedule.cmax)}", file=out)


def _print_frontier(frontier: ParetoSet, out: IO[str]) -> None:
    print("cmax\tlmax\tsequence", file=out)
    for entry in frontier:
        print(f"{format_time(entry.cmax)}\t{format_time(entry.lmax)}\t{' '.join(str(j) for j in entry.sequence)}", file=out)


def _write_report(report: RunReport, out_path: str | None) -> None:
    if out_path is None:
        report.write(sys.stdout)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        report.write(fh)


def _load(path: str) -> InstanceFile:
    return parse_instance_file(Path(path).read_text(encoding="utf-8"))


def _config(args: argparse.Namespace) -> SolverConfig:
    return load_config().override(
        guess_budget=getattr(args, "guess_budget", None),
        oracle_cap=getattr(args, "oracle_cap", None),
    )


def cmd_gen(args: argparse.Namespace) -> int:
    generated = gen_random(args.jobs, args.seed, args.p_max, args.r_max, args.q_max, args.scenario or Scenario.P0)
    text = emit_instance(generated)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    parsed = _load(args.file)
    scenario = _resolve_scenario(parsed, args.scenario)
    spec = _resolve_spec(parsed, scenario, args)
    epsilon = parse_epsilon(args.epsilon, scenario)
    config = _config(args)
    name = parsed.name or Path(args.file).stem
    instance = parsed.instance
    stats = SearchStats()
    started = time.perf_counter()
    result = solve_scenario(instance, spec, scenario, epsilon, guess_budget=config.guess_budget, stats=stats)
    elapsed = time.perf_counter() - started if args.timing else None
    _LOG.info("%s: scenario=%s n=%d eps=%s guesses=%d", name, scenario, instance.n, epsilon, stats.guesses)

    print(f"instance: {name}\nscenario: {scenario}\nepsilon: {format_time(epsilon)}")
    rows: list[ReportRow] = []
    if isinstance(result, Infeasible):
        print(f"infeasible: deadline {format_time(result.deadline)} is below the minimum makespan {format_time(result.min_cmax)}")
        rows.append(ReportRow(name, str(scenario), epsilon, instance.n, "infeasible", guesses=stats.guesses, wall_time_s=elapsed))
        _write_report(RunReport(rows), args.out)
        return EXIT_INFEASIBLE
    if isinstance(result, ParetoSet):
        _print_frontier(result, sys.stdout)
        for entry in result:
            rows.append(ReportRow(name, str(scenario), epsilon, instance.n, "frontier", entry.lmax, entry.cmax, guesses=stats.guesses, wall_time_s=elapsed))
    else:
        _print_schedule(result, sys.stdout)
        rows.append(ReportRow(name, str(scenario), epsilon, instance.n, "ok", result.lmax, result.cmax, guesses=stats.guesses, wall_time_s=elapsed))
    _write_report(RunReport(rows), args.out)
    return EXIT_OK


def cmd_pareto(args: argparse.Namespace) -> int:
    args.scenario = str(Scenario.PARETO)
    return cmd_solve(args)


def cmd_oracle(args: argparse.Namespace) -> int:
    parsed = _load(args.file)
    scenario = _resolve_scenario(parsed, args.scenario)
    spec = _resolve_spec(parsed, scenario, args)
    result = oracle_scenario(parsed.instance, spec, scenario, _config(args))
    print(f"instance: {parsed.name or Path(args.file).stem}\nscenario: {scenario}")
    if isinstance(result, ParetoSet):
        _print_frontier(result, sys.stdout)
        return EXIT_OK
    print(f"explored: {result.explored}")
    if not result.feasible:
        print(f"infeasible: no schedule meets deadline {format_time(spec.deadline)}")
        return EXIT_INFEASIBLE
    _print_schedule(result.witness, sys.stdout)
    return EXIT_OK


def compare_instance(name: str, parsed: InstanceFile, scenario: Scenario, spec: ScenarioSpec, epsilon: Fraction, config: SolverConfig, *, timing: bool = False) -> ReportRow:
    instance = parsed.instance
    base = {"instance": name, "scenario": str(scenario), "epsilon": epsilon, "n": instance.n}
    if instance.n > config.oracle_cap:
        _LOG.warning("%s: %d jobs exceeds oracle cap %d, skipped", name, instance.n, config.oracle_cap)
        return ReportRow(**base, status="skipped")
    stats = SearchStats()
    started = time.perf_counter()
    try:
        result = solve_scenario(instance, spec, scenario, epsilon, guess_budget=config.guess_budget, stats=stats)
    except GuessBudgetExceeded as e:
        _LOG.warning("%s: %s", name, e)
        return ReportRow(**base, status="guess-budget")
    elapsed = time.perf_counter() - started if timing else None
    reference = oracle_scenario(instance, spec, scenario, config)
    bound = 1 + epsilon

    if isinstance(result, ParetoSet):
        assert isinstance(reference, ParetoSet)
        ratio = coverage_ratio(result, reference)
        status = "ok" if ratio is not None and ratio <= bound else "violation"
        return ReportRow(**base, status=status, ratio=ratio, guesses=stats.guesses, wall_time_s=elapsed)
    assert isinstance(reference, OracleResult)
    if isinstance(result, Infeasible) or not reference.feasible:
        status = "infeasible" if isinstance(result, Infeasible) and not reference.feasible else "violation"
        return ReportRow(**base, status=status, oracle_lmax=reference.optimum, guesses=stats.guesses, wall_time_s=elapsed)
    ratio = Fraction(result.lmax) / reference.optimum
    return ReportRow(
        **base,
        status="ok" if ratio <= bound else "violation",
        algorithm_lmax=result.lmax,
        algorithm_cmax=result.cmax,
        oracle_lmax=reference.optimum,
        ratio=ratio,
        guesses=stats.guesses,
        wall_time_s=elapsed,
    )


def cmd_compare(args: argparse.Namespace) -> int:
    config = _config(args)
    rows: list[ReportRow] = []
    for path in sorted(Path(args.corpus).glob("*.json")):
        parsed = _load(str(path))
        scenario = _resolve_scenario(parsed, args.scenario)
        spec = _resolve_spec(parsed, scenario, args)
        epsilon = parse_epsilon(args.epsilon, scenario)
        rows.append(compare_instance(parsed.name or path.stem, parsed, scenario, spec, epsilon, config, timing=args.timing))
    _write_report(RunReport(rows), args.out)

    violations = [r.instance for r in rows if r.status == "violation"]
    if violations:
        _LOG.error("ratio above 1+epsilon for: %s", ", ".join(violations))
        return EXIT_RATIO
    if any(r.status == "guess-budget" for r in rows):
        return EXIT_GUESS_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lmax-ptas", description="Approximation schemes for single-machine maximum lateness with heads and tails.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log search progress to stderr.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    scenarios = [str(s) for s in Scenario]

    gen = sub.add_parser("gen", help="Generate a random instance file.")
    gen.add_argument("-n", "--jobs", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p-max", type=int, default=10)
    gen.add_argument("--r-max", type=int, default=20)
    gen.add_argument("--q-max", type=int, default=15)
    gen.add_argument("--scenario", choices=scenarios)
    gen.add_argument("--out", help="Write the instance here instead of stdout.")
    gen.set_defaults(handler=cmd_gen)

    def solver_flags(p: argparse.ArgumentParser, *, scenario: bool = True) -> None:
        if scenario:
            p.add_argument("--scenario", choices=scenarios, help="Defaults to what the file describes.")
        p.add_argument("--epsilon", default="1/2", help="Accuracy as 'a/b'; unit fractions only for mna/ona.")
        p.add_argument("--guess-budget", type=int)
        p.add_argument("--out", help="Write the CSV report here instead of stdout.")
        p.add_argument("--timing", action="store_true", help="Fill the wall_time_s column.")

    def scenario_data(p: argparse.ArgumentParser) -> None:
        p.add_argument("--deadline", type=int)
        p.add_argument("--t1", type=int)
        p.add_argument("--t2", type=int)

    solve = sub.add_parser("solve", help="Run the approximation scheme for one instance.")
    solve.add_argument("file")
    solver_flags(solve)
    scenario_data(solve)
    solve.set_defaults(handler=cmd_solve)

    pareto = sub.add_parser("pareto", help="Approximate the (cmax, lmax) Pareto frontier.")
    pareto.add_argument("file")
    solver_flags(pareto, scenario=False)
    pareto.set_defaults(handler=cmd_pareto)

    oracle = sub.add_parser("oracle", help="Solve one instance exactly.")
    oracle.add_argument("file")
    oracle.add_argument("--scenario", choices=scenarios)
    oracle.add_argument("--oracle-cap", type=int)
    scenario_data(oracle)
    oracle.set_defaults(handler=cmd_oracle)

    compare = sub.add_parser("compare", help="Check approximation ratios against the exact oracle on a corpus.")
    compare.add_argument("corpus", help="Directory of *.json instance files.")
    solver_flags(compare)
    scenario_data(compare)
    compare.add_argument("--oracle-cap", type=int)
    compare.set_defaults(handler=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(verbose=args.verbose)
    try:
        return args.handler(args)
    except GuessBudgetExceeded as e:
        _LOG.error("%s", e)
        return EXIT_GUESS_BUDGET
    except (LmaxPtasError, OSError) as e:
        _LOG.error("%s", e)
        return EXIT_SCHEMA
