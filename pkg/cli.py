import sys
import os

current_dir = os.path.dirname(os.path.abspath(__file__))
sys.path.append(current_dir)

import argparse
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from config import config
from components.report_table import format_decimal, format_exact, render_table
from components.verdict_summary import render_verdicts
from counting import count_optimal, sweep_results
from errors import CapacityError, DomainError, QocError, RegimeError
from formulas import BoundBracket, bound_for
from instance import QocInstance
from instance_file import expand_target_sets, parse_instance, read_document
from pipeline import Verdict, run_check
from simulator import optimal_success

COLUMNS = ["instance", "q", "lower", "upper", "exact", "regime", "counting", "counting_decimal",
           "simulated", "verdict", "seed"]
WITNESS_COLUMNS = ["z", "points", "chars", "multiplicity"]


@dataclass
class RunReport:
    label: str
    kind: str
    params: Dict[str, object]
    q: int
    bracket: Optional[BoundBracket] = None
    probability: Optional[Fraction] = None
    simulated: Optional[float] = None
    tolerance: float = config.PROBABILITY_TOLERANCE
    verdicts: List[Verdict] = field(default_factory=list)
    seed: Optional[int] = None
    wall_time: Optional[float] = None
    witnesses: List[Dict] = field(default_factory=list)

    def audit(self) -> Dict[str, bool]:
        """Recompute the agreement verdicts from the values held in the report"""
        checks = {}
        if self.bracket is not None and self.probability is not None:
            checks["formula_bracket"] = self.bracket.contains(self.probability, self.tolerance)
        if self.simulated is not None and self.probability is not None:
            checks["simulator_equality"] = abs(self.simulated - float(self.probability)) <= self.tolerance
        return checks

    @property
    def passed(self) -> bool:
        return all(self.audit().values()) and all(v.passed for v in self.verdicts)

    def to_row(self, timing: bool = False) -> Dict[str, str]:
        row = {
            "instance": self.label,
            "q": self.q,
            "lower": format_exact(self.bracket.lower) if self.bracket else "",
            "upper": format_exact(self.bracket.upper) if self.bracket else "",
            "exact": str(self.bracket.exact).lower() if self.bracket else "",
            "regime": self.bracket.regime if self.bracket else "",
            "counting": format_exact(self.probability),
            "counting_decimal": format_decimal(self.probability),
            "simulated": format_decimal(self.simulated),
            "verdict": ("pass" if self.passed else "fail") if (self.verdicts or self.audit()) else "",
            "seed": "" if self.seed is None else self.seed,
        }
        if timing:
            row["wall_time"] = "" if self.wall_time is None else f"{self.wall_time:.3f}"
        return row


def _instances(args) -> List[QocInstance]:
    document = read_document(args.instance)
    documents = expand_target_sets(document) if args.all_target_sets else [document]
    return [parse_instance(d) for d in documents]


def _report(inst: QocInstance, q: int, args, **values) -> RunReport:
    return RunReport(inst.label, inst.kind, inst.param_dict, q, tolerance=args.tolerance, **values)


def cmd_bound(args) -> List[RunReport]:
    """Closed-form bracket only"""
    reports = []
    for inst in _instances(args):
        start = time.perf_counter()
        bracket = bound_for(inst, args.q)
        reports.append(_report(inst, args.q, args, bracket=bracket, wall_time=time.perf_counter() - start))
    return reports


def cmd_count(args) -> List[RunReport]:
    """Exact optimal success probability by enumeration"""
    reports = []
    for inst in _instances(args):
        start = time.perf_counter()
        result = count_optimal(inst, args.q, capacity=args.capacity, workers=args.workers)
        witnesses = []
        if args.witnesses:
            for z, pair in result.witnesses.items():
                witnesses.append({
                    "z": " ".join(repr(g) for g in z),
                    "points": " ".join(str(x) for x in pair.points),
                    "chars": " ".join(repr(r) for r in pair.chars),
                    "multiplicity": result.multiplicities[z],
                })
        reports.append(_report(inst, args.q, args, probability=result.probability,
                               wall_time=time.perf_counter() - start, witnesses=witnesses))
    return reports


def cmd_check(args) -> List[RunReport]:
    """Counting, closed form, simulator and random-algorithm cross-checks"""
    reports = []
    for inst in _instances(args):
        start = time.perf_counter()
        outcome = run_check(inst, args.q, seed=args.seed, trials=args.trials, shift_trials=args.shift_trials,
                            tolerance=args.tolerance, capacity=args.capacity, workers=args.workers)
        render_verdicts(f"{inst.label} q={args.q}", outcome["verdicts"])
        reports.append(_report(inst, args.q, args, bracket=outcome["bracket"], probability=outcome["probability"],
                               simulated=outcome["simulated"], verdicts=outcome["verdicts"], seed=outcome["seed"],
                               wall_time=time.perf_counter() - start))
    return reports


def cmd_sweep(args) -> List[RunReport]:
    """One row per q with bracket, exact count and simulated value"""
    if args.q_max < args.q_min:
        raise DomainError(f"Empty q range [{args.q_min}, {args.q_max}]")
    reports = []
    for inst in _instances(args):
        counted = sweep_results(inst, range(args.q_min, args.q_max + 1), capacity=args.capacity,
                                workers=args.workers)
        for result in counted:
            q = result.q
            start = time.perf_counter()
            try:
                bracket = bound_for(inst, q)
            except RegimeError:
                bracket = None
            try:
                simulated = optimal_success(inst, q, counting=result).total_success
            except CapacityError as e:
                logging.warning(f"No simulation for {inst.label} q={q}: {e}")
                simulated = None
            reports.append(_report(inst, q, args, bracket=bracket, probability=result.probability,
                                   simulated=simulated, wall_time=time.perf_counter() - start))
    return reports


def _max_row(reports: List[RunReport]) -> Dict[str, str]:
    best = max(r.probability for r in reports)
    return {"instance": "max over target sets", "q": reports[0].q, "counting": format_exact(best),
            "counting_decimal": format_decimal(best)}


def emit(reports: List[RunReport], args, stream=None):
    stream = stream if stream is not None else sys.stdout
    rows = [r.to_row(args.timing) for r in reports]
    if args.all_target_sets and args.command != "sweep" and all(r.probability is not None for r in reports):
        rows.append(_max_row(reports))
    columns = COLUMNS + (["wall_time"] if args.timing else [])
    stream.write(render_table(rows, args.format, columns))
    witness_rows = [dict(w, instance=r.label) for r in reports for w in r.witnesses]
    if witness_rows:
        stream.write("\n")
        stream.write(render_table(witness_rows, args.format, ["instance"] + WITNESS_COLUMNS))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", help="JSON instance file")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--capacity", type=int, default=None, help="enumeration guard on pair count")
    common.add_argument("--tolerance", type=float, default=config.PROBABILITY_TOLERANCE)
    common.add_argument("--workers", type=int, default=None, help="processes for partitioned counting")
    common.add_argument("--all-target-sets", action="store_true",
                        help="repeat over every target subset of the same size and report the maximum")
    common.add_argument("--timing", action="store_true", help="add a wall_time column")

    parser = argparse.ArgumentParser(prog="qoc", description="Exact oracle-classification workbench")
    commands = parser.add_subparsers(dest="command", required=True)

    bound = commands.add_parser("bound", parents=[common], help="closed-form bracket")
    bound.add_argument("--q", type=int, required=True)
    bound.set_defaults(handler=cmd_bound)

    count = commands.add_parser("count", parents=[common], help="exact optimum by enumeration")
    count.add_argument("--q", type=int, required=True)
    count.add_argument("--witnesses", action="store_true", help="dump one query pair per reachable z")
    count.set_defaults(handler=cmd_count)

    check = commands.add_parser("check", parents=[common], help="run every cross-check")
    check.add_argument("--q", type=int, required=True)
    check.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    check.add_argument("--trials", type=int, default=config.DEFAULT_TRIALS)
    check.add_argument("--shift-trials", type=int, default=config.SHIFT_TRIALS)
    check.set_defaults(handler=cmd_check)

    sweep_cmd = commands.add_parser("sweep", parents=[common], help="tabulate a range of query counts")
    sweep_cmd.add_argument("--q-min", type=int, default=0)
    sweep_cmd.add_argument("--q-max", type=int, required=True)
    sweep_cmd.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr, format="%(levelname)s %(message)s")

    try:
        reports = args.handler(args)
    except QocError as e:
        logging.info(f"{args.command} stopped with exit code {e.exit_code}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    emit(reports, args)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
