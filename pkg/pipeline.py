import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import config
from counting import CountingResult, count_optimal
from errors import CapacityError, ConsistencyError, RegimeError
from formulas import BoundBracket, bound_for
from instance import QocInstance, sample_oracle, verify_free
from simulator import (GramReport, oracle_shift_run, optimal_parallel_algorithm, optimal_success,
                       random_parallel_algorithm, run_parallel_algorithm)

COMPLETED = "completed"
FAILED = "failed"
SKIPPED = "skipped"


@dataclass
class Verdict:
    name: str
    status: str
    detail: str

    @property
    def passed(self) -> bool:
        return self.status != FAILED


def _seeds(seed: int, count: int, stream: int) -> List[int]:
    return [int(s) for s in np.random.SeedSequence([seed, stream]).generate_state(count)] if count else []


def check_free_module(inst: QocInstance, capacity: Optional[int] = None) -> Verdict:
    """Exhaustive injectivity of coefficients -> tables"""
    try:
        if verify_free(inst, capacity):
            return Verdict("free_module", COMPLETED, f"{inst.group.order ** (inst.s + inst.t):,} distinct tables")
        return Verdict("free_module", FAILED, "basis functions are dependent")
    except CapacityError as e:
        logging.warning(f"Free-module check skipped: {e}")
        return Verdict("free_module", SKIPPED, str(e))


def check_formula_bracket(inst: QocInstance, counting: CountingResult,
                          tolerance: float) -> Tuple[Verdict, Optional[BoundBracket]]:
    """Exact counting value must sit inside the closed-form bracket"""
    try:
        bracket = bound_for(inst, counting.q)
    except RegimeError as e:
        return Verdict("formula_bracket", SKIPPED, str(e)), None

    value = counting.probability
    if not bracket.contains(value, tolerance):
        return Verdict("formula_bracket", FAILED,
                       f"{value} outside [{bracket.lower}, {bracket.upper}] ({bracket.regime})"), bracket
    return Verdict("formula_bracket", COMPLETED, f"{value} in [{bracket.lower}, {bracket.upper}] ({bracket.regime})"), bracket


def check_simulator(inst: QocInstance, counting: CountingResult,
                    tolerance: float) -> Tuple[List[Verdict], Optional[GramReport]]:
    """Gram-matrix simulation must reproduce the counting value with uniform per-coset success"""
    try:
        report = optimal_success(inst, counting.q, counting=counting)
    except CapacityError as e:
        logging.warning(f"Simulator stage skipped: {e}")
        return [Verdict("simulator_equality", SKIPPED, str(e)), Verdict("rank_bound", SKIPPED, str(e))], None
    except ConsistencyError as e:
        logging.error(f"Simulator stage failed: {e}")
        return [Verdict("simulator_equality", FAILED, str(e)), Verdict("rank_bound", SKIPPED, "no states")], None

    gap = abs(report.total_success - float(counting.probability))
    if gap > tolerance or report.spread > tolerance:
        equality = Verdict("simulator_equality", FAILED,
                           f"simulated {report.total_success:.12g}, gap {gap:.3e}, spread {report.spread:.3e}")
    else:
        equality = Verdict("simulator_equality", COMPLETED, f"gap {gap:.3e}, spread {report.spread:.3e}")

    if report.rank > counting.best_class_size:
        rank = Verdict("rank_bound", FAILED, f"rank {report.rank} exceeds class size {counting.best_class_size}")
    else:
        rank = Verdict("rank_bound", COMPLETED, f"rank {report.rank} <= {counting.best_class_size}")
    return [equality, rank], report


def check_optimal_algorithm(inst: QocInstance, counting: CountingResult, tolerance: float) -> Verdict:
    """The optimal measurement as a unitary succeeds equally on every oracle"""
    try:
        alg = optimal_parallel_algorithm(inst, counting.q, counting=counting)
        average, per_oracle = run_parallel_algorithm(alg, inst, counting.q, per_oracle=True)
    except CapacityError as e:
        return Verdict("optimal_algorithm", SKIPPED, str(e))
    except ConsistencyError as e:
        logging.error(f"Optimal algorithm stage failed: {e}")
        return Verdict("optimal_algorithm", FAILED, str(e))

    target = float(counting.probability)
    worst = float(per_oracle.min())
    if abs(average - target) > tolerance or abs(worst - target) > tolerance:
        return Verdict("optimal_algorithm", FAILED, f"average {average:.12g}, worst {worst:.12g}, expected {target:.12g}")
    return Verdict("optimal_algorithm", COMPLETED, f"average {average:.12g}, worst {worst:.12g}")


def check_dominance(inst: QocInstance, counting: CountingResult, seed: int, trials: int,
                    tolerance: float) -> Verdict:
    """No seeded random parallel algorithm beats the counting value"""
    best = 0.0
    try:
        for trial_seed in _seeds(seed, trials, 0):
            alg = random_parallel_algorithm(inst, counting.q, trial_seed)
            best = max(best, run_parallel_algorithm(alg, inst, counting.q))
    except CapacityError as e:
        return Verdict("dominance", SKIPPED, str(e))

    bound = float(counting.probability)
    if best > bound + tolerance:
        return Verdict("dominance", FAILED, f"a random algorithm reached {best:.12g} > {bound:.12g}")
    return Verdict("dominance", COMPLETED, f"best of {trials} random algorithms {best:.12g} <= {bound:.12g}")


def check_shift_invariance(inst: QocInstance, q: int, seed: int, trials: int, tolerance: float) -> Verdict:
    """Shifting every oracle by a fixed A0 and correcting the answer keeps average success"""
    worst = 0.0
    try:
        for alg_seed, shift_seed in zip(_seeds(seed, trials, 1), _seeds(seed, trials, 2)):
            alg = random_parallel_algorithm(inst, q, alg_seed)
            beta0, gamma0, _ = sample_oracle(inst, shift_seed)
            plain = run_parallel_algorithm(alg, inst, q)
            shifted = oracle_shift_run(alg, inst, q, (beta0, gamma0))
            worst = max(worst, abs(plain - shifted))
    except CapacityError as e:
        return Verdict("shift_invariance", SKIPPED, str(e))

    if worst > tolerance:
        return Verdict("shift_invariance", FAILED, f"shifted run differs by {worst:.3e}")
    return Verdict("shift_invariance", COMPLETED, f"max difference {worst:.3e} over {trials} shifts")


def run_check(inst: QocInstance, q: int, seed: Optional[int] = None, trials: Optional[int] = None,
              shift_trials: Optional[int] = None, tolerance: Optional[float] = None,
              capacity: Optional[int] = None, workers: Optional[int] = None) -> Dict:
    """Run every cross-check stage; capacity errors in counting propagate"""
    seed = config.DEFAULT_SEED if seed is None else seed
    trials = config.DEFAULT_TRIALS if trials is None else trials
    shift_trials = config.SHIFT_TRIALS if shift_trials is None else shift_trials
    tolerance = config.PROBABILITY_TOLERANCE if tolerance is None else tolerance

    verdicts = [check_free_module(inst)]
    counting = count_optimal(inst, q, capacity=capacity, workers=workers)
    verdicts.append(Verdict("counting", COMPLETED,
                            f"{counting.probability} from {counting.pair_count:,} pairs, "
                            f"{counting.class_pair_count:,} in the best class"))

    bracket_verdict, bracket = check_formula_bracket(inst, counting, tolerance)
    verdicts.append(bracket_verdict)
    simulator_verdicts, report = check_simulator(inst, counting, tolerance)
    verdicts.extend(simulator_verdicts)
    verdicts.append(check_optimal_algorithm(inst, counting, tolerance))
    verdicts.append(check_dominance(inst, counting, seed, trials, tolerance))
    verdicts.append(check_shift_invariance(inst, q, seed, shift_trials, tolerance))

    for verdict in verdicts:
        if verdict.status == FAILED:
            logging.error(f"{inst.label} q={q}: {verdict.name} failed: {verdict.detail}")

    return {
        "status": "failed" if any(not v.passed for v in verdicts) else "passed",
        "verdicts": verdicts,
        "counting": counting,
        "bracket": bracket,
        "simulated": report.total_success if report is not None else None,
        "probability": counting.probability,
        "seed": seed,
    }
