"""
Named verification suites over the inequality and conservation checkers
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, NamedTuple, Tuple, Union

from . import inequalities as ineq
from .exceptions import DomainError
from .inequalities import CheckOutcome, Verdict
from .ode_probe import ConservationReport, check_conservation, check_f_decay, conservation_grid

logger = logging.getLogger(__name__)

SuiteRecord = Union[CheckOutcome, ConservationReport]

# Index caps of the quadrature-based suites
DISGUISE_MAX_N = 15
SANDWICH_MAX_N = 30

SUITES = ("stieltjes", "squeeze", "wallis", "disguise", "sandwich", "conservation", "binomial", "all")


class Task(NamedTuple):
    check: str
    n: int
    tol: float


def _grid_point(check: Callable[..., SuiteRecord]) -> Callable[[int, float], SuiteRecord]:
    def run(i: int, tol: float) -> SuiteRecord:
        t = conservation_grid()[i]
        return check(t, tol) if check is check_conservation else check(t, tol, index=i)

    return run


_CHECKS: Dict[str, Callable[[int, float], SuiteRecord]] = {
    "stieltjes": lambda n, tol: ineq.check_stieltjes(n),
    "moment_squeeze": lambda n, tol: ineq.check_moment_squeeze(n),
    "sqrt_limit_bounds": lambda n, tol: ineq.check_sqrt_limit_bounds(n),
    "wallis_squeeze": lambda n, tol: ineq.check_wallis_squeeze(n),
    "wallis_monotone": lambda n, tol: ineq.check_wallis_monotone(n),
    "product_identity": lambda n, tol: ineq.check_product_identity(n),
    "variation_observation": lambda n, tol: ineq.check_variation_observation(n),
    "binomial_band": lambda n, tol: ineq.check_binomial_band(n),
    "disguise": ineq.check_disguise,
    "spivak_sandwich": ineq.check_spivak_sandwich,
    "probability_squeeze": ineq.check_probability_squeeze,
    "conservation": _grid_point(check_conservation),
    "f_decay": _grid_point(check_f_decay),
}


def _run_task(task: Task) -> SuiteRecord:
    return _CHECKS[task.check](task.n, task.tol)


def suite_tasks(suite: str, max_n: int, tol: float) -> List[Task]:
    """The checks a suite runs, in report order."""
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    if isinstance(max_n, bool) or not isinstance(max_n, int) or max_n < 1:
        raise DomainError(f"max_n must be a positive integer, got {max_n!r}")

    def indexed(check: str, first: int, last: int) -> List[Task]:
        return [Task(check, n, tol) for n in range(first, last + 1)]

    plans: Dict[str, List[Tuple[str, int, int]]] = {
        "stieltjes": [("stieltjes", 1, max_n)],
        "squeeze": [
            ("moment_squeeze", 1, max_n),
            ("sqrt_limit_bounds", 1, max_n),
            ("wallis_squeeze", 1, max_n),
        ],
        "wallis": [
            ("wallis_monotone", 0, max_n),
            ("product_identity", 1, max_n),
            ("variation_observation", 1, max_n),
        ],
        "binomial": [("binomial_band", 1, max_n)],
        "disguise": [("disguise", 1, min(max_n, DISGUISE_MAX_N))],
        "sandwich": [
            ("spivak_sandwich", 1, min(max_n, SANDWICH_MAX_N)),
            ("probability_squeeze", 2, min(max_n, SANDWICH_MAX_N)),
        ],
        "conservation": [
            ("conservation", 0, len(conservation_grid()) - 1),
            ("f_decay", 0, len(conservation_grid()) - 1),
        ],
    }
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    tasks: List[Task] = []
    for name in names:
        for check, first, last in plans[name]:
            tasks.extend(indexed(check, first, last))
    return tasks


def run_suite(suite: str, max_n: int, tol: float = 1e-9, jobs: int = 1) -> List[SuiteRecord]:
    """
    Run a named suite.

    Args:
        suite: One of SUITES
        max_n: Largest index for the indexed checkers
        tol: Quadrature tolerance for the numeric checkers
        jobs: Worker processes; 1 runs in-process

    Returns:
        Records in task order (grouped by check, ascending index),
        whatever the number of workers
    """
    tasks = suite_tasks(suite, max_n, tol)
    logger.info("running suite %s: %d checks on %d job(s)", suite, len(tasks), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        records = [_run_task(task) for task in tasks]

    counts = summarize(records)
    logger.info(
        "suite %s finished: %s",
        suite,
        ", ".join(f"{count} {verdict.value}" for verdict, count in counts.items()),
    )
    return records


def verdict_of(record: SuiteRecord) -> Verdict:
    if isinstance(record, ConservationReport):
        return Verdict.HOLDS if record.within_tolerance else Verdict.FAILS
    return record.verdict


def summarize(records: List[SuiteRecord]) -> Dict[Verdict, int]:
    counts = {verdict: 0 for verdict in Verdict}
    for record in records:
        counts[verdict_of(record)] += 1
    return counts
