"""
Sieving campaigns: run every (status, seed, test) combination, classify the
p-values, issue per-status verdicts and aggregate per-test suspect counts.

Work items go to a process pool; results are sorted by
(status_id, mexp, test_id, seed_index) before aggregation, so a report does
not depend on the number of workers.
"""
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from pydantic import BaseModel
from scipy.stats import kstest

from mtsieve.errors import MismatchedSpecsError, MtSieveError
from mtsieve.schemas import (
    CampaignMeta,
    GridCell,
    ParameterizedStatus,
    PValueClass,
    SeedPolicy,
    SieveReport,
    TestResult,
    TestSpec,
    TestSummary,
    Verdict,
)
from mtsieve.services.sources import draw_seeds, mt_factory
from mtsieve.services.stat_tests import run_test
from mtsieve.services.verdicts import status_verdict, suspect_excess_probability, worst_class

logger = logging.getLogger(__name__)

DEFAULT_EXCESS_ALPHA = 1e-4
# Fewer p-values than this make the KS uniformity check meaningless.
MIN_KS_SAMPLE = 5


@dataclass(frozen=True)
class WorkItem:
    status_index: int
    status: ParameterizedStatus
    seed_index: int
    seed: int
    spec: TestSpec
    max_words: int | None
    factory: Callable


def _run_item(item: WorkItem) -> TestResult:
    try:
        source = item.factory(item.status, item.seed)
        result = run_test(source, item.spec, status_id=item.status.id, max_words=item.max_words)
    except (MtSieveError, ValueError, ArithmeticError) as e:
        logger.warning(f"{item.spec.test_id} on {item.status.label} seed {item.seed}: {e}")
        result = TestResult(spec=item.spec, status_id=item.status.id, error=str(e) or type(e).__name__)
    except Exception as e:
        logger.error(f"Unexpected error in {item.spec.test_id} on {item.status.label} seed {item.seed}: {e}", exc_info=True)
        result = TestResult(spec=item.spec, status_id=item.status.id, error=f"{type(e).__name__}: {e}")
    return result.model_copy(update={"mexp": item.status.mexp, "seed": item.seed, "seed_index": item.seed_index})


def _execute(items: list[WorkItem], workers: int) -> list[TestResult]:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_item, items, chunksize=max(1, len(items) // (4 * workers))))
    else:
        results = [_run_item(item) for item in items]
    return sorted(results, key=lambda r: r.sort_key)


def resolve_seeds(policy: SeedPolicy) -> list[int]:
    if policy.kind == "fixed":
        return [policy.seed]
    return draw_seeds(policy.n_seeds, policy.key)


def _check_inputs(statuses: list[ParameterizedStatus], test_specs: list[TestSpec]) -> None:
    if not statuses:
        raise ValueError("no statuses")
    if not test_specs:
        raise ValueError("no test specs")
    keys = [(s.id, s.mexp) for s in statuses]
    if len(set(keys)) != len(keys):
        raise ValueError("statuses must have distinct (id, mexp) pairs")
    ids = [spec.test_id for spec in test_specs]
    if len(set(ids)) != len(ids):
        raise ValueError("test specs must have distinct test ids")


def _summaries(results: list[TestResult], specs: list[TestSpec], excess_alpha: float) -> list[TestSummary]:
    by_test: dict[str, list[TestResult]] = defaultdict(list)
    for r in results:
        by_test[r.test_id].append(r)
    summaries = []
    for spec in specs:
        rows = by_test.get(spec.test_id, [])
        classes = [r.classification for r in rows]
        errors = sum(1 for c in classes if c is None)
        suspect = classes.count(PValueClass.SUSPECT)
        tested = len(rows) - errors
        excess = suspect_excess_probability(suspect, tested) if tested else None
        pvalues = [r.p_value for r in rows if r.p_value is not None]
        ks = float(kstest(pvalues, "uniform").pvalue) if len(pvalues) >= MIN_KS_SAMPLE else None
        summaries.append(
            TestSummary(
                test_id=spec.test_id,
                total=len(rows),
                correct=classes.count(PValueClass.CORRECT),
                suspect=suspect,
                disastrous=classes.count(PValueClass.DISASTROUS),
                errors=errors,
                degenerate=sum(1 for r in rows if r.degenerate),
                excess_probability=excess,
                ks_pvalue=ks,
                flagged=excess is not None and excess < excess_alpha,
            )
        )
    return summaries


def build_report(
    kind: str,
    statuses: list[ParameterizedStatus],
    specs: list[TestSpec],
    policy: SeedPolicy,
    seeds: list[int],
    results: list[TestResult],
    excess_alpha: float = DEFAULT_EXCESS_ALPHA,
    name: str = "campaign",
    engine: str = "mt",
) -> SieveReport:
    groups: dict[tuple, list[TestResult]] = defaultdict(list)
    for r in results:
        groups[(r.status_id, r.mexp or 0, r.seed_index)].append(r)
    verdicts = [status_verdict(groups[key]) for key in sorted(groups)]
    histogram = {v.value: 0 for v in Verdict}
    for v in verdicts:
        histogram[v.verdict.value] += 1
    grid = None
    if kind == "cross":
        index_of = {(s.id, s.mexp): i for i, s in enumerate(statuses)}
        grid = [
            GridCell(
                param_index=index_of[(v.status_id, v.mexp)],
                seed_index=v.seed_index,
                status_id=v.status_id,
                seed=seeds[v.seed_index],
                classification=worst_class(v.classifications.values()),
            )
            for v in verdicts
        ]
        grid.sort(key=lambda c: (c.param_index, c.seed_index))
    meta = CampaignMeta(
        kind=kind,
        name=name,
        engine=engine,
        mexps=sorted({s.mexp for s in statuses}),
        specs=specs,
        n_statuses=len(statuses),
        n_seeds=len(seeds),
        seeds=seeds,
        seed_policy=policy,
        excess_alpha=excess_alpha,
    )
    return SieveReport(
        meta=meta,
        statuses=list(statuses),
        results=results,
        verdicts=verdicts,
        tests=_summaries(results, specs, excess_alpha),
        verdict_histogram=histogram,
        grid=grid,
    )


def _items(statuses, seeds, specs, max_words, factory) -> list[WorkItem]:
    return [
        WorkItem(si, status, ki, seed, spec, max_words, factory)
        for si, status in enumerate(statuses)
        for ki, seed in enumerate(seeds)
        for spec in specs
    ]


def run_campaign(
    statuses: list[ParameterizedStatus],
    seed_policy: SeedPolicy,
    test_specs: list[TestSpec],
    max_words: int | None = None,
    workers: int = 1,
    factory: Callable = mt_factory,
    excess_alpha: float = DEFAULT_EXCESS_ALPHA,
    name: str = "campaign",
    engine: str = "mt",
) -> SieveReport:
    """Run every test on every status (and seed); individual errors are recorded, never raised."""
    _check_inputs(statuses, test_specs)
    seeds = resolve_seeds(seed_policy)
    items = _items(statuses, seeds, test_specs, max_words, factory)
    logger.info(
        f"Campaign '{name}': {len(statuses)} statuses x {len(seeds)} seeds x {len(test_specs)} tests "
        f"= {len(items)} runs on {workers} worker(s)"
    )
    results = _execute(items, workers)
    report = build_report("sieve", statuses, test_specs, seed_policy, seeds, results, excess_alpha, name, engine)
    logger.info(f"Campaign '{name}' finished: {report.verdict_histogram}")
    return report


def random_spacing_cross(
    params_list: list[ParameterizedStatus],
    n_seeds: int,
    seed_source: int,
    test_specs: list[TestSpec],
    max_words: int | None = None,
    workers: int = 1,
    factory: Callable = mt_factory,
    excess_alpha: float = DEFAULT_EXCESS_ALPHA,
    name: str = "random-spacing",
    engine: str = "mt",
) -> SieveReport:
    """Every parameter set crossed with n_seeds seeds drawn from the keyed Philox source."""
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    _check_inputs(params_list, test_specs)
    policy = SeedPolicy(kind="random-spacing", n_seeds=n_seeds, key=seed_source)
    seeds = resolve_seeds(policy)
    items = _items(params_list, seeds, test_specs, max_words, factory)
    logger.info(f"Random Spacing '{name}': {len(params_list)} params x {n_seeds} seeds, key={seed_source}")
    results = _execute(items, workers)
    return build_report("cross", params_list, test_specs, policy, seeds, results, excess_alpha, name, engine)


class VariationRow(BaseModel):
    engine: str
    test_id: str
    passed: int
    total: int
    percent: float


def _pass_table(results: list[TestResult], tests: list[str]) -> dict[tuple, dict[str, bool]]:
    table: dict[tuple, dict[str, bool]] = defaultdict(dict)
    for r in results:
        if r.test_id in tests:
            ok = r.classification is not None and r.classification != PValueClass.DISASTROUS
            key = (r.status_id, r.mexp or 0, r.seed_index)
            table[key][r.test_id] = table[key].get(r.test_id, True) and ok
    return table


def _results_of(source) -> list[TestResult]:
    return source.results if isinstance(source, SieveReport) else list(source)


def variation_report(
    engine_a_results,
    engine_b_results,
    tests_of_interest: list[str] | None = None,
    labels: tuple[str, str] = ("a", "b"),
) -> list[VariationRow]:
    """Pass percentage per engine and test, plus an "all" row for statuses passing every test of interest."""
    a, b = _results_of(engine_a_results), _results_of(engine_b_results)
    specs_a = {r.test_id: r.spec for r in a}
    specs_b = {r.test_id: r.spec for r in b}
    tests = list(tests_of_interest) if tests_of_interest else sorted(specs_a)
    for test_id in tests:
        if test_id not in specs_a or test_id not in specs_b:
            raise MismatchedSpecsError(f"test '{test_id}' missing from one result set")
        if specs_a[test_id] != specs_b[test_id]:
            raise MismatchedSpecsError(f"test '{test_id}' was run with different specs")
    if not tests_of_interest and set(specs_a) != set(specs_b):
        raise MismatchedSpecsError("result sets cover different tests")
    rows = []
    for label, results in zip(labels, (a, b)):
        table = _pass_table(results, tests)
        for test_id in tests:
            outcomes = [row[test_id] for row in table.values() if test_id in row]
            rows.append(_row(label, test_id, sum(outcomes), len(outcomes)))
        complete = [all(row.get(t, False) for t in tests) for row in table.values()]
        rows.append(_row(label, "all", sum(complete), len(complete)))
    return rows


def _row(engine: str, test_id: str, passed: int, total: int) -> VariationRow:
    percent = round(100.0 * passed / total, 4) if total else 0.0
    return VariationRow(engine=engine, test_id=test_id, passed=passed, total=total, percent=percent)
