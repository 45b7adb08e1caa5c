import pytest

from mtsieve.errors import MismatchedSpecsError
from mtsieve.schemas import PValueClass, SeedPolicy, TestName, TestResult, TestSpec, Verdict
from mtsieve.services.dc import dc_search, mint_batch
from mtsieve.services.engine import mt19937_status
from mtsieve.services.sieve import MIN_KS_SAMPLE, random_spacing_cross, resolve_seeds, run_campaign, variation_report
from mtsieve.services.sources import PlantedFactory, draw_seeds
from mtsieve.services.stat_tests import DEFAULT_SPECS


@pytest.fixture(scope="module")
def statuses():
    return mint_batch(89, range(1, 5), search_seed=2)


@pytest.fixture
def gap_spec(small_specs):
    return small_specs[0]


def test_single_status_single_test(statuses, gap_spec):
    report = run_campaign(statuses[:1], SeedPolicy(), [gap_spec])
    assert len(report.results) == 1
    assert report.results[0].seed == 0
    assert report.meta.n_statuses == 1


def test_results_are_sorted(statuses, small_specs):
    report = run_campaign(list(reversed(statuses)), SeedPolicy(seed=3), small_specs)
    keys = [r.sort_key for r in report.results]
    assert keys == sorted(keys)
    assert len(report.results) == len(statuses) * len(small_specs)
    assert sum(report.verdict_histogram.values()) == len(statuses)


def test_campaign_is_reproducible(statuses, small_specs):
    a = run_campaign(statuses, SeedPolicy(), small_specs[:2])
    b = run_campaign(statuses, SeedPolicy(), small_specs[:2])
    assert a.model_dump_json() == b.model_dump_json()


def test_campaign_is_worker_independent(statuses, small_specs):
    one = run_campaign(statuses, SeedPolicy(), small_specs, workers=1)
    many = run_campaign(statuses, SeedPolicy(), small_specs, workers=4)
    assert one.model_dump_json() == many.model_dump_json()


def test_planted_constant_status_fails_every_test(statuses, small_specs):
    bad = statuses[1].id
    report = run_campaign(statuses, SeedPolicy(), small_specs, factory=PlantedFactory([bad]))
    verdicts = {v.status_id: v for v in report.verdicts}
    assert verdicts[bad].verdict == Verdict.FAIL
    assert set(verdicts[bad].classifications.values()) == {PValueClass.DISASTROUS}
    assert all(verdicts[s.id].verdict != Verdict.FAIL for s in statuses if s.id != bad)


def test_test_errors_are_recorded_not_raised(statuses):
    tiny = TestSpec(name=TestName.HAMMING_INDEP, index=100, n=10, s=32, L=64)
    report = run_campaign(statuses[:2], SeedPolicy(), [tiny])
    assert all(r.error == "sample too small" for r in report.results)
    assert all(r.p_value is None and r.classification is None for r in report.results)
    assert report.tests[0].errors == 2
    assert report.verdict_histogram[Verdict.FAIL.value] == 0


def broken_factory(params, seed):
    raise KeyError(f"no source for {params.id}")


def test_unexpected_errors_are_recorded_not_raised(statuses, gap_spec):
    report = run_campaign(statuses[:2], SeedPolicy(), [gap_spec], factory=broken_factory)
    assert len(report.results) == 2
    assert all(r.error.startswith("KeyError") for r in report.results)
    assert report.tests[0].errors == 2


def test_default_battery_completes(mt19937):
    report = run_campaign([mt19937], SeedPolicy(seed=1), [DEFAULT_SPECS["random_walk-74"]])
    assert report.results[0].error is None
    assert report.results[0].p_value is not None


def test_ks_uniformity_is_reported(statuses, gap_spec):
    policy = SeedPolicy(kind="random-spacing", n_seeds=MIN_KS_SAMPLE + 3, key=9)
    report = run_campaign(statuses[:2], policy, [gap_spec])
    summary = report.tests[0]
    assert summary.total == 2 * (MIN_KS_SAMPLE + 3)
    assert summary.ks_pvalue is not None
    assert 0.0 <= summary.ks_pvalue <= 1.0


def test_word_budget_is_enforced(statuses, gap_spec):
    report = run_campaign(statuses[:1], SeedPolicy(), [gap_spec], max_words=50)
    assert report.results[0].error == "insufficient stream"


def test_empty_inputs_rejected(gap_spec, statuses):
    with pytest.raises(ValueError, match="no statuses"):
        run_campaign([], SeedPolicy(), [gap_spec])
    with pytest.raises(ValueError):
        run_campaign(statuses, SeedPolicy(), [])
    with pytest.raises(ValueError):
        run_campaign(statuses + statuses[:1], SeedPolicy(), [gap_spec])


def test_summaries_count_classes(statuses, small_specs):
    report = run_campaign(statuses, SeedPolicy(), small_specs, factory=PlantedFactory([statuses[0].id]))
    for summary in report.tests:
        assert summary.total == len(statuses)
        assert summary.correct + summary.suspect + summary.disastrous + summary.errors == summary.total
        assert summary.disastrous >= 1
        assert summary.excess_probability is not None
        assert summary.ks_pvalue is None


def test_random_spacing_seeds_are_replayable():
    assert draw_seeds(5, key=17) == draw_seeds(5, key=17)
    assert draw_seeds(5, key=17) != draw_seeds(5, key=18)
    policy = SeedPolicy(kind="random-spacing", n_seeds=5, key=17)
    assert resolve_seeds(policy) == draw_seeds(5, 17)
    assert resolve_seeds(SeedPolicy(seed=9)) == [9]


def test_cross_single_cell(statuses, gap_spec):
    report = random_spacing_cross(statuses[:1], 1, 5, [gap_spec])
    assert report.meta.kind == "cross"
    assert len(report.grid) == 1
    assert report.grid[0].seed == draw_seeds(1, 5)[0]


def test_cross_planted_column(statuses, gap_spec):
    bad = statuses[2].id
    report = random_spacing_cross(statuses, 20, 1, [gap_spec], factory=PlantedFactory([bad]))
    assert len(report.grid) == len(statuses) * 20
    column = [c for c in report.grid if c.status_id == bad]
    assert len(column) == 20
    assert all(c.classification == "disastrous" for c in column)
    others = [c for c in report.grid if c.status_id != bad]
    assert sum(c.classification == "correct" for c in others) >= 0.9 * len(others)
    assert all(c.classification != "disastrous" for c in others)


def test_cross_requires_seeds(statuses, gap_spec):
    with pytest.raises(ValueError):
        random_spacing_cross(statuses, 0, 1, [gap_spec])


def _fake(spec, status_id, classification):
    return TestResult(spec=spec, status_id=status_id, mexp=89, p_value=0.5, classification=classification)


def test_variation_identical_sets(statuses, small_specs):
    report = run_campaign(statuses, SeedPolicy(), small_specs[:2])
    rows = variation_report(report, report, labels=("x", "y"))
    x = [(r.test_id, r.percent) for r in rows if r.engine == "x"]
    y = [(r.test_id, r.percent) for r in rows if r.engine == "y"]
    assert x == y
    assert any(r.test_id == "all" for r in rows)


def test_variation_percentages(gap_spec):
    a = [_fake(gap_spec, i, PValueClass.DISASTROUS if i < 2 else PValueClass.CORRECT) for i in range(10)]
    b = [_fake(gap_spec, i, PValueClass.SUSPECT) for i in range(10)]
    rows = {(r.engine, r.test_id): r for r in variation_report(a, b)}
    assert rows[("a", "gap-35")].percent == 80.0
    assert rows[("a", "all")].passed == 8
    assert rows[("b", "gap-35")].percent == 100.0


def test_variation_rejects_mismatched_specs(gap_spec):
    other = gap_spec.model_copy(update={"n": 3000})
    with pytest.raises(MismatchedSpecsError):
        variation_report([_fake(gap_spec, 1, PValueClass.CORRECT)], [_fake(other, 1, PValueClass.CORRECT)])


@pytest.mark.slow
def test_mt19937_desk_scale_baseline():
    specs = list(DEFAULT_SPECS.values())
    seeds = draw_seeds(100, key=2024)
    correct = {spec.test_id: 0 for spec in specs}
    report = random_spacing_cross([mt19937_status()], 100, 2024, specs, workers=8)
    assert report.meta.seeds == seeds
    for r in report.results:
        correct[r.test_id] += r.classification == PValueClass.CORRECT
    assert all(count >= 95 for count in correct.values())


@pytest.mark.slow
@pytest.mark.parametrize("kind", PlantedFactory.KINDS)
def test_planted_generators_fail_desk_scale_battery(kind):
    mt = mt19937_status()
    report = run_campaign([mt], SeedPolicy(seed=1), list(DEFAULT_SPECS.values()), factory=PlantedFactory([mt.id], kind))
    assert report.verdicts[0].verdict == Verdict.FAIL


@pytest.mark.slow
def test_determinism_across_worker_counts_on_full_battery():
    statuses = [dc_search(89, i, 3) for i in range(4)] + [mt19937_status()]
    specs = list(DEFAULT_SPECS.values())
    one = run_campaign(statuses, SeedPolicy(), specs, workers=1)
    eight = run_campaign(statuses, SeedPolicy(), specs, workers=8)
    assert one.model_dump_json() == eight.model_dump_json()
