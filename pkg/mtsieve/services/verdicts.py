"""
p-value bands and per-status verdicts.

correct: [0.001, 0.999]; disastrous: below 1e-10 or above 1 - 1e-10;
suspect: everything else. A status fails only on a disastrous p-value.
"""
import math

from scipy.stats import binom

from mtsieve.errors import InvalidPValueError, MixedStatusError
from mtsieve.schemas import PValueClass, StatusVerdict, TestResult, Verdict

CORRECT_LOW = 0.001
CORRECT_HIGH = 0.999
DISASTER_EPS = 1e-10
# Probability that a p-value from a sound generator lands in a suspect band.
SUSPECT_PROBABILITY = 2 * CORRECT_LOW

_RANK = {PValueClass.CORRECT: 0, None: 1, PValueClass.SUSPECT: 2, PValueClass.DISASTROUS: 3}


def classify_pvalue(p: float) -> PValueClass:
    if p is None or math.isnan(p) or not 0.0 <= p <= 1.0:
        raise InvalidPValueError(f"p-value {p} outside [0, 1]")
    if CORRECT_LOW <= p <= CORRECT_HIGH:
        return PValueClass.CORRECT
    if p < DISASTER_EPS or p > 1.0 - DISASTER_EPS:
        return PValueClass.DISASTROUS
    return PValueClass.SUSPECT


def status_verdict(results: list[TestResult]) -> StatusVerdict:
    """fail on any disastrous result, pass when all are correct, suspect-only otherwise.

    An error result is not correct, so it keeps a status out of pass without failing it.
    """
    if not results:
        raise ValueError("status_verdict needs at least one result")
    keys = {(r.status_id, r.mexp, r.seed_index) for r in results}
    if len(keys) != 1:
        raise MixedStatusError(f"results mix several statuses: {sorted(keys, key=str)}")
    classes: dict[str, PValueClass | None] = {}
    for r in results:
        if r.test_id not in classes or _RANK[r.classification] > _RANK[classes[r.test_id]]:
            classes[r.test_id] = r.classification
    observed = [r.classification for r in results]
    if PValueClass.DISASTROUS in observed:
        verdict = Verdict.FAIL
    elif all(c == PValueClass.CORRECT for c in observed):
        verdict = Verdict.PASS
    else:
        verdict = Verdict.SUSPECT_ONLY
    first = results[0]
    return StatusVerdict(
        status_id=first.status_id,
        mexp=first.mexp,
        seed_index=first.seed_index,
        classifications=classes,
        verdict=verdict,
    )


def suspect_excess_probability(count: int, n_statuses: int, p: float = SUSPECT_PROBABILITY) -> float:
    """P(X >= count) for X ~ Binomial(n_statuses, p), taken from the log survival function."""
    if not 0.0 < p < 1.0:
        raise InvalidPValueError(f"binomial probability {p} outside (0, 1)")
    if not 0 <= count <= n_statuses:
        raise ValueError(f"count {count} outside [0, {n_statuses}]")
    if count == 0:
        return 1.0
    return min(1.0, math.exp(float(binom.logsf(count - 1, n_statuses, p))))


def worst_class(classes) -> str:
    """Worst of a set of classifications; "error" when none is available."""
    present = [c for c in classes if c is not None]
    if not present:
        return "error"
    for candidate in (PValueClass.DISASTROUS, PValueClass.SUSPECT):
        if candidate in present:
            return candidate.value
    return PValueClass.CORRECT.value
