"""
Report files: CSV tables light enough to parse with scripts, a plain-text
summary, the full report as JSON, and the two tiers of verified statuses.
Nothing run-dependent (timings, worker count) is written, so files are
byte-identical for identical campaigns.
"""
import csv
import io
import logging
from pathlib import Path

from mtsieve.schemas import SieveReport, StatusEntry, TestResult, Verdict
from mtsieve.services.sieve import VariationRow
from mtsieve.services.status_file import write_status_file

logger = logging.getLogger(__name__)

REPORT_JSON = "report.json"
NOT_IMPLEMENTED = ("snpair_ClosePairs",)
_VERDICT_ORDER = {Verdict.PASS: 0, Verdict.SUSPECT_ONLY: 1, Verdict.FAIL: 2}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _csv(header: list[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buffer.getvalue()


def results_table(results: list[TestResult]) -> str:
    header = ["status_id", "test_id", "statistic", "p_value", "classification", "degenerate_flag",
              "mexp", "seed_index", "seed", "error"]
    rows = (
        (r.status_id, r.test_id, r.statistic, r.p_value, r.classification, r.degenerate,
         r.mexp, r.seed_index, r.seed, r.error)
        for r in results
    )
    return _csv(header, rows)


def results_csv(report: SieveReport) -> str:
    return results_table(report.results)


def tests_csv(report: SieveReport) -> str:
    header = ["test_id", "total", "correct", "suspect", "disastrous", "errors", "degenerate",
              "excess_probability", "ks_pvalue", "flagged"]
    rows = (
        (t.test_id, t.total, t.correct, t.suspect, t.disastrous, t.errors, t.degenerate,
         t.excess_probability, t.ks_pvalue, t.flagged)
        for t in report.tests
    )
    return _csv(header, rows)


def verdicts_csv(report: SieveReport) -> str:
    test_ids = [spec.test_id for spec in report.meta.specs]
    header = ["status_id", "mexp", "seed_index", "verdict", *test_ids]
    rows = (
        (v.status_id, v.mexp, v.seed_index, v.verdict, *(v.classifications.get(t) or "error" for t in test_ids))
        for v in report.verdicts
    )
    return _csv(header, rows)


def grid_csv(report: SieveReport) -> str:
    header = ["param_index", "seed_index", "class", "status_id", "seed"]
    rows = ((c.param_index, c.seed_index, c.classification, c.status_id, c.seed) for c in report.grid or [])
    return _csv(header, rows)


def variation_csv(rows: list[VariationRow]) -> str:
    return _csv(["engine", "test_id", "passed", "total", "percent"],
                ((r.engine, r.test_id, r.passed, r.total, r.percent) for r in rows))


def status_verdicts(report: SieveReport) -> dict[tuple[int, int], Verdict]:
    """Worst verdict of each status over all of its seeds."""
    worst: dict[tuple[int, int], Verdict] = {}
    for v in report.verdicts:
        key = (v.status_id, v.mexp or 0)
        if key not in worst or _VERDICT_ORDER[v.verdict] > _VERDICT_ORDER[worst[key]]:
            worst[key] = v.verdict
    return worst


def render_summary(report: SieveReport) -> str:
    meta = report.meta
    lines = [
        f"campaign: {meta.name} ({meta.kind})",
        f"engine: {meta.engine}",
        f"mexp: {', '.join(str(m) for m in meta.mexps)}",
        f"statuses: {meta.n_statuses}  seeds: {meta.n_seeds}  seed policy: {meta.seed_policy.kind}"
        + (f" (key {meta.seed_policy.key})" if meta.seed_policy.kind == "random-spacing" else f" (seed {meta.seed_policy.seed})"),
        f"results: {len(report.results)}",
        "",
        "verdicts:",
    ]
    for verdict, count in report.verdict_histogram.items():
        lines.append(f"  {verdict:<13} {count}")
    lines += ["", "tests:"]
    for t in report.tests:
        excess = "-" if t.excess_probability is None else f"{t.excess_probability:.3e}"
        ks = "-" if t.ks_pvalue is None else f"{t.ks_pvalue:.4f}"
        flag = "  FLAGGED" if t.flagged else ""
        lines.append(
            f"  {t.test_id:<20} correct={t.correct} suspect={t.suspect} disastrous={t.disastrous} "
            f"errors={t.errors} degenerate={t.degenerate} excess={excess} ks={ks}{flag}"
        )
    for name in NOT_IMPLEMENTED:
        lines.append(f"  {name:<20} not implemented")
    if report.grid is not None:
        failing = sorted({c.param_index for c in report.grid if c.classification == "disastrous"})
        full = [
            p for p in failing
            if all(c.classification == "disastrous" for c in report.grid if c.param_index == p)
        ]
        lines += ["", f"grid: {len(report.grid)} cells, full fail columns: {full}"]
    worst = status_verdicts(report)
    tier1 = sum(1 for v in worst.values() if v == Verdict.PASS)
    tier2 = sum(1 for v in worst.values() if v == Verdict.SUSPECT_ONLY)
    lines += ["", f"verified: {tier1} pass, {tier2} suspect-only (second tier)"]
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_tables(report: SieveReport, out_dir: str | Path) -> list[Path]:
    """Regenerate every table and the summary from a report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "results.csv": results_csv(report),
        "tests.csv": tests_csv(report),
        "verdicts.csv": verdicts_csv(report),
        "summary.txt": render_summary(report),
    }
    if report.grid is not None:
        files["grid.csv"] = grid_csv(report)
    written = []
    for name, text in files.items():
        _write(out / name, text)
        written.append(out / name)
    worst = status_verdicts(report)
    tiers = {"verified.jsonl": Verdict.PASS, "verified-suspect.jsonl": Verdict.SUSPECT_ONLY}
    for name, tier in tiers.items():
        entries = [
            StatusEntry(status=s, verdict=tier.value)
            for s in report.statuses
            if worst.get((s.id, s.mexp)) == tier
        ]
        write_status_file(out / name, entries)
        written.append(out / name)
    return written


def write_report(report: SieveReport, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / REPORT_JSON, report.model_dump_json(indent=2) + "\n")
    written = [out / REPORT_JSON, *write_tables(report, out)]
    logger.info(f"Wrote {len(written)} report files to {out}")
    return written


def load_report(in_dir: str | Path) -> SieveReport:
    path = Path(in_dir) / REPORT_JSON
    with open(path, encoding="utf-8") as fh:
        return SieveReport.model_validate_json(fh.read())
