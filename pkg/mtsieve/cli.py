"""
Command-line entry points: mint statuses, dump words, run single tests,
run sieve and Random Spacing campaigns, regenerate reports, serve results.

Exit codes: 0 on success, 1 on usage errors (bad flags, invalid configs or
status files, no statuses), 2 on campaign-level failures.
"""
import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from mtsieve.config import CampaignConfig, parse_id_range, settings
from mtsieve.errors import ConfigError, MtSieveError, UsageError
from mtsieve.schemas import SUPPORTED_MEXPS, ParameterizedStatus, SeedPolicy
from mtsieve.services import dc, reports, sieve
from mtsieve.services.engine import PRESETS, init_from_seed
from mtsieve.services.sources import PlantedFactory, mt_factory
from mtsieve.services.stat_tests import DEFAULT_SPECS, default_spec, run_test
from mtsieve.services.status_file import format_status_line, read_status_file, write_status_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    """Reports bad flags as UsageError instead of exiting with argparse's status 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level), format=settings.log_format, stream=sys.stderr)


def _number(raw: str) -> int:
    return int(raw, 0)


def _select(statuses: list[ParameterizedStatus], mexp: int | None, ids: range | None) -> list[ParameterizedStatus]:
    return [
        s for s in statuses
        if (mexp is None or s.mexp == mexp) and (ids is None or s.id in ids)
    ]


def load_statuses(
    status_file: str | None = None,
    preset: str | None = None,
    mexp: int | None = None,
    ids: range | None = None,
) -> list[ParameterizedStatus]:
    """Statuses from a status file (filtered by mexp and id range) or from a preset."""
    if preset is not None:
        statuses = [PRESETS[preset]()]
    elif status_file is not None:
        statuses = [entry.status for entry in read_status_file(status_file)]
    else:
        raise UsageError("either a status file or a preset is required")
    statuses = _select(statuses, mexp, ids)
    if not statuses:
        raise UsageError("no statuses")
    return statuses


def _one_status(args) -> ParameterizedStatus:
    if args.preset:
        return PRESETS[args.preset]()
    if args.status is None or args.id is None:
        raise UsageError("give --status FILE --id ID, or --preset")
    matches = load_statuses(args.status, ids=range(args.id, args.id + 1), mexp=args.mexp)
    if len(matches) > 1:
        raise UsageError(f"id {args.id} matches {len(matches)} statuses, narrow it with --mexp")
    return matches[0]


def _parse_sets(pairs: list[str]) -> dict[str, int | float]:
    overrides: dict[str, int | float] = {}
    for pair in pairs or []:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise UsageError(f"--set expects field=value, got '{pair}'")
        try:
            overrides[key] = int(raw, 0)
        except ValueError:
            overrides[key] = float(raw)
    return overrides


def _store(report) -> None:
    from mtsieve.database import SessionLocal, engine
    from mtsieve.services.store import init_db, save_report

    init_db(engine)
    db = SessionLocal()
    try:
        campaign = save_report(db, report)
        print(f"stored as campaign #{campaign.id}")
    finally:
        db.close()


def cmd_dc(args) -> int:
    ids = parse_id_range(args.ids)
    statuses = dc.mint_batch(args.mexp, ids, args.seed, workers=args.workers, max_attempts=args.max_attempts)
    if args.out:
        write_status_file(args.out, statuses, fmt=args.format)
    else:
        for status in statuses:
            print(format_status_line(status, args.format))
    return EXIT_OK


def cmd_gen(args) -> int:
    status = _one_status(args)
    words = init_from_seed(status, args.seed).next_block(args.count)
    sys.stdout.write("".join(f"{int(w)}\n" for w in words))
    return EXIT_OK


def cmd_test(args) -> int:
    status = _one_status(args)
    spec = default_spec(args.spec, **_parse_sets(args.set))
    result = run_test(init_from_seed(status, args.seed), spec, status_id=status.id, max_words=args.max_words)
    result = result.model_copy(update={"mexp": status.mexp, "seed": args.seed})
    sys.stdout.write(reports.results_table([result]))
    return EXIT_OK


def _campaign_inputs(args):
    config = CampaignConfig.load(
        args.config,
        workers=args.workers,
        output_dir=args.out,
    )
    statuses = load_statuses(config.status_file, config.preset, config.mexp, config.id_range)
    specs = [default_spec(t, **config.overrides.get(t, {})) for t in config.tests]
    factory = PlantedFactory(args.plant, args.plant_kind) if args.plant else mt_factory
    max_words = config.max_words or settings.MTSIEVE_MAX_WORDS
    return config, statuses, specs, factory, max_words


def _finish(report, config: CampaignConfig, store: bool) -> int:
    reports.write_report(report, config.output_dir)
    print(reports.render_summary(report), end="")
    if store:
        _store(report)
    return EXIT_OK


def cmd_sieve(args) -> int:
    config, statuses, specs, factory, max_words = _campaign_inputs(args)
    if config.seed_policy == "random-spacing":
        policy = SeedPolicy(kind="random-spacing", n_seeds=config.n_seeds, key=config.seed_key)
    else:
        policy = SeedPolicy(kind="fixed", seed=config.seed)
    report = sieve.run_campaign(
        statuses,
        policy,
        specs,
        max_words=max_words,
        workers=config.workers,
        factory=factory,
        excess_alpha=config.excess_alpha,
        name=config.name,
        engine=config.engine,
    )
    return _finish(report, config, not args.no_store)


def cmd_cross(args) -> int:
    config, statuses, specs, factory, max_words = _campaign_inputs(args)
    report = sieve.random_spacing_cross(
        statuses,
        config.n_seeds,
        config.seed_key,
        specs,
        max_words=max_words,
        workers=config.workers,
        factory=factory,
        excess_alpha=config.excess_alpha,
        name=config.name,
        engine=config.engine,
    )
    return _finish(report, config, not args.no_store)


def cmd_report(args) -> int:
    report = reports.load_report(args.in_dir)
    out = args.out or args.in_dir
    reports.write_tables(report, out)
    if args.against:
        other = reports.load_report(args.against)
        tests = [t.strip() for t in args.tests.split(",")] if args.tests else None
        labels = (report.meta.engine, other.meta.engine)
        if labels[0] == labels[1]:
            labels = (f"{labels[0]}-a", f"{labels[1]}-b")
        rows = sieve.variation_report(report, other, tests, labels=labels)
        with open(Path(out) / "variation.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(reports.variation_csv(rows))
    print(reports.render_summary(report), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("mtsieve.main:app", host=args.host, port=args.port, log_level=args.log_level.lower())
    return EXIT_OK


def _add_status_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--status", help="status file")
    p.add_argument("--id", type=_number, help="status id within the file")
    p.add_argument("--mexp", type=int, choices=SUPPORTED_MEXPS, help="disambiguate ids shared across mexp")
    p.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
    p.add_argument("--seed", type=_number, default=0)


def _add_campaign(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="campaign config (JSON or key=value)")
    p.add_argument("--workers", type=int, help="overrides the config and MTSIEVE_WORKERS")
    p.add_argument("--out", help="output directory, overrides the config")
    p.add_argument("--plant", type=_number, action="append", help="replace this status id with a planted bad source")
    p.add_argument("--plant-kind", choices=PlantedFactory.KINDS, default="constant")
    p.add_argument("--no-store", action="store_true", help="do not persist the report in the database")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mtsieve", description="Parameterized Mersenne Twister minting and sieving")
    parser.add_argument("--log-level", default=settings.MTSIEVE_LOG_LEVEL,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dc", help="mint statuses with the dynamic creator")
    p.add_argument("--mexp", type=int, required=True, choices=SUPPORTED_MEXPS)
    p.add_argument("--ids", required=True, help="inclusive id range A..B")
    p.add_argument("--out", help="status file to write (stdout if omitted)")
    p.add_argument("--seed", type=_number, default=0, help="search seed")
    p.add_argument("--workers", type=int, default=settings.MTSIEVE_WORKERS)
    p.add_argument("--format", choices=["json", "kv"], default="json")
    p.add_argument("--max-attempts", type=int, default=dc.DEFAULT_MAX_ATTEMPTS)
    p.set_defaults(func=cmd_dc)

    p = sub.add_parser("gen", help="dump tempered words, decimal, one per line")
    _add_status_source(p)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("test", help="run one statistical test")
    _add_status_source(p)
    p.add_argument("--spec", required=True, choices=sorted(DEFAULT_SPECS))
    p.add_argument("--set", action="append", metavar="FIELD=VALUE", help="override a spec field")
    p.add_argument("--max-words", type=int, default=settings.MTSIEVE_MAX_WORDS)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("sieve", help="run a sieving campaign")
    _add_campaign(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("cross", help="run a Random Spacing campaign")
    _add_campaign(p)
    p.set_defaults(func=cmd_cross)

    p = sub.add_parser("report", help="regenerate report tables")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", help="output directory (defaults to --in)")
    p.add_argument("--against", help="second report directory for a variation table")
    p.add_argument("--tests", help="comma-separated tests of interest for the variation table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve stored campaigns over HTTP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    _configure_logging(args.log_level)
    try:
        return args.func(args)
    except (UsageError, ConfigError, ValidationError, FileNotFoundError) as e:
        print(f"mtsieve: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MtSieveError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"mtsieve: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())
