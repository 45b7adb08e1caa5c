"""
Status files: one parameterized status per line, either a JSON object or
space-separated key=value pairs, plus optional `seed` and `verdict`.
Writers always emit fields in canonical order.
"""
import json
import logging
from pathlib import Path
from typing import Iterable, Literal

from mtsieve.schemas import ParameterizedStatus, StatusEntry

logger = logging.getLogger(__name__)

STATUS_FIELDS = tuple(ParameterizedStatus.model_fields)
_EXTRA_FIELDS = ("seed", "verdict")


def _canonical(entry: StatusEntry) -> dict:
    data = entry.status.model_dump()
    record = {name: data[name] for name in STATUS_FIELDS}
    if entry.seed is not None:
        record["seed"] = entry.seed
    if entry.verdict is not None:
        record["verdict"] = entry.verdict
    return record


def format_status_line(entry: StatusEntry | ParameterizedStatus, fmt: Literal["json", "kv"] = "json") -> str:
    if isinstance(entry, ParameterizedStatus):
        entry = StatusEntry(status=entry)
    record = _canonical(entry)
    if fmt == "json":
        return json.dumps(record, separators=(", ", ": "))
    return " ".join(f"{key}={value}" for key, value in record.items())


def _kv_value(key: str, raw: str):
    if key in ("charpoly_digest", "verdict"):
        return raw
    return int(raw, 0)


def parse_status_line(line: str) -> StatusEntry:
    line = line.strip()
    if line.startswith("{"):
        record = json.loads(line)
    else:
        record = {}
        for token in line.split():
            key, sep, raw = token.partition("=")
            if not sep:
                raise ValueError(f"malformed key=value token '{token}'")
            record[key] = _kv_value(key, raw)
    extras = {key: record.pop(key) for key in _EXTRA_FIELDS if key in record}
    return StatusEntry(status=ParameterizedStatus.model_validate(record), **extras)


def read_status_file(path: str | Path) -> list[StatusEntry]:
    """Entries of a status file; blank lines and '#' comments are skipped."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                entries.append(parse_status_line(line))
            except ValueError as e:
                raise ValueError(f"{path}:{number}: {e}") from e
    logger.info(f"Loaded {len(entries)} statuses from {path}")
    return entries


def write_status_file(
    path: str | Path,
    entries: Iterable[StatusEntry | ParameterizedStatus],
    fmt: Literal["json", "kv"] = "json",
) -> int:
    lines = [format_status_line(e, fmt) for e in entries]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")
    logger.info(f"Wrote {len(lines)} statuses to {path}")
    return len(lines)
