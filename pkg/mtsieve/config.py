"""
Configuration management using Pydantic Settings.
Loads worker count, output directory and store location from environment
variables, and campaign configs from JSON or flat key=value files.
"""
import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings

from mtsieve.errors import ConfigError


class Settings(BaseSettings):
    """Application settings loaded from environment variables (or .env)."""

    # Process pool size for DC batches and campaigns; 1 runs everything inline
    MTSIEVE_WORKERS: int = 1
    MTSIEVE_OUTPUT_DIR: str = "./sieve-out"
    MTSIEVE_DATABASE_URL: str = "sqlite:///./mtsieve.db"
    MTSIEVE_LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    # Upper bound on words drawn by a single test run
    MTSIEVE_MAX_WORDS: int = 1 << 28

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": True,
        "extra": "ignore",
    }

    @property
    def log_format(self) -> str:
        return "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# Global settings instance
settings = Settings()

DEFAULT_TESTS = ["gap-35", "hamming_indep-100", "collision_over-9", "random_walk-74"]


def parse_id_range(text: str) -> range:
    """'A..B' (inclusive) or a single ID, within 16 bits."""
    start, sep, end = text.partition("..")
    try:
        lo = int(start, 0)
        hi = int(end, 0) if sep else lo
    except ValueError:
        raise ConfigError(f"malformed id range '{text}', expected A..B") from None
    if not 0 <= lo <= hi <= 0xFFFF:
        raise ConfigError(f"id range '{text}' must satisfy 0 <= A <= B <= 65535")
    return range(lo, hi + 1)


class CampaignConfig(BaseModel):
    """One sieve or Random Spacing campaign; defaults mirror the desk-scale test specs."""

    name: str = "campaign"
    status_file: str | None = None
    preset: Literal["mt19937"] | None = None
    mexp: int | None = None
    ids: str | None = None
    seed_policy: Literal["fixed", "random-spacing"] = "fixed"
    seed: int = Field(0, ge=0, le=0xFFFFFFFF)
    n_seeds: int = Field(1, ge=1)
    seed_key: int = Field(0, ge=0)
    tests: list[str] = Field(default_factory=lambda: list(DEFAULT_TESTS))
    overrides: dict[str, dict[str, int | float]] = Field(default_factory=dict)
    workers: int = Field(default_factory=lambda: settings.MTSIEVE_WORKERS, ge=1)
    output_dir: str = Field(default_factory=lambda: settings.MTSIEVE_OUTPUT_DIR)
    max_words: int | None = Field(None, ge=1)
    engine: str = "mt"
    excess_alpha: float = Field(1e-4, gt=0.0, lt=1.0)

    @field_validator("tests", mode="before")
    @classmethod
    def _split_tests(cls, value):
        if isinstance(value, str):
            return [t.strip() for t in value.split(",") if t.strip()]
        return value

    @model_validator(mode="after")
    def _check_sources(self) -> "CampaignConfig":
        if self.status_file is None and self.preset is None:
            raise ConfigError("either status_file or preset is required")
        if self.status_file is not None and not Path(self.status_file).is_file():
            raise ConfigError(f"status file '{self.status_file}' does not exist")
        if self.ids is not None:
            parse_id_range(self.ids)
        return self

    @property
    def id_range(self) -> range | None:
        return parse_id_range(self.ids) if self.ids else None

    @classmethod
    def load(cls, path: str | Path, **env_overrides) -> "CampaignConfig":
        """Read a JSON document or flat key=value lines (`override.<test_id>.<field>=v` for spec overrides)."""
        text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text) if text.lstrip().startswith("{") else _parse_flat(text)
        data.update({k: v for k, v in env_overrides.items() if v is not None})
        base = Path(path).parent
        if data.get("status_file") and not Path(data["status_file"]).is_absolute():
            data["status_file"] = str(base / data["status_file"])
        return cls.model_validate(data)


def _number(raw: str) -> int | float:
    try:
        return int(raw, 0)
    except ValueError:
        return float(raw)


def _parse_flat(text: str) -> dict:
    data: dict = {}
    overrides: dict[str, dict[str, int | float]] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {number}: expected key=value, got '{line}'")
        key, value = key.strip(), value.strip()
        if key.startswith("override."):
            _, test_id, field = key.split(".", 2)
            overrides.setdefault(test_id, {})[field] = _number(value)
        else:
            data[key] = value
    if overrides:
        data["overrides"] = overrides
    return data
