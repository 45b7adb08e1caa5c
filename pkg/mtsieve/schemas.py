"""
Pydantic records shared across mtsieve: parameterized and seed statuses,
test specifications, test results and sieve reports.
"""
import re
from enum import Enum
from typing import ClassVar, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from mtsieve.errors import StatusValidationError

MASK32 = 0xFFFFFFFF
WORD_BITS = 32

# Mersenne prime exponents: 2^p - 1 is prime, so an irreducible degree-p
# characteristic polynomial is primitive.
SUPPORTED_MEXPS = (89, 127, 521, 607, 1279, 2203, 2281, 3217, 19937, 23209)

_HEX40 = re.compile(r"^[0-9a-f]{40}$")


class ParameterizedStatus(BaseModel):
    """Per-generator parameter set: recurrence shape, twist and tempering coefficients."""

    # Field order is the canonical order used by status files.
    id: int = Field(..., ge=0, le=0xFFFF, description="16-bit creator identifier")
    mexp: int = Field(..., description="Period exponent, period = 2^mexp - 1")
    word_size: Literal[32] = 32
    n: int = Field(..., ge=2, description="State length in words")
    m: int = Field(..., ge=1, description="Middle offset, 1 <= m < n")
    r: int = Field(..., ge=0, le=31, description="Split bit position")
    a: int = Field(..., ge=0, le=MASK32, description="Twist coefficient, low 16 bits carry id")
    temper_b: int = Field(..., ge=0, le=MASK32)
    temper_c: int = Field(..., ge=0, le=MASK32)
    temper_u: int = Field(11, ge=1, le=31)
    temper_s: int = Field(7, ge=1, le=31)
    temper_t: int = Field(15, ge=1, le=31)
    temper_l: int = Field(18, ge=1, le=31)
    charpoly_digest: str = Field("", description="SHA-1 hex digest of the minimal polynomial, empty if unverified")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_identities(self) -> "ParameterizedStatus":
        if self.mexp not in SUPPORTED_MEXPS:
            raise StatusValidationError(f"mexp {self.mexp} is not a supported Mersenne exponent")
        if WORD_BITS * self.n - self.r != self.mexp:
            raise StatusValidationError(
                f"32*n - r must equal mexp (n={self.n}, r={self.r}, mexp={self.mexp})"
            )
        if self.m >= self.n:
            raise StatusValidationError(f"m must be < n (m={self.m}, n={self.n})")
        if self.a & 0xFFFF != self.id:
            raise StatusValidationError(f"low 16 bits of a ({self.a & 0xFFFF:#06x}) differ from id {self.id}")
        if self.charpoly_digest and not _HEX40.match(self.charpoly_digest):
            raise StatusValidationError("charpoly_digest must be 40 lowercase hex characters")
        return self

    @property
    def upper_mask(self) -> int:
        """High (32 - r) bits."""
        return (MASK32 << self.r) & MASK32

    @property
    def lower_mask(self) -> int:
        """Low r bits."""
        return (1 << self.r) - 1

    @property
    def label(self) -> str:
        return f"mexp{self.mexp}-id{self.id}"


class SeedStatus(BaseModel):
    """User seed plus the state vector it expanded into."""

    seed: int = Field(..., ge=0, le=MASK32)
    state: list[int]
    index: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_index(self) -> "SeedStatus":
        if self.index > len(self.state):
            raise ValueError(f"index {self.index} outside [0, {len(self.state)}]")
        return self


class StatusEntry(BaseModel):
    """One line of a status file: the status plus optional seed and sieve verdict."""

    status: ParameterizedStatus
    seed: int | None = Field(None, ge=0, le=MASK32)
    verdict: str | None = None


class PValueClass(str, Enum):
    CORRECT = "correct"
    SUSPECT = "suspect"
    DISASTROUS = "disastrous"


class Verdict(str, Enum):
    PASS = "pass"
    SUSPECT_ONLY = "suspect-only"
    FAIL = "fail"


class TestName(str, Enum):
    GAP = "gap"
    HAMMING_INDEP = "hamming_indep"
    COLLISION_OVER = "collision_over"
    RANDOM_WALK = "random_walk"


class TestSpec(BaseModel):
    """Parameters of one statistical test; unused fields keep their defaults."""

    __test__: ClassVar[bool] = False

    name: TestName
    index: int = Field(..., ge=0, description="Battery number of the test")
    N: int = Field(1, ge=1, description="Replications")
    n: int = Field(..., ge=1, description="Sample size")
    r: int = Field(0, ge=0, le=31, description="Bits dropped from the top of each word")
    alpha: float = Field(0.0, ge=0.0, le=1.0)
    beta: float = Field(1.0, ge=0.0, le=1.0)
    s: int = Field(5, ge=1, le=32, description="Bits taken per value")
    L: int = Field(1200, ge=2, description="Block length in bits")
    d: int = Field(0, ge=0)
    l: int = Field(128, ge=2, description="Walk length")
    t: int = Field(2, ge=2, description="Cell-count exponent")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_bounds(self) -> "TestSpec":
        if not self.alpha < self.beta:
            raise ValueError(f"alpha ({self.alpha}) must be < beta ({self.beta})")
        if self.r + self.s > WORD_BITS:
            raise ValueError(f"r + s must not exceed 32 (r={self.r}, s={self.s})")
        return self

    @property
    def test_id(self) -> str:
        return f"{self.name.value}-{self.index}"


class TestResult(BaseModel):
    """Outcome of one (status, seed, test) run; error results carry no p-value."""

    __test__: ClassVar[bool] = False

    spec: TestSpec
    status_id: int
    mexp: int | None = None
    seed: int | None = None
    seed_index: int = 0
    statistic: float | None = None
    p_value: float | None = Field(None, ge=0.0, le=1.0)
    classification: PValueClass | None = None
    degenerate: bool = False
    error: str | None = None

    @property
    def test_id(self) -> str:
        return self.spec.test_id

    @property
    def sort_key(self) -> tuple:
        return (self.status_id, self.mexp or 0, self.test_id, self.seed_index)


class StatusVerdict(BaseModel):
    status_id: int
    mexp: int | None = None
    seed_index: int = 0
    classifications: dict[str, PValueClass | None]
    verdict: Verdict


class TestSummary(BaseModel):
    """Per-test aggregation across every status of a campaign."""

    __test__: ClassVar[bool] = False

    test_id: str
    total: int
    correct: int
    suspect: int
    disastrous: int
    errors: int
    degenerate: int
    excess_probability: float | None = None
    ks_pvalue: float | None = None
    flagged: bool = False


class GridCell(BaseModel):
    param_index: int
    seed_index: int
    status_id: int
    seed: int
    classification: str

    @field_validator("classification")
    @classmethod
    def _known_class(cls, value: str) -> str:
        allowed = {c.value for c in PValueClass} | {"error"}
        if value not in allowed:
            raise ValueError(f"unknown grid classification '{value}'")
        return value


class SeedPolicy(BaseModel):
    """fixed: every status gets `seed`; random-spacing: `n_seeds` seeds drawn from `key`."""

    kind: Literal["fixed", "random-spacing"] = "fixed"
    seed: int = Field(0, ge=0, le=MASK32)
    n_seeds: int = Field(1, ge=1)
    key: int = Field(0, ge=0)


class CampaignMeta(BaseModel):
    kind: Literal["sieve", "cross"]
    name: str = "campaign"
    engine: str = "mt"
    mexps: list[int]
    specs: list[TestSpec]
    n_statuses: int
    n_seeds: int
    seeds: list[int]
    seed_policy: SeedPolicy
    excess_alpha: float


class SieveReport(BaseModel):
    meta: CampaignMeta
    statuses: list[ParameterizedStatus]
    results: list[TestResult]
    verdicts: list[StatusVerdict]
    tests: list[TestSummary]
    verdict_histogram: dict[str, int]
    grid: list[GridCell] | None = None
