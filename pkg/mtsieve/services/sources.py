"""
Word sources fed to the statistical tests.

Anything with `next_block(count) -> np.ndarray[uint32]` is a source: the MT
engine, finite arrays for hand-made streams, and the planted bad generators
used to check that the sieve catches broken statuses.
"""
import logging
from typing import Protocol

import numpy as np

from mtsieve.errors import InsufficientStreamError
from mtsieve.schemas import MASK32, ParameterizedStatus
from mtsieve.services.engine import init_from_seed

logger = logging.getLogger(__name__)


class WordSource(Protocol):
    def next_block(self, count: int) -> np.ndarray: ...


class ArraySource:
    """Finite stream over a fixed word array."""

    def __init__(self, words):
        self._words = np.asarray(words, dtype=np.uint32)
        self._pos = 0

    @classmethod
    def from_floats(cls, values) -> "ArraySource":
        """Words whose [0,1) image (with no bits dropped) is `values`."""
        scaled = np.floor(np.asarray(values, dtype=np.float64) * 4294967296.0)
        return cls(np.clip(scaled, 0, MASK32).astype(np.uint32))

    @property
    def remaining(self) -> int:
        return len(self._words) - self._pos

    def next_block(self, count: int) -> np.ndarray:
        if count > self.remaining:
            raise InsufficientStreamError()
        block = self._words[self._pos:self._pos + count]
        self._pos += count
        return block.copy()


class ConstantSource:
    """Planted generator emitting the same word forever."""

    def __init__(self, word: int = 0):
        self.word = word & MASK32

    def next_block(self, count: int) -> np.ndarray:
        return np.full(count, self.word, dtype=np.uint32)


# x^16 + x^14 + x^13 + x^11 + 1, maximal length
LFSR16_TAPS = (16, 14, 13, 11)
LFSR16_PERIOD = (1 << 16) - 1


def _lfsr16_cycle(fill: int) -> np.ndarray:
    """One full period of output words, 32 LFSR bits per word (MSB first)."""
    state = fill & 0xFFFF or 1
    bits = np.empty(LFSR16_PERIOD, dtype=np.uint8)
    for i in range(LFSR16_PERIOD):
        bits[i] = state & 1
        fb = 0
        for tap in LFSR16_TAPS:
            fb ^= (state >> (16 - tap)) & 1
        state = (state >> 1) | (fb << 15)
    # gcd(32, 65535) = 1: the word sequence also has period 65535.
    positions = (np.arange(LFSR16_PERIOD, dtype=np.int64)[:, None] * 32 + np.arange(32)) % LFSR16_PERIOD
    packed = np.packbits(bits[positions], axis=1)
    return packed.view(">u4").ravel().astype(np.uint32)


class Lfsr16Source:
    """Planted short-period generator: a degree-16 LFSR packed into 32-bit words."""

    def __init__(self, fill: int = 1):
        self._cycle = _lfsr16_cycle(fill)
        self._pos = 0

    def next_block(self, count: int) -> np.ndarray:
        idx = np.arange(self._pos, self._pos + count) % LFSR16_PERIOD
        self._pos = (self._pos + count) % LFSR16_PERIOD
        return self._cycle[idx]


def mt_factory(params: ParameterizedStatus, seed: int) -> WordSource:
    return init_from_seed(params, seed)


class PlantedFactory:
    """Source factory replacing chosen status IDs with a planted bad generator."""

    KINDS = ("constant", "lfsr16")

    def __init__(self, bad_ids, kind: str = "constant"):
        if kind not in self.KINDS:
            raise ValueError(f"unknown planted kind '{kind}', expected one of {self.KINDS}")
        self.bad_ids = frozenset(bad_ids)
        self.kind = kind

    def __call__(self, params: ParameterizedStatus, seed: int) -> WordSource:
        if params.id not in self.bad_ids:
            return init_from_seed(params, seed)
        logger.debug(f"Planting {self.kind} source for status {params.label}")
        if self.kind == "constant":
            return ConstantSource(0)
        return Lfsr16Source(seed)


def draw_seeds(n_seeds: int, key: int) -> list[int]:
    """Seeds from a counter-based Philox stream keyed by `key`; replayable from the key alone."""
    rng = np.random.Generator(np.random.Philox(key=key))
    return [int(s) for s in rng.integers(0, 1 << 32, size=n_seeds, dtype=np.uint64)]
