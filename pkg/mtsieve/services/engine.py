"""
Generic Mersenne-Twister-family engine.

A Generator is fully determined by a (ParameterizedStatus, seed) pair. The
twist is the classic MT recurrence with a configurable split bit r, middle
offset m and twist coefficient a; tempering uses the status masks and shifts.
Large states are twisted with numpy in chunks of n - m words, small ones with
a plain Python loop.
"""
import logging

import numpy as np

from mtsieve.schemas import MASK32, WORD_BITS, ParameterizedStatus, SeedStatus, SUPPORTED_MEXPS

logger = logging.getLogger(__name__)

INIT_MULTIPLIER = 1812433253
# Below this chunk width the numpy twist costs more than it saves.
_VECTOR_MIN_CHUNK = 32

MT19937_ID = 0xB0DF
MT19937_A = 0x9908B0DF
MT19937_B = 0x9D2C5680
MT19937_C = 0xEFC60000


def shape_for(mexp: int) -> tuple[int, int, int]:
    """(n, m, r) with 32*n - r == mexp."""
    if mexp not in SUPPORTED_MEXPS:
        raise ValueError(f"mexp {mexp} is not a supported Mersenne exponent {SUPPORTED_MEXPS}")
    n = -(-mexp // WORD_BITS)
    r = WORD_BITS * n - mexp
    m = 397 if mexp == 19937 else max(1, n // 2)
    return n, m, r


def mt19937_status() -> ParameterizedStatus:
    """The original MT19937 parameter set."""
    return ParameterizedStatus(
        id=MT19937_ID,
        mexp=19937,
        n=624,
        m=397,
        r=31,
        a=MT19937_A,
        temper_b=MT19937_B,
        temper_c=MT19937_C,
        temper_u=11,
        temper_s=7,
        temper_t=15,
        temper_l=18,
    )


PRESETS = {"mt19937": mt19937_status}


def temper(word: int, params: ParameterizedStatus) -> int:
    y = word & MASK32
    y ^= y >> params.temper_u
    y ^= (y << params.temper_s) & params.temper_b
    y ^= (y << params.temper_t) & params.temper_c
    y ^= y >> params.temper_l
    return y & MASK32


def _undo_right(y: int, shift: int) -> int:
    x = y
    for _ in range(WORD_BITS // shift + 1):
        x = y ^ (x >> shift)
    return x & MASK32


def _undo_left(y: int, shift: int, mask: int) -> int:
    x = y
    for _ in range(WORD_BITS // shift + 1):
        x = y ^ ((x << shift) & mask)
    return x & MASK32


def untemper(word: int, params: ParameterizedStatus) -> int:
    """Inverse of temper: the four steps undone in reverse order."""
    y = _undo_right(word & MASK32, params.temper_l)
    y = _undo_left(y, params.temper_t, params.temper_c)
    y = _undo_left(y, params.temper_s, params.temper_b)
    return _undo_right(y, params.temper_u)


def temper_array(words: np.ndarray, params: ParameterizedStatus) -> np.ndarray:
    y = words.astype(np.uint32, copy=True)
    y ^= y >> np.uint32(params.temper_u)
    y ^= (y << np.uint32(params.temper_s)) & np.uint32(params.temper_b)
    y ^= (y << np.uint32(params.temper_t)) & np.uint32(params.temper_c)
    y ^= y >> np.uint32(params.temper_l)
    return y


def seed_state(seed: int, n: int) -> list[int]:
    state = [seed & MASK32]
    for i in range(1, n):
        prev = state[-1]
        state.append((INIT_MULTIPLIER * (prev ^ (prev >> 30)) + i) & MASK32)
    return state


class Generator:
    """One MT-family generator instance; not safe to share between threads."""

    def __init__(self, params: ParameterizedStatus, state, index: int, seed: int = 0):
        if len(state) != params.n:
            raise ValueError(f"state has {len(state)} words, status expects n={params.n}")
        if not 0 <= index <= params.n:
            raise ValueError(f"index {index} outside [0, {params.n}]")
        self.params = params
        self.seed = seed
        self._state = np.asarray(state, dtype=np.uint32).copy()
        self._index = index
        self._vectorized = params.n - params.m >= _VECTOR_MIN_CHUNK
        self._upper = params.upper_mask
        self._lower = params.lower_mask

    @classmethod
    def from_state(cls, params: ParameterizedStatus, state, index: int | None = None) -> "Generator":
        """Build from an explicit state vector (the all-zero state included)."""
        return cls(params, state, params.n if index is None else index)

    @property
    def seed_status(self) -> SeedStatus:
        return SeedStatus(seed=self.seed, state=[int(w) for w in self._state], index=self._index)

    def _twist(self) -> None:
        if self._vectorized:
            self._twist_vector()
        else:
            self._twist_scalar()
        self._index = 0

    def _twist_scalar(self) -> None:
        n, m, a = self.params.n, self.params.m, self.params.a
        upper, lower = self._upper, self._lower
        mt = self._state.tolist()
        for k in range(n):
            y = (mt[k] & upper) | (mt[(k + 1) % n] & lower)
            mt[k] = mt[(k + m) % n] ^ (y >> 1) ^ (a if y & 1 else 0)
        self._state[:] = mt

    def _twist_vector(self) -> None:
        n, m = self.params.n, self.params.m
        mt = self._state
        upper, lower = np.uint32(self._upper), np.uint32(self._lower)
        a, zero, one = np.uint32(self.params.a), np.uint32(0), np.uint32(1)
        # Words k + m - n read by a chunk lie n - m behind it, so chunks of
        # that width only read words already twisted in this pass.
        width = n - m
        lo = 0
        while lo < n - 1:
            hi = min(lo + width, n - 1)
            k = np.arange(lo, hi)
            y = (mt[lo:hi] & upper) | (mt[lo + 1:hi + 1] & lower)
            mag = np.where((y & one).astype(bool), a, zero)
            mt[lo:hi] = mt[(k + m) % n] ^ (y >> one) ^ mag
            lo = hi
        y = int((int(mt[n - 1]) & self._upper) | (int(mt[0]) & self._lower))
        mt[n - 1] = int(mt[m - 1]) ^ (y >> 1) ^ (self.params.a if y & 1 else 0)

    def next_u32(self) -> int:
        if self._index >= self.params.n:
            self._twist()
        word = int(self._state[self._index])
        self._index += 1
        return temper(word, self.params)

    def next_f64_01(self) -> float:
        return self.next_u32() / 4294967296.0

    def next_block(self, count: int) -> np.ndarray:
        """Next `count` tempered words as a uint32 array."""
        n = self.params.n
        raw = np.empty(count, dtype=np.uint32)
        filled = 0
        if not self._vectorized and count > n:
            # Stay in Python lists for short states; per-twist numpy calls dominate otherwise.
            mt = self._state.tolist()
            out: list[int] = []
            index = self._index
            params, upper, lower = self.params, self._upper, self._lower
            m, a = params.m, params.a
            while len(out) < count:
                if index >= n:
                    for k in range(n):
                        y = (mt[k] & upper) | (mt[(k + 1) % n] & lower)
                        mt[k] = mt[(k + m) % n] ^ (y >> 1) ^ (a if y & 1 else 0)
                    index = 0
                take = min(n - index, count - len(out))
                out.extend(mt[index:index + take])
                index += take
            self._state[:] = mt
            self._index = index
            raw[:] = out
            return temper_array(raw, self.params)
        while filled < count:
            if self._index >= n:
                self._twist()
            take = min(n - self._index, count - filled)
            raw[filled:filled + take] = self._state[self._index:self._index + take]
            self._index += take
            filled += take
        return temper_array(raw, self.params)


def init_from_seed(params: ParameterizedStatus, seed: int) -> Generator:
    """Seed with the MT initializer; index = n so the first draw twists."""
    state = seed_state(seed, params.n)
    gen = Generator(params, state, params.n, seed=seed & MASK32)
    if not gen._state.any():
        # The initializer adds i >= 1, so this only guards hand-built statuses.
        raise ValueError("seeding produced the all-zero state")
    logger.debug(f"Seeded {params.label} with {seed}")
    return gen


def next_u32(gen: Generator) -> int:
    return gen.next_u32()


def next_f64_01(gen: Generator) -> float:
    return gen.next_f64_01()
