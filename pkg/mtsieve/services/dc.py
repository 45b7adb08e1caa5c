"""
Dynamic-Creator style minting of parameterized statuses.

Each candidate embeds the creator ID in the low half of the twist coefficient,
draws the upper half and the tempering masks from a Philox stream keyed by
(search_seed, id, mexp), and is accepted when the minimal polynomial of its
output bit 0 has degree mexp and is irreducible. With mexp a Mersenne prime
exponent that makes the period 2^mexp - 1.
"""
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from mtsieve.errors import DegeneratePolynomialError, DuplicateStatusError, SearchExhaustedError
from mtsieve.schemas import ParameterizedStatus
from mtsieve.services.engine import init_from_seed, shape_for
from mtsieve.services.gf2 import Gf2Poly, berlekamp_massey, is_irreducible, poly_digest

logger = logging.getLogger(__name__)

PROBE_SEED = 1
DEFAULT_MAX_ATTEMPTS = 100_000


def minimal_polynomial(params: ParameterizedStatus, probe_seed: int = PROBE_SEED) -> Gf2Poly:
    """Minimal polynomial of bit 0 over 2*mexp + 64 outputs; raises if its degree is below mexp."""
    gen = init_from_seed(params, probe_seed)
    bits = gen.next_block(2 * params.mexp + 64) & np.uint32(1)
    return check_degree(berlekamp_massey(bits.tolist()), params.mexp)


def check_degree(poly: Gf2Poly, mexp: int) -> Gf2Poly:
    if poly.degree < mexp:
        raise DegeneratePolynomialError(
            f"minimal polynomial degree {poly.degree} < mexp {mexp}: status rejected"
        )
    return poly


def charpoly_digest(params: ParameterizedStatus, probe_seed: int = PROBE_SEED) -> str:
    return poly_digest(minimal_polynomial(params, probe_seed))


def verify_status(params: ParameterizedStatus) -> bool:
    """True when the recorded digest matches a fresh computation and the polynomial is irreducible."""
    poly = minimal_polynomial(params)
    return poly_digest(poly) == params.charpoly_digest and is_irreducible(poly)


def _candidate_stream(mexp: int, id_: int, search_seed: int) -> np.random.Generator:
    seq = np.random.SeedSequence([search_seed & 0xFFFFFFFFFFFFFFFF, id_, mexp])
    return np.random.Generator(np.random.Philox(seq))


def dc_search(
    mexp: int,
    id: int,
    search_seed: int,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> ParameterizedStatus:
    """First full-period candidate for (mexp, id), deterministic in search_seed."""
    if not 0 <= id <= 0xFFFF:
        raise ValueError(f"id {id} does not fit in 16 bits")
    n, m, r = shape_for(mexp)
    rng = _candidate_stream(mexp, id, search_seed)
    for attempt in range(1, max_attempts + 1):
        upper, temper_b, temper_c = (int(v) for v in rng.integers(0, 1 << 32, size=3, dtype=np.uint64))
        candidate = ParameterizedStatus(
            id=id,
            mexp=mexp,
            n=n,
            m=m,
            r=r,
            a=((upper & 0xFFFF) << 16) | id,
            temper_b=temper_b,
            temper_c=temper_c,
        )
        try:
            poly = minimal_polynomial(candidate)
        except DegeneratePolynomialError as e:
            logger.debug(f"Candidate {attempt} for id={id}: {e}")
            continue
        if not is_irreducible(poly):
            logger.debug(f"Candidate {attempt} for id={id}: reducible minimal polynomial")
            continue
        status = candidate.model_copy(update={"charpoly_digest": poly_digest(poly)})
        logger.info(f"Accepted {status.label} after {attempt} candidates (a={status.a:#010x})")
        return status
    raise SearchExhaustedError(f"search exhausted after {max_attempts} candidates (mexp={mexp}, id={id})")


def _search_one(job: tuple[int, int, int, int]) -> ParameterizedStatus:
    mexp, id_, search_seed, max_attempts = job
    return dc_search(mexp, id_, search_seed, max_attempts)


def mint_batch(
    mexp: int,
    ids,
    search_seed: int,
    workers: int = 1,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> list[ParameterizedStatus]:
    """dc_search over an ID range; searches are independent, results come back in ID order."""
    ids = sorted(set(ids))
    jobs = [(mexp, i, search_seed, max_attempts) for i in ids]
    logger.info(f"Minting {len(jobs)} statuses at mexp={mexp} with {workers} worker(s)")
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            statuses = list(pool.map(_search_one, jobs))
    else:
        statuses = [_search_one(job) for job in jobs]
    seen: dict[str, int] = {}
    for status in statuses:
        if status.charpoly_digest in seen:
            raise DuplicateStatusError(
                f"duplicate characteristic polynomial for ids {seen[status.charpoly_digest]} and {status.id}"
            )
        seen[status.charpoly_digest] = status.id
    return statuses
