import pytest

from mtsieve.errors import DegeneratePolynomialError, SearchExhaustedError
from mtsieve.services.dc import (
    charpoly_digest,
    check_degree,
    dc_search,
    minimal_polynomial,
    mint_batch,
    verify_status,
)
from mtsieve.services.gf2 import ONE, Gf2Poly, berlekamp_massey, is_irreducible, poly_digest

from test_gf2 import lfsr_bits, trial_division_irreducible


@pytest.fixture(scope="module")
def minted():
    return dc_search(89, 7, 1)


def test_search_embeds_id(minted):
    assert minted.a & 0xFFFF == 7
    assert (minted.n, minted.r) == (3, 7)
    assert 32 * minted.n - minted.r == 89


def test_search_is_deterministic(minted):
    assert dc_search(89, 7, 1) == minted


def test_minted_status_has_full_degree_irreducible_polynomial(minted):
    poly = minimal_polynomial(minted)
    assert poly.degree == 89
    assert is_irreducible(poly)
    assert poly_digest(poly) == minted.charpoly_digest


def test_digest_is_stable(minted):
    assert charpoly_digest(minted) == minted.charpoly_digest
    assert verify_status(minted)


def test_tampered_digest_fails_verification(minted):
    tampered = minted.model_copy(update={"charpoly_digest": "0" * 40})
    assert not verify_status(tampered)


def test_distinct_ids_give_distinct_digests():
    one, two = dc_search(89, 1, 5), dc_search(89, 2, 5)
    assert one.charpoly_digest != two.charpoly_digest


def test_zero_sequence_is_rejected():
    poly = berlekamp_massey([0] * 242)
    assert poly == ONE
    with pytest.raises(DegeneratePolynomialError):
        check_degree(poly, 89)


def test_search_exhausted():
    with pytest.raises(SearchExhaustedError, match="search exhausted"):
        dc_search(89, 3, 1, max_attempts=0)


def test_id_must_fit_16_bits():
    with pytest.raises(ValueError):
        dc_search(89, 1 << 16, 1)


def test_planted_degree_8_control():
    primitive = Gf2Poly.from_exponents([8, 4, 3, 2, 0])
    found = berlekamp_massey(lfsr_bits(primitive, [1, 0, 0, 0, 0, 0, 0, 0], 16 + 64))
    assert found == primitive
    assert is_irreducible(found)
    assert trial_division_irreducible(found)


def test_mint_batch_returns_id_order_with_distinct_digests():
    statuses = mint_batch(89, [4, 2, 3], search_seed=9)
    assert [s.id for s in statuses] == [2, 3, 4]
    assert len({s.charpoly_digest for s in statuses}) == 3


def test_mint_batch_is_worker_independent():
    assert mint_batch(89, range(0, 4), 11, workers=2) == mint_batch(89, range(0, 4), 11, workers=1)


@pytest.mark.slow
def test_mint_ten_statuses_at_89():
    statuses = mint_batch(89, range(10), 1, workers=4)
    assert len({s.charpoly_digest for s in statuses}) == 10
    assert all(verify_status(s) for s in statuses)


@pytest.mark.slow
def test_mt19937_minimal_polynomial(mt19937):
    poly = minimal_polynomial(mt19937)
    assert poly.degree == 19937
    assert charpoly_digest(mt19937) == poly_digest(poly)
