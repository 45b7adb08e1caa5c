"""Shared fixtures: reference statuses, small test specs and an isolated database."""
import random

import pytest

from mtsieve.schemas import ParameterizedStatus, TestName, TestSpec
from mtsieve.services.engine import mt19937_status, seed_state

MT19937_FIRST = [3499211612, 581869302, 3890346734]


def reference_mt19937(seed: int, count: int) -> list[int]:
    """MT19937 words from the standard library, started from init_genrand(seed)."""
    rng = random.Random()
    rng.setstate((3, tuple(seed_state(seed, 624) + [624]), None))
    return [rng.getrandbits(32) for _ in range(count)]


@pytest.fixture
def mt19937():
    return mt19937_status()


@pytest.fixture
def toy89():
    """Structurally valid mexp-89 status; not verified for full period."""
    return ParameterizedStatus(id=7, mexp=89, n=3, m=1, r=7, a=0x5A3C0007,
                               temper_b=0x9D2C5680, temper_c=0xEFC60000)


@pytest.fixture
def small_specs():
    """Fast variants of the four tests, run in milliseconds."""
    return [
        TestSpec(name=TestName.GAP, index=35, n=2000, r=0, alpha=0.0, beta=0.25),
        TestSpec(name=TestName.HAMMING_INDEP, index=100, n=400, s=32, L=64),
        TestSpec(name=TestName.COLLISION_OVER, index=9, n=1 << 12, s=8, t=2),
        TestSpec(name=TestName.RANDOM_WALK, index=74, n=2000, l=16),
    ]


@pytest.fixture
def db_session(tmp_path):
    from sqlalchemy.orm import sessionmaker

    from mtsieve.database import make_engine
    from mtsieve.services.store import init_db

    engine = make_engine(f"sqlite:///{tmp_path / 'test.db'}")
    init_db(engine)
    Session = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    session = Session()
    try:
        yield session
    finally:
        session.close()
        engine.dispose()


@pytest.fixture
def mt_reference():
    return reference_mt19937
