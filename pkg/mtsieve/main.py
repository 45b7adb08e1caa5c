"""
FastAPI application serving stored sieve campaigns read-only.
Creates database tables on startup and includes the campaigns router.
"""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from mtsieve.config import settings
from mtsieve.database import engine
from mtsieve.routers import campaigns
from mtsieve.services.store import init_db

logger = logging.getLogger(__name__)

openapi_tags = [
    {
        "name": "Campaigns",
        "description": "Stored sieve and Random Spacing campaigns: verdicts, per-test counts, results, grids.",
    },
    {
        "name": "Health",
        "description": "API status and health check.",
    },
]


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Create database tables on application startup."""
    try:
        init_db(engine)
        logger.info(f"Database ready at {settings.MTSIEVE_DATABASE_URL}")
    except Exception as e:
        logger.error(f"Failed to create database tables: {e}")
        raise
    yield


app = FastAPI(
    title="mtsieve results API",
    description="Read-only access to parameterized-PRNG sieving campaigns.",
    version="1.0.0",
    openapi_tags=openapi_tags,
    lifespan=lifespan,
)


@app.get("/health", tags=["Health"], summary="Health check")
async def health():
    """JSON health check for monitoring."""
    return {"status": "ok"}


app.include_router(campaigns.router)
