"""
Read-only router over stored sieve campaigns.
"""
import json
from datetime import datetime
from typing import List

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, field_validator
from sqlalchemy.orm import Session

from mtsieve.database import get_db
from mtsieve.models import Campaign, ResultRecord
from mtsieve.schemas import GridCell, TestSummary
from mtsieve.services.store import load_campaign_report

router = APIRouter(prefix="/campaigns", tags=["Campaigns"])


class CampaignResponse(BaseModel):
    """Campaign record (kind, engine, sizes, verdict histogram)."""
    id: int
    name: str
    kind: str
    engine: str
    n_statuses: int
    n_seeds: int
    verdict_histogram: dict[str, int]
    created_at: datetime | None = None

    model_config = {"from_attributes": True}

    @field_validator("verdict_histogram", mode="before")
    @classmethod
    def _decode(cls, value):
        return json.loads(value) if isinstance(value, str) else value


class ResultResponse(BaseModel):
    """One (status, seed, test) outcome."""
    status_id: int
    mexp: int | None = None
    seed_index: int
    seed: int | None = None
    test_id: str
    statistic: float | None = None
    p_value: float | None = None
    classification: str | None = None
    degenerate: bool
    error: str | None = None

    model_config = {"from_attributes": True}


def _campaign_or_404(db: Session, campaign_id: int) -> Campaign:
    campaign = db.query(Campaign).filter(Campaign.id == campaign_id).first()
    if not campaign:
        raise HTTPException(status_code=404, detail="Campaign not found")
    return campaign


@router.get("", response_model=List[CampaignResponse], summary="List stored campaigns")
async def get_campaigns(db: Session = Depends(get_db)):
    return db.query(Campaign).order_by(Campaign.id).all()


@router.get(
    "/{campaign_id}",
    response_model=CampaignResponse,
    summary="Get campaign by ID",
    responses={404: {"description": "Campaign not found"}},
)
async def get_campaign(campaign_id: int, db: Session = Depends(get_db)):
    return _campaign_or_404(db, campaign_id)


@router.get(
    "/{campaign_id}/results",
    response_model=List[ResultResponse],
    summary="Results of a campaign",
    description="Optionally filtered by `test_id` and/or `classification` (correct, suspect, disastrous).",
)
async def get_results(
    campaign_id: int,
    test_id: str | None = None,
    classification: str | None = None,
    db: Session = Depends(get_db),
):
    _campaign_or_404(db, campaign_id)
    query = db.query(ResultRecord).filter(ResultRecord.campaign_id == campaign_id)
    if test_id:
        query = query.filter(ResultRecord.test_id == test_id)
    if classification:
        query = query.filter(ResultRecord.classification == classification)
    return query.order_by(ResultRecord.id).all()


@router.get("/{campaign_id}/tests", response_model=List[TestSummary], summary="Per-test suspect counts")
async def get_tests(campaign_id: int, db: Session = Depends(get_db)):
    _campaign_or_404(db, campaign_id)
    return load_campaign_report(db, campaign_id).tests


@router.get(
    "/{campaign_id}/grid",
    response_model=List[GridCell],
    summary="Random Spacing grid",
    responses={404: {"description": "Campaign not found or has no grid"}},
)
async def get_grid(campaign_id: int, db: Session = Depends(get_db)):
    _campaign_or_404(db, campaign_id)
    report = load_campaign_report(db, campaign_id)
    if report.grid is None:
        raise HTTPException(status_code=404, detail="Campaign has no grid")
    return report.grid
