"""
Persist sieve reports in the SQL store used by the read API.
"""
import json
import logging

from sqlalchemy.orm import Session

from mtsieve.database import Base
from mtsieve.models import Campaign, ResultRecord
from mtsieve.schemas import SieveReport

logger = logging.getLogger(__name__)


def init_db(bind) -> None:
    """Create tables if they do not exist."""
    Base.metadata.create_all(bind=bind)


def save_report(db: Session, report: SieveReport) -> Campaign:
    campaign = Campaign(
        name=report.meta.name,
        kind=report.meta.kind,
        engine=report.meta.engine,
        n_statuses=report.meta.n_statuses,
        n_seeds=report.meta.n_seeds,
        verdict_histogram=json.dumps(report.verdict_histogram),
        report_json=report.model_dump_json(),
    )
    campaign.results = [
        ResultRecord(
            status_id=r.status_id,
            mexp=r.mexp,
            seed_index=r.seed_index,
            seed=r.seed,
            test_id=r.test_id,
            statistic=r.statistic,
            p_value=r.p_value,
            classification=r.classification.value if r.classification else None,
            degenerate=r.degenerate,
            error=r.error,
        )
        for r in report.results
    ]
    db.add(campaign)
    db.commit()
    db.refresh(campaign)
    logger.info(f"Stored campaign '{campaign.name}' as #{campaign.id} ({len(report.results)} results)")
    return campaign


def load_campaign_report(db: Session, campaign_id: int) -> SieveReport | None:
    campaign = db.query(Campaign).filter(Campaign.id == campaign_id).first()
    if campaign is None:
        return None
    return SieveReport.model_validate_json(campaign.report_json)
