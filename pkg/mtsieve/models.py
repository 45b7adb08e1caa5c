"""
SQLAlchemy models for stored sieve campaigns.
Defines Campaign and ResultRecord tables.
"""
from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from mtsieve.database import Base


class Campaign(Base):
    """One sieve or Random Spacing run."""

    __tablename__ = "campaigns"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String(100), nullable=False)
    kind = Column(String(10), nullable=False)  # sieve | cross
    engine = Column(String(50), nullable=False)
    n_statuses = Column(Integer, nullable=False)
    n_seeds = Column(Integer, nullable=False)
    verdict_histogram = Column(Text, nullable=False)  # JSON object
    report_json = Column(Text, nullable=False)  # full SieveReport
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    results = relationship("ResultRecord", back_populates="campaign", cascade="all, delete-orphan")


class ResultRecord(Base):
    """One (status, seed, test) outcome."""

    __tablename__ = "results"

    id = Column(Integer, primary_key=True, index=True)
    campaign_id = Column(Integer, ForeignKey("campaigns.id"), nullable=False, index=True)
    status_id = Column(Integer, nullable=False, index=True)
    mexp = Column(Integer, nullable=True)
    seed_index = Column(Integer, nullable=False, default=0)
    seed = Column(Integer, nullable=True)
    test_id = Column(String(40), nullable=False)
    statistic = Column(Float, nullable=True)
    p_value = Column(Float, nullable=True)
    classification = Column(String(12), nullable=True)
    degenerate = Column(Boolean, nullable=False, default=False)
    error = Column(Text, nullable=True)

    campaign = relationship("Campaign", back_populates="results")
