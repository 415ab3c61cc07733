from sqlalchemy import Column, DateTime, String, Text
from sqlalchemy.sql import func

from .db import Base


class CachedIndex(Base):
    __tablename__ = "cached_indexes"

    fingerprint = Column(String, primary_key=True, index=True)
    version = Column(String, primary_key=True)
    document_json = Column(Text, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())
