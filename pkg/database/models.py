"""Database models for the simulation run registry."""
import json
from datetime import datetime, timezone
from sqlalchemy import Column, Integer, String, DateTime, Text, Float
from sqlalchemy.orm import declarative_base


Base = declarative_base()


class SimulationRun(Base):
    """One recorded `simulate` invocation."""

    __tablename__ = "simulation_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(50), nullable=False)
    scheme = Column(Integer, nullable=True)
    variant = Column(Integer, nullable=True)
    n = Column(Integer, nullable=False)
    n_treated = Column(Integer, nullable=False)
    mode = Column(String(10), nullable=False)  # 'exact' or 'mc'
    reps = Column(Integer, nullable=True)
    seed = Column(Integer, nullable=True)
    evaluated = Column(Integer, nullable=False)
    skipped = Column(Integer, default=0)
    elapsed_seconds = Column(Float, nullable=True)
    summary_json = Column(Text, nullable=False)
    created_at = Column(DateTime, default=lambda: datetime.now(timezone.utc), nullable=False)

    @property
    def label(self) -> str:
        if self.scheme is None:
            return "-"
        return f"DGP{self.scheme}.{self.variant}"

    def to_dict(self):
        """Convert to dictionary."""
        return {
            "id": self.id,
            "command": self.command,
            "dgp": self.label,
            "n": self.n,
            "n_treated": self.n_treated,
            "mode": self.mode,
            "reps": self.reps,
            "seed": self.seed,
            "evaluated": self.evaluated,
            "skipped": self.skipped,
            "elapsed_seconds": self.elapsed_seconds,
            "summary": json.loads(self.summary_json),
            "created_at": self.created_at.replace(tzinfo=timezone.utc).isoformat() if self.created_at else None,
        }
