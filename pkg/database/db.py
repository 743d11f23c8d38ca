"""Run registry storage."""
from typing import List, Optional
from pathlib import Path
from sqlalchemy import create_engine, desc
from sqlalchemy.orm import sessionmaker, Session
from contextlib import contextmanager
import logging

from database.models import Base, SimulationRun
from config import settings


logger = logging.getLogger(__name__)


class RunRegistry:
    """SQLite-backed record of simulation runs.

    The database file is created on first use, not at import.
    """

    def __init__(self, db_path: str = None):
        self.db_path = db_path or settings.DATABASE_PATH
        self._engine = None
        self._session_factory = None

    def _connect(self):
        if self._engine is None:
            Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)
            self._engine = create_engine(f"sqlite:///{self.db_path}")
            self._session_factory = sessionmaker(bind=self._engine, expire_on_commit=False)
            Base.metadata.create_all(self._engine)

    @contextmanager
    def get_session(self) -> Session:
        """Get database session context manager."""
        self._connect()
        session = self._session_factory()
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Database error: {e}")
            raise
        finally:
            session.close()

    def record_run(self, command: str, summary_json: str, n: int, n_treated: int, mode: str,
                   evaluated: int, skipped: int = 0, scheme: Optional[int] = None,
                   variant: Optional[int] = None, reps: Optional[int] = None,
                   seed: Optional[int] = None, elapsed_seconds: Optional[float] = None) -> SimulationRun:
        """Store one finished run."""
        with self.get_session() as session:
            run = SimulationRun(
                command=command,
                scheme=scheme,
                variant=variant,
                n=n,
                n_treated=n_treated,
                mode=mode,
                reps=reps,
                seed=seed,
                evaluated=evaluated,
                skipped=skipped,
                elapsed_seconds=elapsed_seconds,
                summary_json=summary_json,
            )
            session.add(run)
            session.flush()
            session.refresh(run)
            logger.info(f"Recorded run {run.id} ({run.label}, {mode})")
            return run

    def list_runs(self, limit: int = 20) -> List[SimulationRun]:
        """Most recent runs first."""
        with self.get_session() as session:
            return session.query(SimulationRun)\
                .order_by(desc(SimulationRun.created_at), desc(SimulationRun.id))\
                .limit(limit).all()

    def clear_runs(self) -> int:
        """Delete every recorded run; returns how many were removed."""
        with self.get_session() as session:
            count = session.query(SimulationRun).count()
            session.query(SimulationRun).delete()
            logger.info(f"Cleared {count} runs")
            return count


# Global registry instance
registry = RunRegistry()
