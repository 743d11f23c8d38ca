"""Database package for debias-ate."""
from database.db import RunRegistry, registry
from database.models import SimulationRun

__all__ = ["RunRegistry", "registry", "SimulationRun"]
