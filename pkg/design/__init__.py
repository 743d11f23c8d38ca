"""Experiment design package for debias-ate."""
from design.models import Assignment, ExperimentData, GroupStats, PotentialOutcomeTable
from design.experiment import center_columns, group_stats, realize
from design.ingest import ingest_csv, write_csv

__all__ = [
    "Assignment", "ExperimentData", "GroupStats", "PotentialOutcomeTable",
    "center_columns", "group_stats", "realize", "ingest_csv", "write_csv",
]
