"""
Services module: solver and long-running census jobs
"""

from .census_job_manager import CensusJobManager
from .solver import EvalTable, ReceiverSet, Solver, get_solver

__all__ = [
    "CensusJobManager",
    "EvalTable",
    "ReceiverSet",
    "Solver",
    "get_solver",
]
