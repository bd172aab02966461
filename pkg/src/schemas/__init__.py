"""
Schemas pydantic pour les configurations de run et les résultats.
"""

from .run_schemas import (
    CensusJob,
    CensusRow,
    MinFieldResult,
    MinorReport,
    PairCensusReport,
    RunConfig,
    RunOutput,
    SextupleCensusReport,
    SolveResult,
    SymmetryReport,
    TermProfile,
    TripleCensusReport,
    ValidityReport,
)

__all__ = [
    "CensusJob",
    "CensusRow",
    "MinFieldResult",
    "MinorReport",
    "PairCensusReport",
    "RunConfig",
    "RunOutput",
    "SextupleCensusReport",
    "SolveResult",
    "SymmetryReport",
    "TermProfile",
    "TripleCensusReport",
    "ValidityReport",
]
