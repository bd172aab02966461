"""
Schemas pydantic pour les configurations de run et les résultats.

Every machine-readable output of the CLI is one of these models; JSON goes
through model_dump_json / model_validate_json.
"""

from math import comb
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field, model_validator

Mode = Literal["exhaustive", "randomized", "auto"]
OutputFormat = Literal["json", "csv", "text"]


class RunConfig(BaseModel):
    """Fully resolved configuration of one CLI run (echoed in every output header)"""

    command: str = Field(..., description="Sub-command")
    n: Optional[int] = Field(default=None, ge=1, description="Lattice length")
    placements: List[str] = Field(default_factory=list, description="Receiver placements, e.g. '1,4,5,10'")
    q: Optional[int] = Field(default=None, description="Field order for fixed-q commands")
    include_sides: bool = Field(default=True, description="Add the left-side and right-side receivers")
    mode: Mode = Field(default="auto", description="Search mode")
    max_points: int = Field(..., ge=1, description="Exhaustive point budget")
    budget_seconds: Optional[float] = Field(default=None, description="Wall-clock budget for extended jobs")
    trials: int = Field(..., ge=1, description="Randomized-mode samples")
    seed: int = Field(..., description="PRNG seed")
    output_format: OutputFormat = Field(default="json", description="json | csv | text")
    cache_dir: str = Field(..., description="EvalTable cache directory")
    jobs: int = Field(default=1, ge=1, description="Worker processes")
    extended: bool = Field(default=False, description="Allow runs beyond the desk-scale budget")
    stream: bool = Field(default=False, description="Stream valid placements (census)")
    job_id: Optional[str] = Field(default=None, description="Checkpointed job to resume")


class CensusRow(BaseModel):
    """One row of the valid-placement census"""

    n: int = Field(..., ge=1)
    valid: int = Field(..., ge=0)
    invalid: int = Field(..., ge=0)
    total: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_total(self) -> "CensusRow":
        size = self.n * (self.n + 1) // 2
        if self.valid + self.invalid != self.total or self.total != comb(size, self.n):
            raise ValueError(f"Inconsistent census row for n={self.n}: {self.valid}+{self.invalid}!={self.total}")
        return self


class SolveResult(BaseModel):
    """Outcome of a solvability search over one field"""

    receivers: List[str] = Field(default_factory=list, description="Placements searched, sides included")
    q: int = Field(..., description="Field order")
    solvable: Optional[bool] = Field(..., description="True/False, or None when randomized mode found nothing")
    witness: Optional[List[int]] = Field(default=None, description="Point, in variable order a1_1, a1_2, a2_1, ...")
    mode: Literal["exhaustive", "randomized"] = Field(..., description="Mode actually used")
    points_total: int = Field(..., description="Size of the search space")
    points_checked: int = Field(..., description="Points examined (bits for exhaustive)")
    nonzero_only: bool = Field(default=True, description="Search restricted to (F_q*)^k")
    seed: Optional[int] = Field(default=None, description="PRNG seed (randomized mode)")
    elapsed_ms: int = Field(default=0, description="Wall-clock time")

    @computed_field
    @property
    def coverage(self) -> float:
        """Fraction of the search space examined"""
        return self.points_checked / self.points_total if self.points_total else 1.0


class MinFieldResult(BaseModel):
    """Smallest field over which a receiver set is solvable"""

    q: Optional[int] = Field(..., description="Minimum field size, None when not established")
    exact: bool = Field(..., description="Every smaller q was proven unsolvable exhaustively")
    lower_bound: int = Field(..., description="No field smaller than this is known to work")
    witness: Optional[List[int]] = Field(default=None, description="Verified point over F_q")
    attempts: List[SolveResult] = Field(default_factory=list, description="One result per q tried")
    receivers: int = Field(..., description="Receivers including sides")


class PairCensusReport(BaseModel):
    """Every pair of valid placements (plus sides) with its minimum field"""

    n: int
    pairs: int
    by_min_field: Dict[int, int] = Field(default_factory=dict)
    max_min_field: Optional[int] = Field(..., description="None when the lattice has fewer than two valid placements")
    counterexamples: List[List[str]] = Field(default_factory=list, description="Pairs needing q > 3")


class TripleCensusReport(BaseModel):
    """Triples of valid placements (plus sides) by minimum field"""

    n: int
    triples: int
    by_min_field: Dict[int, int] = Field(default_factory=dict)
    min_field_4: int = Field(..., description="Triples whose minimum field is exactly F_4")
    beyond_4: int = Field(..., description="Triples unsolvable over F_2, F_3 and F_4")


class SextupleCensusReport(BaseModel):
    """6-sets of valid placements (plus sides) whose minimum field is exactly F_5"""

    job_id: str
    n: int
    set_size: int = 6
    target_q: int = 5
    status: Literal["pending", "running", "paused", "completed", "failed"]
    count: int = Field(..., description="Exact when status is completed, a partial sum otherwise")
    branches_done: int
    branches_total: int
    monomial_placements: int
    nonmonomial_placements: int
    cores_by_size: Dict[int, int] = Field(default_factory=dict)
    elapsed_seconds: float = 0.0


class SymmetryReport(BaseModel):
    """Images of a placement under rotation and reflection"""

    n: int
    placement: str
    rotated: str
    reflected: str
    orbit: List[str]
    valid: bool


class MinorReport(BaseModel):
    """Minor polynomial of one placement"""

    n: int
    placement: str
    polynomial: str
    terms: int
    valid: bool


class ValidityReport(BaseModel):
    """Validity of one placement with both deciders"""

    n: int
    placement: str
    distributed: bool
    flow_valid: bool
    violation: Optional[str] = None
    witness_paths: List[List[int]] = Field(default_factory=list)


class TermProfile(BaseModel):
    """Number of valid placements by number of minor terms"""

    n: int
    by_terms: Dict[int, int]


class RunOutput(BaseModel):
    """Envelope written to standard output: resolved config plus result"""

    config: RunConfig
    result: dict
    exit_code: int = 0


class CensusJob(BaseModel):
    """Checkpoint of a resumable minimum-field census (cache_dir/jobs/<job_id>.json)"""

    job_id: str
    n: int = Field(default=4, ge=2)
    set_size: int = Field(default=6, ge=1, description="Receiver placements per set, sides excluded")
    target_q: int = Field(default=5, description="Count sets whose minimum field is exactly F_target_q")
    status: Literal["pending", "running", "paused", "completed", "failed"] = "pending"
    next_branch: int = Field(default=0, description="First top-level branch not yet done")
    branches_total: int = 0
    count: int = 0
    cores_by_size: Dict[int, int] = Field(default_factory=dict, description="Qualifying non-monomial cores by size")
    monomial_placements: int = 0
    nonmonomial_placements: int = 0
    elapsed_seconds: float = 0.0
    errors: List[str] = Field(default_factory=list)
    created_at: str = ""
    updated_at: str = ""
