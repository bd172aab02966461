"""
Census Job Manager - Long minimum-field censuses with resume capability

Counts the sets of `set_size` valid placements (sides fixed) whose minimum
field is exactly F_target_q. Progress is checkpointed as JSON under
cache_dir/jobs/<job_id>.json after every few top-level branches, so a job
stopped by its wall-clock budget (or killed) resumes where it left off and
never reports a partial count as final.

Counting works on gauge-fixed EvalTables:
- monomial minors never vanish, so a set qualifies iff its non-monomial core
  does; a qualifying core S is weighted by C(#monomials, set_size - |S|)
- the core must vanish somewhere at every point of every smaller field (the
  "universe"); the search branches on the uncovered point with the fewest
  available killers, taking the smallest-index killer in the set
- a core whose F_target_q intersection is empty is abandoned, supersets too
"""

import logging
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from math import comb
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.config import Settings, get_settings
from src.helpers.census import valid_placements
from src.models.placement import Placement
from src.schemas.run_schemas import CensusJob, SextupleCensusReport
from src.services.solver import Solver
from src.tools.finite_field import SUPPORTED_ORDERS, make_field
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass
class CoverProblem:
    """Tables of one census, rebuilt deterministically on every (re)start."""

    n: int
    set_size: int
    target_q: int
    candidates: List[Placement]
    monomials: int
    kills: List[int]  # per candidate: universe points where its minor vanishes
    target_bits: List[int]  # per candidate: gauge EvalTable at target_q
    target_full: int
    universe: int
    killers: Dict[int, int]  # per universe point: candidate bitmask

    @classmethod
    def build(cls, solver: Solver, n: int, set_size: int, target_q: int) -> "CoverProblem":
        if target_q not in SUPPORTED_ORDERS:
            raise DomainError(f"F_{target_q} is not supported")
        lower = [q for q in SUPPORTED_ORDERS if q < target_q]

        placements = valid_placements(n)
        candidates = [p for p in placements if not solver.minor_of(p).is_monomial()]
        monomials = len(placements) - len(candidates)

        kills = [0] * len(candidates)
        offset = 0
        for q in lower:
            npoints = solver.space_for(n, make_field(q), gauge=True).total
            full = (1 << npoints) - 1
            for idx, p in enumerate(candidates):
                zero = ~solver.eval_table(p, q, gauge=True).bits & full
                kills[idx] |= zero << offset
            offset += npoints
        universe = (1 << offset) - 1

        target_full = (1 << solver.space_for(n, make_field(target_q), gauge=True).total) - 1
        target_bits = [solver.eval_table(p, target_q, gauge=True).bits for p in candidates]

        killers: Dict[int, int] = {b: 0 for b in range(offset)}
        for idx, kill in enumerate(kills):
            for b in _bits(kill):
                killers[b] |= 1 << idx

        logger.info(
            f"Cover problem TSN({n}), size {set_size}, F_{target_q}: {len(candidates)} candidates, "
            f"{monomials} monomial placements, universe {offset} points over F_{lower}"
        )
        return cls(n, set_size, target_q, candidates, monomials, kills, target_bits, target_full, universe, killers)

    @property
    def all_candidates(self) -> int:
        return (1 << len(self.candidates)) - 1

    def pick_point(self, uncovered: int, available: int) -> Tuple[Optional[int], int]:
        """Uncovered point with the fewest available killers, and those killers (0 when stuck)."""
        best, best_killers, best_count = None, 0, None
        for b in _bits(uncovered):
            k = self.killers[b] & available
            count = _popcount(k)
            if count == 0:
                return b, 0
            if best_count is None or count < best_count:
                best, best_killers, best_count = b, k, count
        return best, best_killers

    def branches(self) -> List[Tuple[Optional[int], int]]:
        """Top-level branches as (first chosen candidate, excluded mask)."""
        if self.universe == 0:
            return [(None, 0)]
        _, k = self.pick_point(self.universe, self.all_candidates)
        out = []
        excluded = 0
        for c in _bits(k):
            out.append((c, excluded))
            excluded |= 1 << c
        return out


class _BranchCounter:
    def __init__(self, problem: CoverProblem):
        self.problem = problem
        self.count = 0
        self.by_size: Dict[int, int] = {}

    def _record(self, size: int) -> None:
        self.count += comb(self.problem.monomials, self.problem.set_size - size)
        self.by_size[size] = self.by_size.get(size, 0) + 1

    def run(self, first: Optional[int], excluded: int) -> None:
        pb = self.problem
        if first is None:
            self._search(0, 0, pb.universe, excluded, pb.target_full)
        else:
            self._search(1, 1 << first, pb.universe & ~pb.kills[first], excluded, pb.target_full & pb.target_bits[first])

    def _search(self, size: int, chosen: int, uncovered: int, excluded: int, alive: int) -> None:
        pb = self.problem
        if not alive:
            return
        if not uncovered:
            self._complete(size, chosen, excluded, alive)
            return
        if size == pb.set_size:
            return

        available = pb.all_candidates & ~chosen & ~excluded
        _, k = pb.pick_point(uncovered, available)
        for c in _bits(k):
            self._search(
                size + 1,
                chosen | 1 << c,
                uncovered & ~pb.kills[c],
                excluded,
                alive & pb.target_bits[c],
            )
            excluded |= 1 << c

    def _complete(self, size: int, chosen: int, excluded: int, alive: int) -> None:
        """Count every extension of a covering core by still-available candidates."""
        pb = self.problem
        free = _bits(pb.all_candidates & ~chosen & ~excluded)

        def extend(start: int, size: int, alive: int) -> None:
            self._record(size)
            if size == pb.set_size:
                return
            for pos in range(start, len(free)):
                nxt = alive & pb.target_bits[free[pos]]
                if nxt:
                    extend(pos + 1, size + 1, nxt)

        extend(0, size, alive)


class CensusJobManager:
    """
    Manages checkpointed census jobs with:
    - JSON checkpoints under cache_dir/jobs/
    - Wall-clock budget per run, status paused when exhausted
    - Resume from the first unfinished top-level branch
    """

    def __init__(self, solver: Optional[Solver] = None, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.solver = solver or Solver(self.settings)
        self.jobs_dir = Path(self.settings.cache_dir) / "jobs"
        self._problems: Dict[Tuple[int, int, int], CoverProblem] = {}

    def _problem(self, job: CensusJob) -> CoverProblem:
        key = (job.n, job.set_size, job.target_q)
        if key not in self._problems:
            self._problems[key] = CoverProblem.build(self.solver, *key)
        return self._problems[key]

    def _now(self) -> str:
        return datetime.now(timezone.utc).isoformat()

    def _path(self, job_id: str) -> Path:
        return self.jobs_dir / f"{job_id}.json"

    def _save(self, job: CensusJob) -> None:
        job.updated_at = self._now()
        self.jobs_dir.mkdir(parents=True, exist_ok=True)
        tmp = self._path(job.job_id).with_suffix(".tmp")
        tmp.write_text(job.model_dump_json(indent=2), encoding="utf-8")
        tmp.replace(self._path(job.job_id))

    def get_job(self, job_id: str) -> Optional[CensusJob]:
        path = self._path(job_id)
        if not path.exists():
            return None
        return CensusJob.model_validate_json(path.read_text(encoding="utf-8"))

    def create_job(self, n: int = 4, set_size: int = 6, target_q: int = 5) -> str:
        """
        Create a new census job.

        Args:
            n: Lattice length
            set_size: Placements per set (sides excluded)
            target_q: Count sets whose minimum field is exactly this q

        Returns:
            Job ID
        """
        job = CensusJob(job_id=uuid.uuid4().hex[:12], n=n, set_size=set_size, target_q=target_q, created_at=self._now())
        problem = self._problem(job)
        job.branches_total = len(problem.branches())
        job.monomial_placements = problem.monomials
        job.nonmonomial_placements = len(problem.candidates)
        self._save(job)
        logger.info(f"Created census job {job.job_id}: TSN({n}), {set_size}-sets, F_{target_q}")
        logger.info(f"  Top-level branches: {job.branches_total}")
        return job.job_id

    def run_job(self, job_id: str, budget_seconds: Optional[float] = None) -> SextupleCensusReport:
        """
        Run (or resume) a job until it completes or the budget runs out.

        The count is only final when the returned status is "completed".
        """
        job = self.get_job(job_id)
        if job is None:
            raise DomainError(f"Census job {job_id} not found")
        if job.status == "completed":
            return self.get_job_status(job_id)

        problem = self._problem(job)
        branches = problem.branches()
        if len(branches) != job.branches_total:
            raise DomainError(f"Job {job_id} was created for {job.branches_total} branches, tables give {len(branches)}")

        job.status = "running"
        self._save(job)
        run_started = time.perf_counter()
        started = run_started
        since_checkpoint = 0
        logger.info(f"Running job {job_id} from branch {job.next_branch}/{job.branches_total}")

        try:
            while job.next_branch < job.branches_total:
                if budget_seconds is not None and time.perf_counter() - run_started >= budget_seconds:
                    job.status = "paused"
                    break

                first, excluded = branches[job.next_branch]
                counter = _BranchCounter(problem)
                counter.run(first, excluded)
                job.count += counter.count
                for size, c in counter.by_size.items():
                    job.cores_by_size[size] = job.cores_by_size.get(size, 0) + c
                job.next_branch += 1
                since_checkpoint += 1
                logger.debug(f"[{job.next_branch}/{job.branches_total}] +{counter.count} (total {job.count})")

                if since_checkpoint >= self.settings.checkpoint_every:
                    job.elapsed_seconds += time.perf_counter() - started
                    started = time.perf_counter()
                    self._save(job)
                    since_checkpoint = 0
            else:
                job.status = "completed"
        except Exception as e:
            logger.error(f"Job {job_id} failed: {e}")
            job.status = "failed"
            job.errors.append(str(e))
            job.elapsed_seconds += time.perf_counter() - started
            self._save(job)
            raise

        job.elapsed_seconds += time.perf_counter() - started
        self._save(job)
        logger.info(f"Job {job_id} {job.status}: count {job.count} ({job.next_branch}/{job.branches_total} branches)")
        return self.get_job_status(job_id)

    def get_job_status(self, job_id: str) -> SextupleCensusReport:
        job = self.get_job(job_id)
        if job is None:
            raise DomainError(f"Census job {job_id} not found")
        return SextupleCensusReport(
            job_id=job.job_id,
            n=job.n,
            set_size=job.set_size,
            target_q=job.target_q,
            status=job.status,
            count=job.count,
            branches_done=job.next_branch,
            branches_total=job.branches_total,
            monomial_placements=job.monomial_placements,
            nonmonomial_placements=job.nonmonomial_placements,
            cores_by_size=dict(sorted(job.cores_by_size.items())),
            elapsed_seconds=round(job.elapsed_seconds, 3),
        )

    def census_sextuples(self, n: int = 4, budget_seconds: Optional[float] = None, job_id: Optional[str] = None) -> SextupleCensusReport:
        """Create (or resume) the 6-set, exactly-F_5 census and run it."""
        job_id = job_id or self.create_job(n=n, set_size=6, target_q=5)
        return self.run_job(job_id, budget_seconds)
