"""
Command-line interface.

Run: python -m src.cli <command> [options]

Results go to standard output (json, csv or text, always headed by the fully
resolved run configuration); progress and logs go to standard error.

Exit codes: 0 success, 1 not shown solvable (solve: proven unsolvable, or a
randomized search that found no witness), 2 budget exceeded, 3 bad input.
"""

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, NoReturn, Optional, Sequence, Tuple

from pydantic import BaseModel

from src.config import Settings, get_settings
from src.helpers.census import census, iter_valid_placements, valid_placements
from src.models.placement import Placement
from src.schemas.run_schemas import MinorReport, RunConfig, RunOutput, SymmetryReport, ValidityReport
from src.services.census_job_manager import CensusJobManager
from src.services.solver import ReceiverSet, Solver
from src.tools.finite_field import make_field
from src.tools.path_systems import minor, term_profile
from src.tools.placement_validator import disjoint_paths_exist, first_violation, is_distributed
from src.utils.errors import BudgetExceededError, DomainError
from src.utils.logger import log_run

logger = logging.getLogger("src.cli")

EXIT_OK = 0
EXIT_UNSOLVABLE = 1
EXIT_BUDGET = 2
EXIT_BAD_INPUT = 3

EPILOG = """
Examples:
  python -m src.cli census --n 5
  python -m src.cli census --n 7 --extended --jobs 8
  python -m src.cli minor --n 4 --placement 1,3,4,10
  python -m src.cli minfield --n 4 --placement 2,5,7,10 --placement 2,4,9,10 --placement 1,4,5,10
  python -m src.cli minfield --n 3 --all-valid
  python -m src.cli solve --n 4 --q 3 --placement 2,5,7,10 --format text
  python -m src.cli symmetry --n 3 --placement 1,4,5
  python -m src.cli triples --n 4
  python -m src.cli sextuples --n 4 --budget-seconds 600
  python -m src.cli sextuples --job-id 3f2a9c1b7d4e

Points are printed in variable order a1_1, a1_2, a2_1, a2_2, ... with field
elements as integers 0..q-1 in base-p polynomial encoding (F_4: 0, 1, a=2, a+1=3).
"""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports bad input with exit code 3."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=4, help="Lattice length (default: 4)")
    common.add_argument("--format", dest="output_format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--cache-dir", type=Path, help="EvalTable cache and job checkpoints")
    common.add_argument("--log-dir", type=Path, help="JSON-Lines run journal directory")
    common.add_argument("--jobs", type=int, help="Worker processes")
    common.add_argument("--seed", type=int, help="PRNG seed for randomized mode")
    common.add_argument("--verbose", "-v", action="store_true", help="DEBUG logging on stderr")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--placement", action="append", default=[], help="Comma-separated indices; repeat for a set")
    search.add_argument("--no-sides", action="store_true", help="Do not add the side receivers (full F_q^k scan)")
    search.add_argument("--mode", choices=["exhaustive", "randomized", "auto"], default="auto")
    search.add_argument("--max-points", type=int, help="Exhaustive point budget")
    search.add_argument("--trials", type=int, help="Samples in randomized mode")
    search.add_argument("--gauge", action="store_true", help="Scan the gauge-fixed subspace only")

    parser = _Parser(
        prog="python -m src.cli",
        description="Triangular semilattice networks: placements, minors and field sizes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("census", parents=[common], help="Count valid and invalid placements")
    p.add_argument("--stream", action="store_true", help="Also list every valid placement")
    p.add_argument("--extended", action="store_true", help="Allow n above census_max_n")

    p = sub.add_parser("minor", parents=[common], help="Print the minor polynomial of a placement")
    p.add_argument("--placement", required=True)

    p = sub.add_parser("valid", parents=[common], help="Validity, violating triangle and witness paths")
    p.add_argument("--placement", required=True)

    p = sub.add_parser("symmetry", parents=[common], help="Rotation, reflection and orbit of a placement")
    p.add_argument("--placement", required=True)

    p = sub.add_parser("minfield", parents=[common, search], help="Minimum field size of a receiver set")
    p.add_argument("--all-valid", action="store_true", help="Use every valid placement")

    p = sub.add_parser("solve", parents=[common, search], help="Solvability over one field")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--all-valid", action="store_true", help="Use every valid placement")

    sub.add_parser("terms", parents=[common], help="Valid placements by number of minor terms")
    sub.add_parser("pairs", parents=[common], help="Minimum field of every pair of placements")
    sub.add_parser("triples", parents=[common], help="Triples of placements by minimum field")

    p = sub.add_parser("sextuples", parents=[common], help="Checkpointed census of 6-sets needing F_5")
    p.add_argument("--job-id", help="Resume this job")
    p.add_argument("--budget-seconds", type=float, help="Stop (paused) after this many seconds")
    return parser


def resolve(args: argparse.Namespace) -> Tuple[Settings, RunConfig]:
    """CLI flags over environment settings."""
    overrides: Dict[str, Any] = {}
    for flag, name in (("cache_dir", "cache_dir"), ("log_dir", "log_dir"), ("jobs", "jobs"), ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "max_points", None) is not None:
        overrides["max_exhaustive_points"] = args.max_points
    if getattr(args, "trials", None) is not None:
        overrides["random_trials"] = args.trials
    settings = get_settings().model_copy(update=overrides)

    placements = getattr(args, "placement", []) or []
    config = RunConfig(
        command=args.command,
        n=args.n,
        placements=[placements] if isinstance(placements, str) else list(placements),
        q=getattr(args, "q", None),
        include_sides=not getattr(args, "no_sides", False),
        mode=getattr(args, "mode", "auto"),
        max_points=settings.max_exhaustive_points,
        budget_seconds=getattr(args, "budget_seconds", None),
        trials=settings.random_trials,
        seed=settings.seed,
        output_format=args.output_format,
        cache_dir=str(settings.cache_dir),
        jobs=settings.jobs,
        extended=getattr(args, "extended", False),
        stream=getattr(args, "stream", False),
        job_id=getattr(args, "job_id", None),
    )
    return settings, config


# ============================================
# Commands
# ============================================


def _receiver_set(args: argparse.Namespace, config: RunConfig) -> ReceiverSet:
    if getattr(args, "all_valid", False):
        return ReceiverSet(args.n, tuple(valid_placements(args.n)), config.include_sides)
    return ReceiverSet.parse(args.n, config.placements, config.include_sides)


def cmd_census(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    row = census(args.n, jobs=settings.jobs, extended=args.extended)
    result = row.model_dump()
    if args.stream:
        result["placements"] = [str(p) for p in iter_valid_placements(args.n)]
    return result, EXIT_OK


def cmd_minor(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    p = Placement.parse(args.placement, args.n)
    poly = minor(p)
    report = MinorReport(n=p.n, placement=str(p), polynomial=str(poly), terms=poly.term_count, valid=is_distributed(p))
    return report.model_dump(), EXIT_OK


def cmd_valid(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    p = Placement.parse(args.placement, args.n)
    flow = disjoint_paths_exist(p)
    violation = first_violation(p)
    report = ValidityReport(
        n=p.n,
        placement=str(p),
        distributed=violation is None,
        flow_valid=flow.exists,
        violation=f"{violation[0]} holds {violation[1]} labels" if violation else None,
        witness_paths=flow.paths,
    )
    return report.model_dump(), EXIT_OK


def cmd_symmetry(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    p = Placement.parse(args.placement, args.n)
    report = SymmetryReport(
        n=p.n,
        placement=str(p),
        rotated=str(p.rotate()),
        reflected=str(p.reflect()),
        orbit=[str(image) for image in p.orbit()],
        valid=is_distributed(p),
    )
    return report.model_dump(), EXIT_OK


def cmd_minfield(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    rs = _receiver_set(args, config)
    result = Solver(settings).min_field(rs, mode=config.mode, gauge=args.gauge)
    return result.model_dump(), EXIT_OK


def cmd_solve(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    rs = _receiver_set(args, config)
    result = Solver(settings).is_solvable(rs, args.q, mode=config.mode, gauge=args.gauge)
    return result.model_dump(), EXIT_OK if result.solvable else EXIT_UNSOLVABLE


def cmd_terms(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    return term_profile(args.n).model_dump(), EXIT_OK


def cmd_pairs(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    return Solver(settings).census_pairs(args.n).model_dump(), EXIT_OK


def cmd_triples(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    return Solver(settings).census_triples(args.n).model_dump(), EXIT_OK


def cmd_sextuples(args, config: RunConfig, settings: Settings) -> Tuple[dict, int]:
    manager = CensusJobManager(Solver(settings), settings)
    report = manager.census_sextuples(n=args.n, budget_seconds=args.budget_seconds, job_id=args.job_id)
    return report.model_dump(), EXIT_OK if report.status == "completed" else EXIT_BUDGET


COMMANDS = {
    "census": cmd_census,
    "minor": cmd_minor,
    "valid": cmd_valid,
    "symmetry": cmd_symmetry,
    "minfield": cmd_minfield,
    "solve": cmd_solve,
    "terms": cmd_terms,
    "pairs": cmd_pairs,
    "triples": cmd_triples,
    "sextuples": cmd_sextuples,
}


# ============================================
# Output
# ============================================


def _witness_text(result: dict, q: Optional[int]) -> Optional[str]:
    witness, field_q = result.get("witness"), result.get("q") or q
    if not witness or not field_q:
        return None
    field = make_field(field_q)
    return "(" + ",".join(field.element_str(v) for v in witness) + ")"


def render(output: RunOutput, stream=None) -> None:
    stream = stream or sys.stdout
    config = output.config
    if config.output_format == "json":
        stream.write(output.model_dump_json(indent=2) + "\n")
        return

    header = config.model_dump(mode="json")
    if config.output_format == "csv":
        stream.write(f"# config: {json.dumps(header)}\n")
        rows = output.result.get("placements")
        writer = csv.writer(stream)
        if config.stream and rows is not None:
            writer.writerow(["placement"])
            writer.writerows([row] for row in rows)
            return
        writer.writerow(list(output.result))
        writer.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in output.result.values()])
        return

    for key, value in header.items():
        stream.write(f"# {key}: {value}\n")
    for key, value in output.result.items():
        if key == "placements" and isinstance(value, list):
            stream.write(f"{key}:\n")
            stream.writelines(f"  {row}\n" for row in value)
        else:
            stream.write(f"{key}: {value}\n")
    pretty = _witness_text(output.result, config.q)
    if pretty:
        stream.write(f"witness (polynomial form): {pretty}\n")


def _summary(result: Any) -> Any:
    if isinstance(result, dict) and "placements" in result:
        return {k: v for k, v in result.items() if k != "placements"}
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    started = time.perf_counter()
    try:
        settings, config = resolve(args)
        result, exit_code = COMMANDS[args.command](args, config, settings)
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e}")
        return EXIT_BUDGET
    except (DomainError, ValueError) as e:
        logger.error(f"Bad input: {e}")
        return EXIT_BAD_INPUT

    if isinstance(result, BaseModel):
        result = result.model_dump(mode="json")
    output = RunOutput(config=config, result=result, exit_code=exit_code)
    render(output)

    try:
        log_run(args.command, config, _summary(result), time.perf_counter() - started, log_dir=settings.log_dir)
    except OSError as e:
        logger.warning(f"Run journal not written: {e}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
