"""Command-line front end: ``slt <command> --problem <path|builtin> ...``.

Commands write one table (CSV or JSON) to ``--out`` (stdout by default).
Exit codes: 0 success, 1 invalid problem or configuration, 2 numerical failure.
"""

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .asymptotic import asym_char, asym_eigenfunction, asym_eigenvalue_seed, probe_mu
from .charfn import CharSample, char_samples, char_value
from .config import SolverSettings
from .eigen import find_eigenvalues, locate_near_seed, sample_solution, scan_nodes
from .errors import (
    ConfigError,
    DegenerateLeading,
    IndexTooSmall,
    NumericalError,
    ProblemError,
)
from .fundamental import build_phi
from .logging_config import get_logger, set_level
from .model import MINOR_PAIRS, ValidatedProblem, delta, validate
from .problems import load_problem
from .results import ResultTable
from .storage import open_sink

logger = get_logger(__name__)

COMMANDS = ("scan", "solve", "charfn", "eigenfunction", "asymptotics", "validate", "example")

CHARFN_COLUMNS = ["mu", "lambda", "w", "w_minus", "w_plus", "consistency"]
EIGENFUNCTION_COLUMNS = ["x", "side", "y", "dy"]
SOLVE_COLUMNS = ["n", "branch", "lambda", "mu", "seed_mu", "w_residual",
                 "bc_res_1", "bc_res_2", "tm_res_1", "tm_res_2", "prop_defect"]
ASYMPTOTICS_COLUMNS = ["n", "branch", "seed_mu", "refined_mu", "n_times_gap", "w_ratio", "shape_defect"]
SCAN_COLUMNS = ["lambda_lo", "lambda_hi", "w_lo", "w_hi"]
VALIDATE_COLUMNS = ["key", "value"]

DEGENERATE_NOTE = "Delta24=0: leading terms vanish"


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation, after parsing.

    ``range`` is in the units named by ``units``; ``points`` is the node
    count for charfn, the step count for scan and the per-piece grid for
    eigenfunction.
    """

    command: str
    problem_path: str = "paper-example"
    range: Optional[Tuple[float, float]] = None
    units: str = "mu"
    n_max: Optional[int] = None
    n_range: Tuple[int, int] = (10, 40)
    mu: Optional[float] = None
    points: Optional[int] = None
    output_path: str = "-"
    format: str = "csv"
    strict: bool = False
    overrides: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.range is not None and not self.range[0] < self.range[1]:
            raise ConfigError(f"Range needs lo < hi, got {self.range[0]}:{self.range[1]}")
        if self.n_max is not None and self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if not 1 <= self.n_range[0] <= self.n_range[1]:
            raise ConfigError(f"Bad n range {self.n_range[0]}:{self.n_range[1]}")
        if self.units not in ("mu", "lambda"):
            raise ConfigError(f"units must be mu or lambda, got {self.units!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.points is not None and self.points < 2:
            raise ConfigError("points must be at least 2")

    @property
    def settings(self) -> SolverSettings:
        return SolverSettings().with_overrides(self.overrides)

    def lambda_range(self) -> Optional[Tuple[float, float]]:
        """Range converted to lambda; a mu range must not be negative."""
        if self.range is None:
            return None
        lo, hi = self.range
        if self.units == "lambda":
            return lo, hi
        if lo < 0:
            raise ConfigError("A mu range for this command must start at 0 or above")
        return lo * lo, hi * hi


def prepare_problem(config: RunConfig) -> ValidatedProblem:
    spec = load_problem(config.problem_path, strict=config.strict)
    problem = validate(spec, zero_tol=config.settings.zero_tol)
    logger.info("problem %s validated: %s", problem.name, problem.case.tag.value)
    return problem


def _mu_of(lam: float) -> Optional[float]:
    return math.sqrt(lam) if lam >= 0 else None


def cmd_charfn(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """w, w-, w+ and their consistency on a uniform grid of the requested range."""
    problem = problem or prepare_problem(config)
    settings = config.settings
    lo, hi = config.range or (0.0, 10.0)
    grid = np.linspace(lo, hi, config.points or 1001)
    if config.units == "mu":
        mus, lams = grid, grid ** 2
    else:
        mus, lams = [_mu_of(lam) for lam in grid], grid

    samples: List[Optional[CharSample]] = []
    failures: Dict[int, str] = {}
    for start in range(0, lams.size, settings.batch_size):
        chunk = lams[start:start + settings.batch_size]
        try:
            samples.extend(char_samples(problem, chunk, settings=settings))
            continue
        except NumericalError:
            pass
        for offset, lam in enumerate(chunk):
            try:
                samples.extend(char_samples(problem, [lam], settings=settings))
            except NumericalError as exc:
                logger.warning("charfn node lambda=%g failed: %s", lam, exc)
                failures[start + offset] = str(exc)
                samples.append(None)

    columns = CHARFN_COLUMNS + (["warning"] if failures else [])
    table = ResultTable(columns)
    for i, sample in enumerate(samples):
        row = {"mu": None if mus[i] is None else float(mus[i]), "lambda": float(lams[i])}
        if sample is not None:
            row.update(w=sample.w, w_minus=sample.w_minus, w_plus=sample.w_plus,
                       consistency=sample.consistency)
        if failures:
            row["warning"] = failures.get(i)
        table.append(row)
    return table


def cmd_eigenfunction(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """phi at lambda = mu^2 (or the given lambda) sampled on both pieces."""
    problem = problem or prepare_problem(config)
    if config.mu is None:
        raise ConfigError("eigenfunction needs --mu")
    lam = config.mu ** 2 if config.units == "mu" else config.mu
    solution = build_phi(problem, lam, settings=config.settings)
    samples = sample_solution(solution, config.points or 201)
    table = ResultTable(EIGENFUNCTION_COLUMNS)
    for side, xs, ys, dys in (("left", samples.x_left, samples.y_left, samples.dy_left),
                              ("right", samples.x_right, samples.y_right, samples.dy_right)):
        for x, y, dy in zip(xs, ys, dys):
            table.append({"x": float(x), "side": side, "y": float(y), "dy": float(dy)})
    return table


def cmd_solve(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """Eigenvalue table with per-eigenvalue residuals."""
    problem = problem or prepare_problem(config)
    mu_max = None
    lam_range = config.lambda_range()
    if lam_range is not None:
        mu_max = math.sqrt(max(lam_range[1], 0.0))
    n_max = config.n_max if (config.n_max is not None or mu_max is not None) else 10
    records = find_eigenvalues(problem, n_max=n_max, mu_max=mu_max, settings=config.settings)
    table = ResultTable(SOLVE_COLUMNS)
    notes: List[str] = []
    for record in records:
        if lam_range is not None and record.lam < lam_range[0]:
            continue
        table.append({
            "n": record.n,
            "branch": record.branch,
            "lambda": record.lam,
            "mu": record.mu,
            "seed_mu": record.seed_mu,
            "w_residual": record.w_residual,
            "bc_res_1": record.bc_residuals[0],
            "bc_res_2": record.bc_residuals[1],
            "tm_res_1": record.tm_residuals[0],
            "tm_res_2": record.tm_residuals[1],
            "prop_defect": record.proportionality_defect,
        })
        notes.extend(note for note in record.warnings if note not in notes)
    for note in notes:
        table.add_note(note)
    return table


def _shape_defect(problem: ValidatedProblem, lam: float, n: int, branch: int,
                  settings: SolverSettings, grid: int = 101) -> Optional[float]:
    """sup-difference of numeric and leading eigenfunction shapes, both scaled on the left piece."""
    samples = sample_solution(build_phi(problem, lam, settings=settings), grid)
    try:
        left = np.array([asym_eigenfunction(problem, n, branch, x, "left") for x in samples.x_left])
        right = np.array([asym_eigenfunction(problem, n, branch, x, "right") for x in samples.x_right])
    except DegenerateLeading:
        return None
    pivot = int(np.argmax(np.abs(samples.y_left)))
    if samples.y_left[pivot] == 0.0 or left[pivot] == 0.0:
        return None
    numeric = np.concatenate([samples.y_left, samples.y_right]) / samples.y_left[pivot]
    leading = np.concatenate([left, right]) / left[pivot]
    return float(np.max(np.abs(numeric - leading)))


def cmd_asymptotics(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """Seeds against refined roots, and w against its leading term, for an index range."""
    problem = problem or prepare_problem(config)
    settings = config.settings
    table = ResultTable(ASYMPTOTICS_COLUMNS)
    degenerate = problem.case.degenerate_leading
    if degenerate:
        logger.warning(DEGENERATE_NOTE)
        table.add_note(DEGENERATE_NOTE)
    lo, hi = config.n_range
    for branch in (1, 2):
        for n in range(lo, hi + 1):
            try:
                seed = asym_eigenvalue_seed(problem, n, branch)
            except IndexTooSmall as exc:
                table.add_note(str(exc))
                continue
            record = locate_near_seed(problem, seed, settings)
            row = {"n": n, "branch": branch, "seed_mu": seed.mu}
            if record is not None and record.mu is not None:
                row["refined_mu"] = record.mu
                row["n_times_gap"] = n * abs(record.mu - seed.mu)
                row["shape_defect"] = _shape_defect(problem, record.lam, n, branch, settings)
            if not degenerate:
                probe = probe_mu(problem, seed)
                try:
                    leading = asym_char(problem, probe)
                except DegenerateLeading as exc:
                    if str(exc) not in table.notes:
                        logger.warning("%s", exc)
                        table.add_note(str(exc))
                else:
                    row["w_ratio"] = char_value(problem, probe * probe, settings=settings) / leading
            table.append(row)
    return table


def cmd_scan(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """Sign-change brackets of w on a uniform lambda grid."""
    problem = problem or prepare_problem(config)
    lo, hi = config.lambda_range() or (0.0, 100.0)
    nodes = np.linspace(lo, hi, (config.points or 2000) + 1)
    result = scan_nodes(problem, nodes, config.settings)
    table = ResultTable(SCAN_COLUMNS)
    for bracket in result.brackets:
        table.append({"lambda_lo": bracket.lo, "lambda_hi": bracket.hi,
                      "w_lo": bracket.w_lo, "w_hi": bracket.w_hi})
    for note in result.warnings:
        table.add_note(note)
    return table


def cmd_validate(config: RunConfig, problem: Optional[ValidatedProblem] = None) -> ResultTable:
    """theta values, all minors of T, the asymptotic case and any sign warnings."""
    problem = problem or prepare_problem(config)
    table = ResultTable(VALIDATE_COLUMNS)
    table.append({"key": "theta1", "value": problem.bc.theta1})
    table.append({"key": "theta2", "value": problem.bc.theta2})
    for k, j in MINOR_PAIRS:
        table.append({"key": f"Delta{k}{j}", "value": delta(problem.tm, k, j)})
    table.append({"key": "case", "value": problem.case.tag.value})
    table.append({"key": "degenerate_leading", "value": problem.case.degenerate_leading})
    for warning in problem.warnings:
        table.add_note(warning)
    return table


def cmd_example(config: RunConfig, out_dir: Path) -> ResultTable:
    """Run every command on the built-in example and write one file per table."""
    base = RunConfig(command="charfn", problem_path="paper-example", format=config.format,
                     overrides=config.overrides)
    problem = prepare_problem(base)
    suffix = config.format
    jobs = [
        ("charfn", cmd_charfn, dict(command="charfn", range=(0.0, 10.0), points=1001)),
        ("eigenfunction_mu1", cmd_eigenfunction, dict(command="eigenfunction", mu=1.0)),
        ("eigenfunction_mu10", cmd_eigenfunction, dict(command="eigenfunction", mu=10.0)),
        ("solve", cmd_solve, dict(command="solve", range=(0.0, 20.0))),
        ("asymptotics", cmd_asymptotics, dict(command="asymptotics", n_range=config.n_range)),
    ]
    written = ResultTable(["table", "path", "rows"])
    for name, command, options in jobs:
        run = RunConfig(problem_path="paper-example", format=config.format,
                        overrides=config.overrides, **options)
        table = command(run, problem)
        path = out_dir / f"{name}.{suffix}"
        with open_sink(path, config.format) as sink:
            sink.save(table)
        logger.info("wrote %s (%d rows)", path, len(table))
        written.append({"table": name, "path": str(path), "rows": len(table)})
    return written


HANDLERS = {
    "scan": cmd_scan,
    "solve": cmd_solve,
    "charfn": cmd_charfn,
    "eigenfunction": cmd_eigenfunction,
    "asymptotics": cmd_asymptotics,
    "validate": cmd_validate,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise ConfigError(message)


def _pair(text: str, kind=float) -> Tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"Expected lo:hi, got {text!r}")
    try:
        return kind(parts[0]), kind(parts[1])
    except ValueError as exc:
        raise ConfigError(f"Bad range {text!r}: {exc}") from exc


def _overrides(items: Sequence[str]) -> Dict[str, str]:
    result = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        result[key.strip()] = value.strip()
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slt", description="Discontinuous Sturm-Liouville problems with "
                     "eigenparameter-dependent boundary conditions and transmission conditions")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--problem", default="paper-example",
                        help="Problem file (.json or INI text) or built-in name")
    parser.add_argument("--range", help="lo:hi in the units given by --units")
    parser.add_argument("--units", choices=("mu", "lambda"), default="mu")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--n-range", default="10:40", dest="n_range", help="lo:hi index range (asymptotics)")
    parser.add_argument("--mu", type=float, help="Spectral point for eigenfunction")
    parser.add_argument("--points", type=int, help="Grid nodes (charfn), steps (scan), per-piece samples (eigenfunction)")
    parser.add_argument("--out", default="-", help="Output file, '-' for stdout; a directory for example")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--strict", action="store_true", help="Sign assumptions are errors")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="Override a solver setting; repeatable")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> Tuple[RunConfig, int]:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        problem_path=args.problem,
        range=_pair(args.range) if args.range else None,
        units=args.units,
        n_max=args.n_max,
        n_range=_pair(args.n_range, int),
        mu=args.mu,
        points=args.points,
        output_path=args.out,
        format=args.format,
        strict=args.strict,
        overrides=_overrides(args.set),
    )
    return config, args.verbose


def run(config: RunConfig) -> ResultTable:
    """Execute one command and persist its table."""
    if config.command == "example":
        out_dir = Path("slt-example" if config.output_path == "-" else config.output_path)
        out_dir.mkdir(parents=True, exist_ok=True)
        return cmd_example(config, out_dir)
    table = HANDLERS[config.command](config)
    with open_sink(config.output_path, config.format) as sink:
        sink.save(table)
    return table


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config, verbosity = parse_config(argv)
        if verbosity:
            set_level("DEBUG" if verbosity > 1 else "INFO")
        run(config)
    except (ProblemError, ConfigError) as exc:
        logger.error("%s", exc)
        return 1
    except NumericalError as exc:
        logger.error("numerical failure: %s", exc)
        return 2
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
