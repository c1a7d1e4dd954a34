"""Eigenvalues as zeros of w: scanning, refinement, labelling and eigenfunctions."""

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .asymptotic import (
    AsymptoticSeed,
    asym_eigenvalue_seed,
    estimate_shift,
    min_index,
    seed_spacing,
)
from .charfn import char_value, char_values
from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import MaxIterations, NumericalError
from .fundamental import FundamentalSolution, boundary_residuals, build_phi, build_psi
from .logging_config import get_logger
from .model import ValidatedProblem
from .pool import EvaluationPool

logger = get_logger(__name__)

# brentq refuses rtol below 4 * machine epsilon
_BRENT_RTOL = 4.0 * np.finfo(float).eps
# a local |w| minimum this far below both neighbours, without a sign change, is flagged
SUSPECT_RATIO = 1e-2
# distance used to split a zero node into a micro-bracket
MICRO_STEP = 1e-7
# hard cap on the mu range walked by the degenerate fallback search
_FALLBACK_MU_LIMIT = 1e4


@dataclass(frozen=True)
class Bracket:
    """Interval of lambda over which w changes sign."""

    lo: float
    hi: float
    w_lo: float
    w_hi: float

    @property
    def scale(self) -> float:
        return max(abs(self.w_lo), abs(self.w_hi))


@dataclass(frozen=True)
class ScanResult:
    lambdas: np.ndarray
    values: np.ndarray
    brackets: List[Bracket]
    suspects: List[float]
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class EigenvalueRecord:
    """Refined eigenvalue with its residual diagnostics.

    Attributes:
        n: Index, or None when the root matched no seed
        branch: 1 or 2, or None when unmatched
        lam: Refined eigenvalue
        bracket: (lambda_lo, lambda_hi) the root was refined in
        seed_mu: Asymptotic seed after shift correction, or None
        seed_shift: Integer shift applied to the branch seeds
        w_residual: |w| at the refined point
        w_scale: max |w| at the bracket ends
        bc_residuals: Relative residuals of both boundary conditions on phi
        tm_residuals: Relative residuals of both transmission rows on phi
        proportionality_defect: sup|psi - k phi| / sup|k phi| with least-squares k
        converged: False when refinement hit the iteration cap
    """

    lam: float
    bracket: Tuple[float, float]
    w_residual: float
    w_scale: float
    bc_residuals: Tuple[float, float] = (math.nan, math.nan)
    tm_residuals: Tuple[float, float] = (math.nan, math.nan)
    proportionality_defect: float = math.nan
    converged: bool = True
    iterations: int = 0
    n: Optional[int] = None
    branch: Optional[int] = None
    seed_mu: Optional[float] = None
    seed_shift: int = 0
    warnings: Tuple[str, ...] = ()

    @property
    def mu(self) -> Optional[float]:
        return math.sqrt(self.lam) if self.lam >= 0 else None

    @property
    def matched(self) -> bool:
        return self.branch is not None


@dataclass(frozen=True)
class SampledEigenfunction:
    """Eigenfunction samples on both closed pieces, max-abs normalized."""

    lam: float
    x_left: np.ndarray
    y_left: np.ndarray
    dy_left: np.ndarray
    x_right: np.ndarray
    y_right: np.ndarray
    dy_right: np.ndarray
    scale: float

    @property
    def jump(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """((y(c-), y'(c-)), (y(c+), y'(c+)))."""
        return ((float(self.y_left[-1]), float(self.dy_left[-1])),
                (float(self.y_right[0]), float(self.dy_right[0])))


def _node_values(problem: ValidatedProblem, lams: np.ndarray, settings: SolverSettings,
                 pool: EvaluationPool) -> Tuple[np.ndarray, List[str]]:
    """Evaluate w on nodes in batches; failed nodes come back as NaN."""
    chunks = [lams[i:i + settings.batch_size] for i in range(0, lams.size, settings.batch_size)]

    def evaluate(chunk: np.ndarray) -> Tuple[np.ndarray, List[str]]:
        try:
            return char_values(problem, chunk, settings=settings), []
        except NumericalError:
            pass
        out, notes = np.empty(chunk.size), []
        for i, lam in enumerate(chunk):
            try:
                out[i] = char_value(problem, float(lam), settings=settings)
            except NumericalError as exc:
                out[i] = math.nan
                notes.append(f"scan node lambda={lam:.17g} skipped: {exc}")
                logger.warning("scan node lambda=%g skipped: %s", lam, exc)
        return out, notes

    values, warnings = [], []
    for part, notes in pool.map(evaluate, chunks):
        values.append(part)
        warnings.extend(notes)
    return (np.concatenate(values) if values else np.zeros(0)), warnings


def suspected_multiple_roots(lambdas: Sequence[float], values: Sequence[float]) -> List[float]:
    """Interior nodes where |w| dips sharply without changing sign."""
    lams = np.asarray(lambdas, dtype=float)
    ws = np.asarray(values, dtype=float)
    suspects = []
    for i in range(1, ws.size - 1):
        left, mid, right = ws[i - 1], ws[i], ws[i + 1]
        if not (np.isfinite(left) and np.isfinite(mid) and np.isfinite(right)) or mid == 0.0:
            continue
        if np.sign(left) != np.sign(mid) or np.sign(right) != np.sign(mid):
            continue
        if abs(mid) <= SUSPECT_RATIO * min(abs(left), abs(right)):
            suspects.append(float(lams[i]))
    return suspects


def _micro_bracket(problem: ValidatedProblem, lam: float,
                   settings: SolverSettings) -> Tuple[Optional[Bracket], str]:
    """Split a zero node into a small sign-change bracket, or explain why not."""
    step = MICRO_STEP * max(1.0, abs(lam))
    lo, hi = lam - step, lam + step
    try:
        w_lo = char_value(problem, lo, settings=settings)
        w_hi = char_value(problem, hi, settings=settings)
    except NumericalError as exc:
        return None, f"zero node at lambda={lam:.17g} skipped: {exc}"
    if w_lo * w_hi < 0:
        return Bracket(lo, hi, w_lo, w_hi), ""
    return None, f"zero node at lambda={lam:.17g} without sign change"


def scan_nodes(problem: ValidatedProblem, lambdas: Sequence[float],
               settings: SolverSettings = DEFAULT_SETTINGS,
               pool: Optional[EvaluationPool] = None) -> ScanResult:
    """Locate sign changes of w over an increasing set of nodes.

    Args:
        problem: Validated problem
        lambdas: Strictly increasing nodes
        settings: Solver settings
        pool: Pool for batch evaluation; a private inline pool when omitted

    Returns:
        ScanResult with brackets in increasing order
    """
    lams = np.asarray(lambdas, dtype=float)
    if lams.size and np.any(np.diff(lams) <= 0):
        raise ValueError("scan nodes must be strictly increasing")
    own_pool = pool is None
    pool = pool or EvaluationPool(settings.workers)
    try:
        ws, warnings = _node_values(problem, lams, settings, pool)
    finally:
        if own_pool:
            pool.close()

    brackets: List[Bracket] = []
    floor = settings.scan_abs_floor
    # last finite, nonzero node; failed (NaN) nodes are stepped over
    prev: Optional[Tuple[float, float]] = None
    for lam, w in zip(lams, ws):
        lam, w = float(lam), float(w)
        if not np.isfinite(w):
            continue
        if abs(w) <= floor:
            prev = None
            bracket, note = _micro_bracket(problem, lam, settings)
            if bracket is not None:
                brackets.append(bracket)
            else:
                logger.warning("%s", note)
                warnings.append(note)
            continue
        if prev is not None and prev[1] * w < 0:
            brackets.append(Bracket(prev[0], lam, prev[1], w))
        prev = (lam, w)

    suspects = suspected_multiple_roots(lams, ws)
    for lam in suspects:
        logger.warning("suspected multiple root near lambda=%g", lam)
        warnings.append(f"suspected multiple root near lambda={lam:.17g}")
    logger.debug("scanned %d nodes, %d brackets", lams.size, len(brackets))
    return ScanResult(lams, ws, brackets, suspects, tuple(warnings))


def scan(problem: ValidatedProblem, lambda_lo: float, lambda_hi: float, steps: int,
         settings: SolverSettings = DEFAULT_SETTINGS,
         pool: Optional[EvaluationPool] = None) -> List[Bracket]:
    """Sign-change brackets of w on a uniform lambda grid of ``steps`` intervals."""
    if not lambda_lo < lambda_hi:
        raise ValueError(f"Need lambda_lo < lambda_hi, got {lambda_lo}, {lambda_hi}")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    nodes = np.linspace(lambda_lo, lambda_hi, steps + 1)
    return scan_nodes(problem, nodes, settings, pool).brackets


def _sample_pieces(solution: FundamentalSolution, grid: int
                   ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    dom_left, dom_right = solution.left.piece, solution.right.piece
    x_left = np.linspace(min(dom_left), max(dom_left), grid)
    x_right = np.linspace(min(dom_right), max(dom_right), grid)
    y_left, dy_left = solution.evaluate(x_left, "left")
    y_right, dy_right = solution.evaluate(x_right, "right")
    return x_left, y_left, dy_left, x_right, y_right, dy_right


def proportionality_defect(phi: FundamentalSolution, psi: FundamentalSolution, grid: int = 101) -> float:
    """sup|psi - k phi| / sup|k phi| over both pieces, k from least squares."""
    _, u_left, _, _, u_right, _ = _sample_pieces(phi, grid)
    _, v_left, _, _, v_right, _ = _sample_pieces(psi, grid)
    u = np.concatenate([u_left, u_right])
    v = np.concatenate([v_left, v_right])
    norm = float(u @ u)
    if norm == 0.0:
        return math.nan
    k = float(u @ v) / norm
    reference = np.max(np.abs(k * u))
    if reference == 0.0:
        return math.nan
    return float(np.max(np.abs(v - k * u)) / reference)


def refine(problem: ValidatedProblem, bracket: Bracket,
           settings: SolverSettings = DEFAULT_SETTINGS,
           diagnostics: bool = True, raise_on_failure: bool = False) -> EigenvalueRecord:
    """Refine a sign-change bracket with Brent's method.

    Args:
        problem: Validated problem
        bracket: Bracket with opposite signs of w at its ends
        settings: Solver settings
        diagnostics: Rebuild phi and psi at the root and fill the residuals
        raise_on_failure: Raise MaxIterations instead of flagging the record

    Returns:
        EigenvalueRecord; ``converged`` is False when the iteration cap was hit
    """
    if bracket.w_lo * bracket.w_hi > 0:
        raise ValueError(f"w does not change sign on [{bracket.lo}, {bracket.hi}]")
    xtol = settings.refine_xtol * max(1.0, abs(bracket.lo), abs(bracket.hi))

    def w(lam: float) -> float:
        return char_value(problem, lam, settings=settings)

    root, info = brentq(w, bracket.lo, bracket.hi, xtol=xtol, rtol=_BRENT_RTOL,
                        maxiter=settings.refine_maxiter, full_output=True, disp=False)
    notes: List[str] = []
    if not info.converged:
        message = f"refinement of [{bracket.lo:g}, {bracket.hi:g}] stopped after {info.iterations} iterations"
        if raise_on_failure:
            raise MaxIterations(message)
        logger.warning(message)
        notes.append(message)
    logger.debug("refined root lambda=%.17g in %d iterations", root, info.iterations)

    record = EigenvalueRecord(
        lam=float(root),
        bracket=(bracket.lo, bracket.hi),
        w_residual=abs(w(root)),
        w_scale=bracket.scale,
        converged=bool(info.converged),
        iterations=int(info.iterations),
        warnings=tuple(notes),
    )
    if not diagnostics:
        return record
    phi = build_phi(problem, root, settings=settings)
    psi = build_psi(problem, root, settings=settings)
    return replace(
        record,
        bc_residuals=boundary_residuals(problem, phi),
        tm_residuals=phi.transmission_residuals(problem.tm),
        proportionality_defect=proportionality_defect(phi, psi),
    )


def _mu_grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = max(2, int(math.ceil((hi - lo) / step)) + 1)
    return np.linspace(lo, hi, count)


def _scan_step(problem: ValidatedProblem, settings: SolverSettings) -> float:
    return min(seed_spacing(problem, 1), seed_spacing(problem, 2)) / settings.nodes_per_halfperiod


def _lambda_floor(problem: ValidatedProblem, settings: SolverSettings) -> float:
    if settings.lambda_floor is not None:
        return settings.lambda_floor
    return -10.0 * max(problem.q_bound, 1.0)


def _negative_nodes(floor: float, step: float) -> np.ndarray:
    """Nodes on [floor, 0) spaced uniformly in sqrt(-lambda)."""
    if floor >= 0:
        return np.zeros(0)
    s = _mu_grid(0.0, math.sqrt(-floor), step)
    return -(s[::-1] ** 2)[:-1]


def _merge_intervals(intervals: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    merged: List[Tuple[float, float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def _dedupe(records: Sequence[EigenvalueRecord], settings: SolverSettings) -> List[EigenvalueRecord]:
    result: List[EigenvalueRecord] = []
    for record in sorted(records, key=lambda r: r.lam):
        if result:
            last = result[-1]
            tol = 10.0 * settings.refine_xtol * max(1.0, abs(record.lam))
            if abs(record.lam - last.lam) <= tol:
                if record.w_residual < last.w_residual:
                    result[-1] = record
                continue
        result.append(record)
    return result


def _branch_seeds(problem: ValidatedProblem, branch: int, n_max: Optional[int],
                  mu_top: Optional[float]) -> List[AsymptoticSeed]:
    seeds: List[AsymptoticSeed] = []
    n = min_index(problem, branch)
    gap = seed_spacing(problem, branch)
    while True:
        if n_max is not None and n > n_max:
            break
        seed = asym_eigenvalue_seed(problem, n, branch)
        if mu_top is not None and seed.mu - gap > mu_top:
            break
        seeds.append(seed)
        n += 1
    return seeds


def _label(problem: ValidatedProblem, records: List[EigenvalueRecord],
           seeds: Dict[int, List[AsymptoticSeed]]) -> List[EigenvalueRecord]:
    """Match records to seeds by nearest mu after a per-branch integer shift."""
    positive = [(i, r.mu) for i, r in enumerate(records) if r.mu is not None]
    if not positive:
        return records
    root_mus = [mu for _, mu in positive]
    candidates = []
    for branch, branch_seeds in seeds.items():
        gap = seed_spacing(problem, branch)
        shift = estimate_shift([s.mu for s in branch_seeds], root_mus, gap)
        for seed in branch_seeds:
            target = seed.mu + shift * gap
            for index, mu in positive:
                distance = abs(mu - target)
                if distance <= 0.5 * gap:
                    candidates.append((distance, branch, seed.n, index, target, shift))
    labelled = list(records)
    used_records, used_seeds = set(), set()
    for distance, branch, n, index, target, shift in sorted(candidates):
        if index in used_records or (branch, n) in used_seeds:
            continue
        used_records.add(index)
        used_seeds.add((branch, n))
        labelled[index] = replace(labelled[index], n=n, branch=branch, seed_mu=target, seed_shift=shift)
    return labelled


def _refine_all(problem: ValidatedProblem, brackets: Sequence[Bracket], settings: SolverSettings,
                pool: EvaluationPool) -> List[EigenvalueRecord]:
    return pool.map(lambda b: refine(problem, b, settings), brackets)


def find_eigenvalues(problem: ValidatedProblem, n_max: Optional[int] = None,
                     window_pad: Optional[float] = None, mu_max: Optional[float] = None,
                     settings: SolverSettings = DEFAULT_SETTINGS,
                     pool: Optional[EvaluationPool] = None) -> List[EigenvalueRecord]:
    """Find, refine and label eigenvalues.

    The search covers [lambda_floor, 0) and then, in mu, the union of
    seed-centered windows of half-width window_pad * seed spacing for both
    branches up to n_max, plus everything below the first window. When the
    leading asymptotics are degenerate (Delta24 = 0) the seeds are useless
    and the search walks upward in mu until n_max roots are found.

    Args:
        problem: Validated problem
        n_max: Largest seed index per branch; in the degenerate fallback the
            number of lowest eigenvalues returned
        window_pad: Window half-width in seed spacings; settings.window_pad when None
        mu_max: Optional upper limit on mu of the returned roots
        settings: Solver settings
        pool: Evaluation pool; a private one with settings.workers threads when omitted

    Returns:
        Records sorted by lambda ascending, without duplicates
    """
    if n_max is None and mu_max is None:
        raise ValueError("Give n_max, mu_max or both")
    if n_max is not None and n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    pad = settings.window_pad if window_pad is None else window_pad
    step = _scan_step(problem, settings)
    floor = _lambda_floor(problem, settings)
    own_pool = pool is None
    pool = pool or EvaluationPool(settings.workers)
    notes: List[str] = []
    try:
        if problem.case.degenerate_leading:
            message = "SeedDegenerate: Delta24=0, falling back to a dense scan"
            logger.warning(message)
            notes.append(message)
            records = _fallback_search(problem, n_max, mu_max, floor, step, settings, pool)
            records = [replace(r, n=i + 1) for i, r in enumerate(records)]
        else:
            records, seeds = _windowed_search(problem, n_max, mu_max, pad, floor, step, settings, pool)
            records = _label(problem, records, seeds)
    finally:
        if own_pool:
            pool.close()
    if notes:
        records = [replace(r, warnings=r.warnings + tuple(notes)) for r in records]
    logger.info("found %d eigenvalues for %s", len(records), problem.name or "problem")
    return records


def _windowed_search(problem, n_max, mu_max, pad, floor, step, settings, pool):
    seeds = {branch: _branch_seeds(problem, branch, n_max, mu_max) for branch in (1, 2)}
    windows = []
    for branch, branch_seeds in seeds.items():
        half = pad * seed_spacing(problem, branch)
        windows.extend((max(0.0, s.mu - half), s.mu + half) for s in branch_seeds)
    if windows:
        top = max(hi for _, hi in windows)
        if mu_max is not None:
            top = min(top, mu_max)
    else:
        top = mu_max if mu_max is not None else max(seed_spacing(problem, 1), seed_spacing(problem, 2))
    first = min((lo for lo, _ in windows), default=top)
    windows.append((0.0, first))
    intervals = [(lo, min(hi, top)) for lo, hi in _merge_intervals(windows) if lo < top]
    intervals = [(lo, hi) for lo, hi in intervals if hi > lo]

    brackets: List[Bracket] = []
    negative = _negative_nodes(floor, step)
    for k, (lo, hi) in enumerate(intervals):
        nodes = _mu_grid(lo, hi, step) ** 2
        if k == 0 and lo == 0.0 and negative.size:
            nodes = np.concatenate([negative, nodes])
        brackets.extend(scan_nodes(problem, nodes, settings, pool).brackets)
    records = _dedupe(_refine_all(problem, brackets, settings, pool), settings)
    if mu_max is not None:
        records = [r for r in records if r.mu is None or r.mu <= mu_max]
    return records, seeds


def _fallback_search(problem, n_max, mu_max, floor, step, settings, pool):
    chunk = 8.0 * max(seed_spacing(problem, 1), seed_spacing(problem, 2))
    limit = mu_max if mu_max is not None else _FALLBACK_MU_LIMIT
    records: List[EigenvalueRecord] = []
    negative = _negative_nodes(floor, step)
    lo = 0.0
    while lo < limit and (n_max is None or len(records) < n_max):
        hi = min(lo + chunk, limit)
        nodes = _mu_grid(lo, hi, step) ** 2
        if lo == 0.0 and negative.size:
            nodes = np.concatenate([negative, nodes])
        brackets = scan_nodes(problem, nodes, settings, pool).brackets
        records = _dedupe(records + _refine_all(problem, brackets, settings, pool), settings)
        lo = hi
    if mu_max is not None:
        records = [r for r in records if r.mu is None or r.mu <= mu_max]
    if n_max is not None:
        records = records[:n_max]
    return records


def locate_near_seed(problem: ValidatedProblem, seed: AsymptoticSeed,
                     settings: SolverSettings = DEFAULT_SETTINGS,
                     window_pad: Optional[float] = None) -> Optional[EigenvalueRecord]:
    """Refine the root closest to one seed inside its window.

    Returns:
        Labelled record, or None when w has no sign change in the window
    """
    pad = settings.window_pad if window_pad is None else window_pad
    gap = seed_spacing(problem, seed.branch)
    lo, hi = max(0.0, seed.mu - pad * gap), seed.mu + pad * gap
    nodes = _mu_grid(lo, hi, _scan_step(problem, settings)) ** 2
    brackets = scan_nodes(problem, nodes, settings).brackets
    if not brackets:
        return None
    records = [refine(problem, b, settings) for b in brackets]
    best = min(records, key=lambda r: abs(math.sqrt(max(r.lam, 0.0)) - seed.mu))
    return replace(best, n=seed.n, branch=seed.branch, seed_mu=seed.mu)


def sample_solution(solution: FundamentalSolution, grid: int = 201) -> SampledEigenfunction:
    """Raw samples of a fundamental solution on both pieces."""
    x_left, y_left, dy_left, x_right, y_right, dy_right = _sample_pieces(solution, grid)
    return SampledEigenfunction(solution.lam, x_left, y_left, dy_left, x_right, y_right, dy_right, 1.0)


def eigenfunction(problem: ValidatedProblem, record: EigenvalueRecord, grid: int = 201,
                  settings: SolverSettings = DEFAULT_SETTINGS) -> SampledEigenfunction:
    """phi at a refined eigenvalue, max-abs normalized, first nonzero sample positive.

    Both one-sided values at c are kept: the last left sample and the
    first right sample.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    raw = sample_solution(build_phi(problem, record.lam, settings=settings), grid)
    values = np.concatenate([raw.y_left, raw.y_right])
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        logger.warning("eigenfunction at lambda=%g vanishes identically", record.lam)
        return raw
    nonzero = np.flatnonzero(np.abs(values) > 1e-12 * peak)
    scale = peak if values[nonzero[0]] > 0 else -peak
    return SampledEigenfunction(
        lam=record.lam,
        x_left=raw.x_left,
        y_left=raw.y_left / scale,
        dy_left=raw.dy_left / scale,
        x_right=raw.x_right,
        y_right=raw.y_right / scale,
        dy_right=raw.dy_right / scale,
        scale=scale,
    )
