"""Parameter scans over the discretised CoM state plane.

A scan solves both optimizers at every grid state.  The results feed the
cost comparison between the two approaches, the search for critical states
(cells where the optimal walking parameters jump between neighbours) and
the solve-time benchmark.
"""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .lip import ComState, GaitTarget, LipParams, critical_offset
from .optimizers import (
    CostWeights,
    OptimizationOutcome,
    StepBounds,
    holistic_optimize,
    sequential_optimize,
)

APPROACH_CHOICES = ("both", "holistic", "sequential")


@dataclass(frozen=True)
class GridSpec:
    x_lo: float = -0.4
    x_hi: float = 0.4
    x_step: float = 0.01
    v_lo: float = -2.0
    v_hi: float = 2.0
    v_step: float = 0.05

    def __post_init__(self):
        for lo, hi, st, name in ((self.x_lo, self.x_hi, self.x_step, "x"),
                                 (self.v_lo, self.v_hi, self.v_step, "v")):
            if not lo < hi:
                raise ValueError(f"{name}_lo must be below {name}_hi")
            if not st > 0:
                raise ValueError(f"{name}_step must be positive")
        if self._count(self.v_lo, self.v_hi, self.v_step) * self._count(self.x_lo, self.x_hi, self.x_step) > 10 ** 7:
            raise ValueError("grid exceeds 1e7 cells")

    @classmethod
    def single(cls, x: float, xd: float):
        """A 1x1 grid at one state."""
        return cls(x, x + 1.0, 2.0, xd, xd + 1.0, 2.0)

    @staticmethod
    def _count(lo, hi, step):
        return int(math.floor((hi - lo) / step + 1e-9)) + 1

    @classmethod
    def _axis(cls, lo, hi, step):
        n = cls._count(lo, hi, step)
        # rounding keeps nominal values such as 0.03 exact-looking in the output
        return np.round(lo + step * np.arange(n), 12)

    @property
    def xs(self) -> np.ndarray:
        return self._axis(self.x_lo, self.x_hi, self.x_step)

    @property
    def vs(self) -> np.ndarray:
        return self._axis(self.v_lo, self.v_hi, self.v_step)

    @property
    def shape(self):
        """``(n_v, n_x)``: rows follow velocity, columns follow position."""
        return len(self.vs), len(self.xs)

    def states(self) -> List[ComState]:
        """Row-major with ``x`` varying fastest."""
        return [ComState(float(x), float(v)) for v in self.vs for x in self.xs]


@dataclass(frozen=True)
class ProblemConfig:
    lip: LipParams = field(default_factory=LipParams)
    target: GaitTarget = field(default_factory=GaitTarget)
    bounds: StepBounds = field(default_factory=StepBounds)
    weights: CostWeights = field(default_factory=CostWeights)
    # time already spent in the current step; None means T_min, i.e. an
    # immediate step is allowed
    T_elap: Optional[float] = None

    @property
    def elapsed(self) -> float:
        return self.bounds.T_min if self.T_elap is None else self.T_elap

    def solve(self, approach: str, s) -> OptimizationOutcome:
        fn = holistic_optimize if approach == "holistic" else sequential_optimize
        return fn(s, self.target, self.bounds, self.weights, self.lip, self.elapsed)


@dataclass
class ScanCell:
    state: ComState
    outcome_h: Optional[OptimizationOutcome] = None
    outcome_s: Optional[OptimizationOutcome] = None
    error: Optional[str] = None

    @property
    def cost_diff(self) -> float:
        """Sequential minus holistic combined cost (NaN if either is missing)."""
        if self.outcome_h is None or self.outcome_s is None:
            return math.nan
        return self.outcome_s.cost - self.outcome_h.cost


def _solve_cell(args):
    s, cfg, approach = args
    cell = ScanCell(s)
    try:
        if approach in ("both", "holistic"):
            cell.outcome_h = cfg.solve("holistic", s)
        if approach in ("both", "sequential"):
            cell.outcome_s = cfg.solve("sequential", s)
    except (ValueError, ArithmeticError) as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def scan_grid(gs: GridSpec, cfg: ProblemConfig = ProblemConfig(), approach: str = "both",
              jobs: int = 1) -> List[ScanCell]:
    """Solve the requested approaches at every grid state.

    Cells come back row-major (``x`` fastest) regardless of ``jobs``.
    Failing solves are recorded on the cell and do not stop the scan.
    """
    if approach not in APPROACH_CHOICES:
        raise ValueError(f"approach must be one of {APPROACH_CHOICES}, got {approach!r}")
    work = [(s, cfg, approach) for s in gs.states()]
    if jobs <= 1:
        return [_solve_cell(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_solve_cell, work, chunksize=max(1, len(work) // (8 * jobs))))


@dataclass
class CostComparison:
    diffs: np.ndarray  # per cell, NaN where unsolved
    threshold: float
    n_above: int
    fraction_above: float
    min_diff: float
    max_diff: float
    worst: list  # [(x, xd, diff)], largest diffs first


def compare_costs(cells: Sequence[ScanCell], threshold: float = 1e-6, n_worst: int = 10) -> CostComparison:
    if not cells:
        raise ValueError("empty scan")
    diffs = np.array([c.cost_diff for c in cells])
    ok = np.isfinite(diffs)
    n_ok = int(ok.sum())
    n_above = int((diffs[ok] > threshold).sum())
    order = [i for i in np.argsort(-np.where(ok, diffs, -np.inf), kind="stable")[:n_worst] if ok[i]]
    worst = [(cells[i].state.x, cells[i].state.xd, float(diffs[i])) for i in order]
    return CostComparison(
        diffs=diffs,
        threshold=threshold,
        n_above=n_above,
        fraction_above=n_above / n_ok if n_ok else math.nan,
        min_diff=float(np.min(diffs[ok])) if n_ok else math.nan,
        max_diff=float(np.max(diffs[ok])) if n_ok else math.nan,
        worst=worst,
    )


@dataclass
class CriticalRidge:
    """Cells whose optimal parameters jump against a 4-neighbour.

    ``kinds`` tells the two mechanisms apart: ``"bound"`` when the placement
    of the cell or of a neighbour it jumps against sits on the step-length
    limit, ``"energy"`` otherwise.
    """

    cells: list = field(default_factory=list)  # (row, col) grid coordinates
    states: list = field(default_factory=list)
    analytic_offsets: list = field(default_factory=list)
    kinds: list = field(default_factory=list)

    def subset(self, kind: str) -> "CriticalRidge":
        keep = [i for i, k in enumerate(self.kinds) if k == kind]
        return CriticalRidge(*([getattr(self, a)[i] for i in keep]
                               for a in ("cells", "states", "analytic_offsets", "kinds")))


DEFAULT_JUMPS = (0.5, 0.5, 0.1)


def detect_critical(cells: Sequence[ScanCell], shape, lip: LipParams, L_max: float,
                    thresholds=DEFAULT_JUMPS, source: str = "holistic",
                    sat_tol: float = 1e-6) -> CriticalRidge:
    """Flag grid cells where ``|dT_s0|``, ``|dT_s1|`` or ``|dp|`` against a
    4-neighbour exceeds the matching threshold.

    ``shape`` is ``(rows, cols)`` of the row-major cell list; ``source``
    picks which approach's parameters are compared.
    """
    rows, cols = shape
    if rows * cols != len(cells):
        raise ValueError("shape does not match the number of cells")
    if rows < 2 or cols < 2:
        raise ValueError("critical-state detection needs at least a 2x2 grid")
    attr = "outcome_h" if source == "holistic" else "outcome_s"
    params = np.full((rows, cols, 3), np.nan)
    for k, c in enumerate(cells):
        out = getattr(c, attr)
        if out is not None:
            params[k // cols, k % cols] = out.params
    thr = np.asarray(thresholds, dtype=float)
    saturated = np.abs(np.abs(params[..., 2]) - L_max) <= sat_tol

    flagged = np.zeros((rows, cols), dtype=bool)
    bound = np.zeros((rows, cols), dtype=bool)
    for di, dj in ((0, 1), (1, 0)):
        a = params[: rows - di, : cols - dj]
        b = params[di:, dj:]
        jump = np.any(np.abs(a - b) > thr, axis=-1)
        sat = saturated[: rows - di, : cols - dj] | saturated[di:, dj:]
        for sl in ((slice(0, rows - di), slice(0, cols - dj)), (slice(di, rows), slice(dj, cols))):
            flagged[sl] |= jump
            bound[sl] |= jump & sat

    ridge = CriticalRidge()
    for i, j in zip(*np.nonzero(flagged)):
        s = cells[i * cols + j].state
        ridge.cells.append((int(i), int(j)))
        ridge.states.append(s)
        ridge.analytic_offsets.append(critical_offset(s, lip))
        ridge.kinds.append("bound" if bound[i, j] else "energy")
    return ridge


@dataclass
class TimingStats:
    mean: float
    median: float
    p95: float
    n: int

    @classmethod
    def from_samples(cls, xs):
        xs = list(xs)
        return cls(statistics.fmean(xs), statistics.median(xs), float(np.percentile(xs, 95)), len(xs))


def benchmark(states: Sequence, cfg: ProblemConfig = ProblemConfig(), repetitions: int = 1,
              T_elaps: Optional[Sequence[float]] = None):
    """Wall-clock solve times per approach over the same state list.

    ``T_elaps`` optionally gives the elapsed step time for each state (as
    recorded along a simulated trajectory); otherwise the config value is
    used.  Returns ``{"holistic": TimingStats, "sequential": TimingStats,
    "ratio": mean_holistic / mean_sequential}``.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if not states:
        raise ValueError("no states to benchmark")
    if T_elaps is None:
        T_elaps = [cfg.elapsed] * len(states)
    result = {}
    for name, fn in (("holistic", holistic_optimize), ("sequential", sequential_optimize)):
        times = []
        for _ in range(repetitions):
            for s, te in zip(states, T_elaps):
                t0 = time.perf_counter()
                fn(s, cfg.target, cfg.bounds, cfg.weights, cfg.lip, te)
                times.append(time.perf_counter() - t0)
        result[name] = TimingStats.from_samples(times)
    result["ratio"] = result["holistic"].mean / result["sequential"].mean
    return result
