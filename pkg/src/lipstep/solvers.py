"""Deterministic derivative-free minimizers on boxes.

``minimize_scalar`` does a coarse equispaced presample followed by a
golden-section refinement around the best sample.  ``minimize_box`` runs a
projected Nelder-Mead simplex from a fixed multistart schedule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

N_PRESAMPLE = 33
DEFAULT_TOL = 1e-5
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ObjectiveError(ArithmeticError):
    """The objective returned a non-finite value."""

    def __init__(self, argument, value):
        super().__init__(f"objective returned {value!r} at {argument!r}")
        self.argument = argument
        self.value = value


@dataclass(frozen=True)
class ScalarProblem:
    objective: Callable[[float], float]
    lo: float
    hi: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"lower bound {self.lo!r} exceeds upper bound {self.hi!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")


@dataclass(frozen=True)
class BoxProblem:
    objective: Callable[[np.ndarray], float]
    lo: Sequence[float]
    hi: Sequence[float]
    init: Sequence[float]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        lo, hi, init = (np.asarray(a, dtype=float) for a in (self.lo, self.hi, self.init))
        if not (lo.shape == hi.shape == init.shape and lo.ndim == 1):
            raise ValueError("lo, hi and init must be 1-D with equal length")
        if np.any(lo > hi):
            raise ValueError("lower bounds exceed upper bounds")
        if np.any(init < lo) or np.any(init > hi):
            raise ValueError(f"init {init.tolist()} lies outside the box")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")


def _checked(f, arg):
    v = f(arg)
    if not math.isfinite(v):
        raise ObjectiveError(arg, v)
    return v


def _better(fa, a, fb, b):
    """True if (fa, a) beats (fb, b); ties go to the smaller argument."""
    return fa < fb or (fa == fb and a < b)


def golden_section(f, a: float, b: float, tol: float):
    """Shrink ``[a, b]`` around a minimum of the unimodal ``f``.

    Returns the best evaluated ``(argument, value)`` pair; stops once the
    bracket is no wider than ``tol``.
    """
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = _checked(f, c)
    fd = _checked(f, d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = _checked(f, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = _checked(f, d)
    return (c, fc) if fc <= fd else (d, fd)


def minimize_scalar(prob: ScalarProblem, n_presample: int = N_PRESAMPLE):
    """Minimize a scalar objective on ``[lo, hi]``.

    Returns ``(argmin, value)``.  Equal costs resolve to the smaller argument.
    """
    f, lo, hi = prob.objective, float(prob.lo), float(prob.hi)
    if hi == lo:
        return lo, _checked(f, lo)

    grid = np.linspace(lo, hi, n_presample)
    vals = [_checked(f, float(t)) for t in grid]
    i = int(np.argmin(vals))
    best_t, best_v = float(grid[i]), vals[i]

    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, n_presample - 1)])
    t, v = golden_section(f, a, b, prob.tol)
    if _better(v, t, best_v, best_t):
        best_t, best_v = t, v
    return best_t, best_v


def nelder_mead(f, x0, lo, hi, xtol=DEFAULT_TOL, ftol=1e-13, max_iter=5000, step=0.1):
    """Projected Nelder-Mead: every trial point is clipped into ``[lo, hi]``.

    Works on plain tuples of floats; ``f`` receives a tuple.  Stops when the
    simplex fits in a cube of half-width ``xtol`` and the vertex values agree
    to ``ftol`` (relative to ``max(1, |f|)``).  Returns ``(x, fx, n_evals)``.
    """
    n = len(x0)
    bounds = [(float(a), float(b)) for a, b in zip(lo, hi)]

    def clip(y):
        return tuple([a if v < a else b if v > b else v for v, (a, b) in zip(y, bounds)])

    first = clip(x0)
    simplex = [(_checked(f, first), first)]
    for k, (a, b) in enumerate(bounds):
        h = step * (b - a)
        y = list(first)
        y[k] = y[k] + h if y[k] + h <= b else y[k] - h
        y = tuple(y)
        simplex.append((_checked(f, y), y))
    n_evals = n + 1
    inv_n = 1.0 / n

    for _ in range(max_iter):
        simplex.sort(key=_first)
        f0, best = simplex[0]
        fw, worst = simplex[-1]
        if fw - f0 <= ftol * max(1.0, abs(f0)):
            if max(abs(c - d) for _, y in simplex[1:] for c, d in zip(y, best)) <= xtol:
                break

        cen = [s * inv_n for s in map(sum, zip(*[y for _, y in simplex[:-1]]))]
        xr = clip([2.0 * c - w for c, w in zip(cen, worst)])
        fr = _checked(f, xr)
        n_evals += 1
        if fr < f0:
            xe = clip([3.0 * c - 2.0 * w for c, w in zip(cen, worst)])
            fe = _checked(f, xe)
            n_evals += 1
            simplex[-1] = (fe, xe) if fe < fr else (fr, xr)
            continue
        if fr < simplex[-2][0]:
            simplex[-1] = (fr, xr)
            continue
        toward = xr if fr < fw else worst
        xc = clip([0.5 * (c + t) for c, t in zip(cen, toward)])
        fc = _checked(f, xc)
        n_evals += 1
        if fc < min(fr, fw):
            simplex[-1] = (fc, xc)
            continue
        # shrink toward the best vertex
        for j in range(1, n + 1):
            y = clip([0.5 * (c + d) for c, d in zip(best, simplex[j][1])])
            simplex[j] = (_checked(f, y), y)
        n_evals += n

    fx, x = min(simplex, key=_first)
    return x, fx, n_evals


def _first(item):
    return item[0]


def restart_schedule(init, lo, hi):
    """``init`` followed by the midpoints between ``init`` and every box corner."""
    starts = [init]
    for corner in itertools.product(*zip(lo, hi)):
        starts.append(0.5 * (init + np.asarray(corner, dtype=float)))
    return starts


def minimize_box(prob: BoxProblem, max_polish: int = 3):
    """Minimize over a box from the fixed multistart schedule.

    Projected Nelder-Mead runs from every start of :func:`restart_schedule`;
    the best result is then re-seeded with a small fresh simplex until its
    value stops improving (at most ``max_polish`` times), which undoes
    simplex collapse on active bounds.  Returns ``(argmin, value)``.
    """
    lo = np.asarray(prob.lo, dtype=float)
    hi = np.asarray(prob.hi, dtype=float)
    init = np.asarray(prob.init, dtype=float)
    f = prob.objective

    best_x = tuple(init.tolist())
    best_v = _checked(f, best_x)
    for x0 in restart_schedule(init, lo, hi):
        x, v, _ = nelder_mead(f, x0.tolist(), lo, hi, xtol=prob.tol)
        if v < best_v:
            best_x, best_v = x, v
    for _ in range(max_polish):
        x, v, _ = nelder_mead(f, best_x, lo, hi, xtol=prob.tol, step=0.01)
        if not v < best_v:
            break
        best_x, best_v = x, v
    return np.clip(np.array(best_x), lo, hi), best_v
