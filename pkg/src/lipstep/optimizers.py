"""Step-timing and foot-placement optimizers.

Both optimizers choose ``(T_s0, T_s1, p)``: the remaining duration of the
current step, the duration of the next step and the next foot position
relative to the CoM.  The holistic optimizer searches all three jointly.
The sequential optimizer first picks ``T_s0`` alone, then searches ``T_s1``
with ``p`` given in closed form by weighted least squares and clipped to
the step-length limit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .lip import ComState, GaitTarget, LipParams, desired_final_state, propagate, next_step_end
from .solvers import DEFAULT_TOL, BoxProblem, ScalarProblem, minimize_box, minimize_scalar

# coarse (T_s0, T_s1) grid used to seed the holistic search
HOLISTIC_SEED_GRID = (41, 29)
HOLISTIC_SEED_ZOOMS = 2


@dataclass(frozen=True)
class StepBounds:
    T_min: float = 0.6
    T_max: float = 2.0
    L_max: float = 0.5

    def __post_init__(self):
        if not 0 < self.T_min <= self.T_max:
            raise ValueError(f"need 0 < T_min <= T_max, got T_min={self.T_min!r}, T_max={self.T_max!r}")
        if not self.L_max > 0:
            raise ValueError(f"L_max must be positive, got {self.L_max!r}")

    @classmethod
    def from_friction_cone(cls, theta_m: float, z_c: float, T_min: float = 0.6, T_max: float = 2.0):
        """Step-length limit from the friction-cone half angle (rad) and CoM height."""
        return cls(T_min=T_min, T_max=T_max, L_max=z_c * math.tan(theta_m))

    def t0_lower(self, T_elap: float) -> float:
        return max(self.T_min - T_elap, 0.0)


def _diag(d):
    d = tuple(float(v) for v in d)
    if len(d) != 2:
        raise ValueError(f"expected two diagonal entries, got {d!r}")
    return d


@dataclass(frozen=True)
class CostWeights:
    """Diagonals of the step-end weights ``W1``, ``W2`` and the placement weight ``Q``."""

    W1: tuple = (1.0, 1.0)
    W2: tuple = (1.0, 1.0)
    Q: tuple = (1.0, 1.0)

    def __post_init__(self):
        for name in ("W1", "W2", "Q"):
            object.__setattr__(self, name, _diag(getattr(self, name)))
        for name in ("W1", "W2"):
            w = getattr(self, name)
            if min(w) < 0 or max(w) <= 0:
                raise ValueError(f"{name} entries must be >= 0 with one positive, got {w!r}")
        if min(self.Q) <= 0:
            raise ValueError(f"Q entries must be positive, got {self.Q!r}")

    @classmethod
    def uniform(cls, pos: float = 1.0, vel: float = 1.0):
        """Same diagonal for ``W1``, ``W2`` and ``Q``."""
        d = (pos, vel)
        return cls(W1=d, W2=d, Q=d)


class WalkingParams(NamedTuple):
    T_s0: float
    T_s1: float
    p: float


@dataclass(frozen=True)
class OptimizationOutcome:
    params: WalkingParams
    cost: float
    x1_pred: ComState
    x2_pred: ComState
    solve_time: float = field(default=0.0, compare=False)


def _wnorm2(err_x, err_v, w):
    return w[0] * err_x * err_x + w[1] * err_v * err_v


def predict_step_end(s0, T_s0: float, p: LipParams) -> ComState:
    return propagate(s0, T_s0, p)


def step_costs(s0, v, tgt: GaitTarget, w: CostWeights, p: LipParams):
    """Return ``(cost_current, cost_next, x1, x2)`` for walking parameters ``v``."""
    T_s0, T_s1, place = v
    xd = desired_final_state(tgt, p)
    x1 = propagate(s0, T_s0, p)
    x2 = next_step_end(x1.xd, place, T_s1, p)
    c1 = _wnorm2(x1.x - xd.x, x1.xd - xd.xd, w.W1)
    c2 = _wnorm2(x2.x - xd.x, x2.xd - xd.xd, w.W2)
    return c1, c2, x1, x2


def combined_cost(s0, v, tgt: GaitTarget, w: CostWeights, p: LipParams) -> float:
    c1, c2, _, _ = step_costs(s0, v, tgt, w, p)
    return c1 + c2


def _outcome(s0, v, tgt, w, p, solve_time):
    v = WalkingParams(*(float(a) for a in v))
    c1, c2, x1, x2 = step_costs(s0, v, tgt, w, p)
    return OptimizationOutcome(v, c1 + c2, x1, x2, solve_time)


def _holistic_objective(s0, xd, w, Tc):
    x0, v0 = s0
    (a1, b1), (a2, b2) = w.W1, w.W2
    gx, gv = xd
    cosh, sinh = math.cosh, math.sinh

    def f(v):
        T0, T1, place = v
        C0 = cosh(T0 / Tc)
        S0 = sinh(T0 / Tc)
        x1 = x0 * C0 + Tc * v0 * S0
        v1 = x0 / Tc * S0 + v0 * C0
        C1 = cosh(T1 / Tc)
        S1 = sinh(T1 / Tc)
        x2 = -C1 * place + Tc * S1 * v1
        v2 = -S1 / Tc * place + C1 * v1
        return (a1 * (x1 - gx) ** 2 + b1 * (v1 - gv) ** 2
                + a2 * (x2 - gx) ** 2 + b2 * (v2 - gv) ** 2)

    return f


def holistic_cost_grid(s0, T0, T1, P, xd, w: CostWeights, p: LipParams):
    """Vectorised combined cost over broadcastable arrays of ``T_s0``, ``T_s1`` and ``p``."""
    Tc = p.T_c
    x0, v0 = s0
    C0, S0 = np.cosh(T0 / Tc), np.sinh(T0 / Tc)
    x1 = x0 * C0 + Tc * v0 * S0
    v1 = x0 / Tc * S0 + v0 * C0
    C1, S1 = np.cosh(T1 / Tc), np.sinh(T1 / Tc)
    x2 = -C1 * P + Tc * S1 * v1
    v2 = -S1 / Tc * P + C1 * v1
    return (_wnorm2(x1 - xd[0], v1 - xd[1], w.W1)
            + _wnorm2(x2 - xd[0], v2 - xd[1], w.W2))


def _profiled_costs(s0, T0, T1, xd, w: CostWeights, Tc, p_lo, p_hi):
    """Combined cost on a (T_s0, T_s1) mesh with the best clipped placement at each node."""
    x0, v0 = s0
    C0, S0 = np.cosh(T0 / Tc), np.sinh(T0 / Tc)
    x1 = x0 * C0 + Tc * v0 * S0
    v1 = x0 / Tc * S0 + v0 * C0
    C1, S1 = np.cosh(T1 / Tc), np.sinh(T1 / Tc)
    A = (-C1, -S1 / Tc)
    r = (xd[0] - Tc * S1 * v1, xd[1] - C1 * v1)
    q = w.W2
    place = (q[0] * A[0] * r[0] + q[1] * A[1] * r[1]) / (q[0] * A[0] ** 2 + q[1] * A[1] ** 2)
    place = np.clip(place, p_lo, p_hi)
    cost = (_wnorm2(x1 - xd[0], v1 - xd[1], w.W1)
            + _wnorm2(r[0] - A[0] * place, r[1] - A[1] * place, w.W2))
    return cost, place


def holistic_seed(s0, lo, hi, xd, w: CostWeights, p: LipParams, shape=HOLISTIC_SEED_GRID,
                  zooms=HOLISTIC_SEED_ZOOMS):
    """Starting point for the holistic search.

    For fixed durations the cost is a convex quadratic in the placement, so
    the best feasible placement at each node of a duration grid is the
    ``W2``-weighted least-squares solution clipped to the bounds.  The
    coarse grid is then refined ``zooms`` times around its best node.  A
    plain 3-D grid misses the narrow placement valleys of long next steps.
    """
    n0, n1 = shape
    a0, b0, a1, b1 = lo[0], hi[0], lo[1], hi[1]
    for level in range(zooms + 1):
        T0 = np.linspace(a0, b0, n0)[:, None]
        T1 = np.linspace(a1, b1, n1)[None, :]
        cost, place = _profiled_costs(s0, T0, T1, xd, w, p.T_c, lo[2], hi[2])
        i, j = np.unravel_index(int(np.argmin(cost)), cost.shape)
        best = np.array([T0[i, 0], T1[0, j], place[i, j]])
        h0 = (b0 - a0) / (n0 - 1)
        h1 = (b1 - a1) / (n1 - 1)
        a0, b0 = max(best[0] - h0, lo[0]), min(best[0] + h0, hi[0])
        a1, b1 = max(best[1] - h1, lo[1]), min(best[1] + h1, hi[1])
        n0 = n1 = 11
    return best


def holistic_box(b: StepBounds, T_elap: float):
    lo = np.array([b.t0_lower(T_elap), b.T_min, -b.L_max])
    hi = np.array([b.T_max, b.T_max, b.L_max])
    return lo, hi


def _check_inputs(s0, T_elap):
    if not all(math.isfinite(c) for c in s0):
        raise ValueError(f"state must be finite, got {tuple(s0)!r}")
    if not T_elap >= 0:
        raise ValueError(f"T_elap must be non-negative, got {T_elap!r}")


def holistic_optimize(s0, tgt: GaitTarget, b: StepBounds, w: CostWeights, p: LipParams,
                      T_elap: float = 0.0, tol: float = DEFAULT_TOL) -> OptimizationOutcome:
    """Jointly optimize ``(T_s0, T_s1, p)`` over the step-bound box.

    The simplex search starts from the best point of a coarse grid over the
    box, then follows the multistart schedule of :func:`minimize_box`.
    """
    _check_inputs(s0, T_elap)
    t_start = time.perf_counter()
    xd = desired_final_state(tgt, p)
    lo, hi = holistic_box(b, T_elap)

    init = holistic_seed(s0, lo, hi, xd, w, p)
    f = _holistic_objective(tuple(s0), xd, w, p.T_c)
    v, _ = minimize_box(BoxProblem(f, lo, hi, init, tol))
    elapsed = time.perf_counter() - t_start
    return _outcome(s0, v, tgt, w, p, elapsed)


def _stage1_objective(s0, xd, W, Tc):
    x0, v0 = s0
    gx, gv = xd
    a, c = W

    def f(T0):
        C0 = math.cosh(T0 / Tc)
        S0 = math.sinh(T0 / Tc)
        ex = x0 * C0 + Tc * v0 * S0 - gx
        ev = x0 / Tc * S0 + v0 * C0 - gv
        return a * ex * ex + c * ev * ev

    return f


def stage1_duration(s0, tgt: GaitTarget, b: StepBounds, w: CostWeights, p: LipParams,
                    T_elap: float = 0.0, tol: float = DEFAULT_TOL):
    """Remaining current-step duration minimizing the ``W1``-weighted step-end error.

    Returns ``(T_s0, cost)``.
    """
    _check_inputs(s0, T_elap)
    xd = desired_final_state(tgt, p)
    f = _stage1_objective(tuple(s0), xd, w.W1, p.T_c)
    return minimize_scalar(ScalarProblem(f, b.t0_lower(T_elap), b.T_max, tol))


def _wls_terms(xd1, T_s1, xd, Tc):
    C1 = math.cosh(T_s1 / Tc)
    S1 = math.sinh(T_s1 / Tc)
    A = (-C1, -S1 / Tc)
    r = (xd[0] - Tc * S1 * xd1, xd[1] - C1 * xd1)
    return A, r


def _wls(A, r, q):
    return (q[0] * A[0] * r[0] + q[1] * A[1] * r[1]) / (q[0] * A[0] * A[0] + q[1] * A[1] * A[1])


def wls_placement(xd1: float, T_s1: float, tgt: GaitTarget, q: CostWeights, p: LipParams) -> float:
    """Unconstrained placement minimizing the ``Q``-weighted next-step-end error.

    With ``A = [-C1, -S1/T_c]`` and ``r = x_d - [T_c*S1, C1]*xd1`` this is
    ``(A'QA)^-1 A'Q r``; the denominator is positive since ``C1 >= 1``.
    """
    if not T_s1 > 0:
        raise ValueError(f"T_s1 must be positive, got {T_s1!r}")
    xd = desired_final_state(tgt, p)
    A, r = _wls_terms(xd1, T_s1, xd, p.T_c)
    return _wls(A, r, q.Q)


def clip_placement(p_ls: float, b: StepBounds) -> float:
    if p_ls <= -b.L_max:
        return -b.L_max
    if p_ls >= b.L_max:
        return b.L_max
    return p_ls


def _stage2_objective(xd1, xd, w: CostWeights, L_max, Tc):
    q, (a, c) = w.Q, w.W2

    def placement(T1):
        A, r = _wls_terms(xd1, T1, xd, Tc)
        return min(max(_wls(A, r, q), -L_max), L_max), A, r

    def f(T1):
        place, A, r = placement(T1)
        ex = r[0] - A[0] * place
        ev = r[1] - A[1] * place
        return a * ex * ex + c * ev * ev

    return f, placement


def stage2_step(xd1: float, tgt: GaitTarget, b: StepBounds, w: CostWeights, p: LipParams,
                tol: float = DEFAULT_TOL):
    """Next-step duration and clipped least-squares placement.

    Returns ``(T_s1, p_star, cost)`` where cost is the ``W2``-weighted
    next-step-end error.
    """
    xd = desired_final_state(tgt, p)
    f, placement = _stage2_objective(xd1, xd, w, b.L_max, p.T_c)
    T1, cost = minimize_scalar(ScalarProblem(f, b.T_min, b.T_max, tol))
    return T1, placement(T1)[0], cost


def sequential_optimize(s0, tgt: GaitTarget, b: StepBounds, w: CostWeights, p: LipParams,
                        T_elap: float = 0.0, tol: float = DEFAULT_TOL) -> OptimizationOutcome:
    """Two-stage optimization; the reported cost is the combined two-step cost."""
    t_start = time.perf_counter()
    T0, _ = stage1_duration(s0, tgt, b, w, p, T_elap, tol)
    x1 = predict_step_end(s0, T0, p)
    T1, place, _ = stage2_step(x1.xd, tgt, b, w, p, tol)
    elapsed = time.perf_counter() - t_start
    return _outcome(s0, (T0, T1, place), tgt, w, p, elapsed)


APPROACHES = {
    "holistic": holistic_optimize,
    "sequential": sequential_optimize,
}
