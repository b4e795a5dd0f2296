"""Closed-loop sagittal walking with push disturbances.

Every control period the configured optimizer is re-solved from the current
foot-local CoM state and the time already spent in the current step.  When
the returned remaining duration fits inside the control period the support
switch happens at that exact instant.  Between solves the CoM dynamics are
integrated with fixed-step RK4 so that pushes can be added as extra
acceleration.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

from .lip import ComState, GaitTarget, LipParams, desired_final_state, propagate
from .optimizers import APPROACHES, CostWeights, StepBounds, WalkingParams


class SimulationError(RuntimeError):
    def __init__(self, t, cause):
        super().__init__(f"optimizer failed at t={t:.6f} s: {cause}")
        self.t = t


class Approach(str, enum.Enum):
    HOLISTIC = "holistic"
    SEQUENTIAL = "sequential"


@dataclass(frozen=True)
class PushEvent:
    """Constant CoM acceleration (m/s^2) applied on ``[t_start, t_start + duration)``.

    Positive ``accel`` points along the nominal walking direction.
    """

    t_start: float
    duration: float
    accel: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"push duration must be positive, got {self.duration!r}")

    @property
    def t_stop(self):
        return self.t_start + self.duration


@dataclass(frozen=True)
class FallLimits:
    x_limit: float = 1.0
    v_limit: float = 5.0


@dataclass(frozen=True)
class Scenario:
    lip: LipParams = field(default_factory=LipParams)
    target: GaitTarget = field(default_factory=GaitTarget)
    bounds: StepBounds = field(default_factory=StepBounds)
    weights: CostWeights = field(default_factory=CostWeights)
    x0: Optional[ComState] = None  # None: start of a nominal step, [-x_d, xd_d]
    approach: Approach = Approach.SEQUENTIAL
    pushes: Sequence[PushEvent] = ()
    dt_control: float = 0.01
    dt_int: float = 0.001
    t_end: float = 10.0
    fall_limits: FallLimits = field(default_factory=FallLimits)

    def __post_init__(self):
        object.__setattr__(self, "approach", Approach(self.approach))
        object.__setattr__(self, "pushes", tuple(sorted(self.pushes, key=lambda e: e.t_start)))
        if not 0 < self.dt_int <= self.dt_control:
            raise ValueError("need 0 < dt_int <= dt_control")
        ratio = self.dt_control / self.dt_int
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError("dt_control must be an integer multiple of dt_int")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        for a, b in zip(self.pushes, self.pushes[1:]):
            if b.t_start < a.t_stop:
                raise ValueError(f"pushes overlap at t={b.t_start!r}")

    def initial_state(self) -> ComState:
        if self.x0 is not None:
            return ComState(*self.x0)
        xd = desired_final_state(self.target, self.lip)
        return ComState(-xd.x, xd.xd)

    def push_accel(self, t: float) -> float:
        for e in self.pushes:
            if e.t_start <= t < e.t_stop:
                return e.accel
        return 0.0


class TrajectorySample(NamedTuple):
    t: float
    x_world: float
    xd: float
    foot_world: float
    t_elap: float
    cmd: WalkingParams
    cost: float
    solve_time: float


class StepEvent(NamedTuple):
    t: float
    foot_world: float
    p: float


@dataclass
class Trajectory:
    samples: List[TrajectorySample] = field(default_factory=list)
    step_events: List[StepEvent] = field(default_factory=list)
    fell: bool = False
    fall_time: Optional[float] = None


def integrate_tick(s, a_ext: float, dt: float, p: LipParams) -> ComState:
    """One classical RK4 step of ``xdd = (g/z_c) x + a_ext``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    w2 = p.g / p.z_c
    x, v = s
    k1x, k1v = v, w2 * x + a_ext
    k2x, k2v = v + 0.5 * dt * k1v, w2 * (x + 0.5 * dt * k1x) + a_ext
    k3x, k3v = v + 0.5 * dt * k2v, w2 * (x + 0.5 * dt * k2x) + a_ext
    k4x, k4v = v + dt * k3v, w2 * (x + dt * k3x) + a_ext
    return ComState(x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
                    v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v))


def detect_fall(s, limits: FallLimits = FallLimits()) -> bool:
    return abs(s[0]) > limits.x_limit or abs(s[1]) > limits.v_limit


def _advance(s, t0, duration, sc: Scenario):
    """Integrate over ``duration`` in ``dt_int`` substeps (the last one may be shorter)."""
    n_full = int(math.floor(duration / sc.dt_int + 1e-9))
    for i in range(n_full):
        ts = t0 + i * sc.dt_int
        s = integrate_tick(s, sc.push_accel(ts + 0.5 * sc.dt_int), sc.dt_int, sc.lip)
    rest = duration - n_full * sc.dt_int
    if rest > 1e-12:
        ts = t0 + n_full * sc.dt_int
        s = integrate_tick(s, sc.push_accel(ts + 0.5 * rest), rest, sc.lip)
    return s


def run_simulation(sc: Scenario) -> Trajectory:
    solve = APPROACHES[sc.approach.value]
    traj = Trajectory()
    s = sc.initial_state()
    foot = 0.0
    t_elap = 0.0
    n_ticks = int(round(sc.t_end / sc.dt_control))

    for k in range(n_ticks):
        t = k * sc.dt_control
        if detect_fall(s, sc.fall_limits):
            traj.fell, traj.fall_time = True, t
            break
        t0 = time.perf_counter()
        try:
            out = solve(s, sc.target, sc.bounds, sc.weights, sc.lip, t_elap)
        except (ValueError, ArithmeticError) as exc:
            raise SimulationError(t, exc) from exc
        solve_time = time.perf_counter() - t0
        traj.samples.append(TrajectorySample(t, foot + s.x, s.xd, foot, t_elap,
                                             out.params, out.cost, solve_time))

        remaining = sc.dt_control
        cursor = t
        T_s0, _, place = out.params
        if T_s0 <= sc.dt_control:
            s = _advance(s, t, T_s0, sc)
            foot = foot + s.x + place
            s = ComState(-place, s.xd)
            cursor = t + T_s0
            traj.step_events.append(StepEvent(cursor, foot, place))
            remaining = sc.dt_control - T_s0
            t_elap = 0.0
        s = _advance(s, cursor, remaining, sc)
        t_elap += remaining
    else:
        if detect_fall(s, sc.fall_limits):
            traj.fell, traj.fall_time = True, n_ticks * sc.dt_control
    return traj


def nominal_velocity(t_elap: float, tgt: GaitTarget, p: LipParams) -> float:
    """CoM velocity of the unperturbed symmetric gait ``t_elap`` seconds into a step."""
    xd = desired_final_state(tgt, p)
    return propagate((-xd.x, xd.xd), min(t_elap, 10.0), p).xd


def settling_time(traj: Trajectory, sc: Scenario, band: float = 0.02, hold: float = 0.5):
    """First time after the last push from which the CoM velocity stays within
    ``band`` of the nominal gait velocity at the same step phase for ``hold`` seconds.

    Returns ``None`` when the velocity never settles.
    """
    t_after = max((e.t_stop for e in sc.pushes), default=0.0)
    start = None
    for smp in traj.samples:
        if smp.t < t_after:
            continue
        ok = abs(smp.xd - nominal_velocity(smp.t_elap, sc.target, sc.lip)) < band
        if not ok:
            start = None
            continue
        if start is None:
            start = smp.t
        if smp.t - start >= hold - 1e-9:
            return start
    return None
