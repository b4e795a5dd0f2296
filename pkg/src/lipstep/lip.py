"""Linear inverted pendulum dynamics in the sagittal plane.

All states are expressed in the frame of the current stance foot: ``x`` is the
horizontal CoM position relative to the foot and ``xd`` its velocity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

#: longest duration accepted by the public propagation functions (s)
MAX_DURATION = 10.0
#: absolute tolerance on the critical offset for critical-line membership (m)
CRITICAL_TOL = 1e-12


class ComState(NamedTuple):
    """CoM position (m) and velocity (m/s) relative to the stance foot."""

    x: float
    xd: float


@dataclass(frozen=True)
class LipParams:
    """Physical constants of the pendulum.

    The time constant is always derived from ``z_c`` and ``g``.
    """

    z_c: float = 1.0
    g: float = 9.81

    def __post_init__(self):
        if not (self.z_c > 0 and math.isfinite(self.z_c)):
            raise ValueError(f"z_c must be positive and finite, got {self.z_c!r}")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise ValueError(f"g must be positive and finite, got {self.g!r}")

    @property
    def T_c(self) -> float:
        return math.sqrt(self.z_c / self.g)


@dataclass(frozen=True)
class GaitTarget:
    """Desired step duration ``T_sd`` (s) and step-end CoM velocity ``xd_d`` (m/s)."""

    T_sd: float = 0.8
    xd_d: float = 1.0

    def __post_init__(self):
        if not self.T_sd > 0:
            raise ValueError(f"T_sd must be positive, got {self.T_sd!r}")
        if not math.isfinite(self.xd_d):
            raise ValueError(f"xd_d must be finite, got {self.xd_d!r}")


class MotionClass(enum.Enum):
    PASSES_OVER = "passes_over"
    REVERSES = "reverses"
    CRITICAL_STOP = "critical_stop"


def make_params(z_c: float, g: float = 9.81) -> LipParams:
    return LipParams(z_c=z_c, g=g)


def _check_duration(t: float, name: str = "t") -> None:
    if not t >= 0:
        raise ValueError(f"{name} must be non-negative, got {t!r}")
    if t > MAX_DURATION:
        raise ValueError(f"{name}={t!r} exceeds the {MAX_DURATION} s cap")


def propagate(s0, t: float, p: LipParams) -> ComState:
    """Closed-form LIP flow from ``s0`` over ``t`` seconds."""
    _check_duration(t)
    Tc = p.T_c
    C = math.cosh(t / Tc)
    S = math.sinh(t / Tc)
    x0, v0 = s0
    return ComState(x0 * C + Tc * v0 * S, x0 / Tc * S + v0 * C)


def desired_final_state(tgt: GaitTarget, p: LipParams) -> ComState:
    """Step-end state of the symmetric gait with duration ``T_sd`` and end velocity ``xd_d``."""
    Tc = p.T_c
    r = tgt.T_sd / Tc
    # sinh/(1+cosh) == tanh(r/2), which stays finite for long durations
    return ComState(Tc * math.tanh(0.5 * r) * tgt.xd_d, tgt.xd_d)


def next_step_end(xd1: float, place: float, T_s1: float, p: LipParams) -> ComState:
    """State at the end of the next step, in the frame of the new stance foot.

    ``place`` is the new foot position relative to the CoM at touchdown, so the
    next step starts at ``[-place, xd1]``.
    """
    _check_duration(T_s1, "T_s1")
    Tc = p.T_c
    C1 = math.cosh(T_s1 / Tc)
    S1 = math.sinh(T_s1 / Tc)
    return ComState(-C1 * place + Tc * S1 * xd1, -S1 / Tc * place + C1 * xd1)


def orbital_energy(s, p: LipParams) -> float:
    x, xd = s
    return 0.5 * xd * xd - 0.5 * (p.g / p.z_c) * x * x


def critical_offset(s, p: LipParams) -> float:
    """Signed distance ``x + T_c*xd`` from the critical line (the capture-point offset).

    Positive values end up moving forward over the foot, negative values fall back.
    """
    x, xd = s
    return x + p.T_c * xd


def classify_motion(s, p: LipParams) -> MotionClass:
    """Long-run direction of the unforced LIP motion starting at ``s``.

    The divergent component ``x + T_c*xd`` decides the outcome: on the
    critical line the CoM comes to rest over the pivot, otherwise its sign
    tells whether the CoM eventually travels forward or falls back.
    """
    e = critical_offset(s, p)
    if abs(e) <= CRITICAL_TOL:
        return MotionClass.CRITICAL_STOP
    return MotionClass.PASSES_OVER if e > 0 else MotionClass.REVERSES
