"""Push-recovery step timing and foot placement on the linear inverted pendulum."""

from .lip import (
    ComState,
    GaitTarget,
    LipParams,
    MotionClass,
    classify_motion,
    critical_offset,
    desired_final_state,
    make_params,
    next_step_end,
    orbital_energy,
    propagate,
)
from .optimizers import (
    CostWeights,
    OptimizationOutcome,
    StepBounds,
    WalkingParams,
    clip_placement,
    combined_cost,
    holistic_optimize,
    predict_step_end,
    sequential_optimize,
    stage1_duration,
    stage2_step,
    wls_placement,
)
from .scanner import GridSpec, ProblemConfig, benchmark, compare_costs, detect_critical, scan_grid
from .simulator import (
    Approach,
    FallLimits,
    PushEvent,
    Scenario,
    Trajectory,
    detect_fall,
    integrate_tick,
    run_simulation,
    settling_time,
)
from .solvers import BoxProblem, ObjectiveError, ScalarProblem, minimize_box, minimize_scalar

__version__ = "0.1.0"
