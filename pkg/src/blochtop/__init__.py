"""Rigid-body trajectories as two-level control pulses.

The free Euler top and the driven two-level system share the same
equation of motion: a unit vector precessing about a time dependent
axis.  This package builds control pulses from closed-form top
trajectories, propagates them on the Bloch sphere and in SU(2), and
turns closed orbits into quantum gates.
"""

from .elliptic import complete_E, complete_K, jacobi_sn_cn_dn
from .gates import (
    GateReport,
    NOT_SO3,
    NOT_SU2,
    PhaseBudget,
    PhaseGateDesign,
    SynthesisProgram,
    budget_defect,
    composite_bir_not,
    design_phase_gate,
    dynamical_phase,
    geometric_phase,
    montgomery_phase,
    synthesize_one_qubit,
    tune_not_gate,
    write_gate_report,
)
from .propagate import (
    AxisAnglePath,
    ErrorParams,
    PropagatorPath,
    Trajectory,
    adjoint_map,
    axis_angle_path,
    bloch_propagate,
    gate_fidelity,
    so3_final,
    so3_propagate,
    su2_final,
    su2_propagate,
    write_propagator_csv,
    write_trajectory_csv,
)
from .pulsegen import (
    ControlPulse,
    NMR_FRAME,
    allen_eberly_pulse,
    concat,
    inverse_pulse,
    nmr_frame,
    pulse_area,
    read_pulse_csv,
    rect_pi_pulse,
    rotate_pulse,
    transform_pulse,
    tre_loop_pulse,
    tre_pulse,
    write_pulse_csv,
)
from .robustness import (
    RobustnessMap,
    default_alpha_grid,
    default_delta_grid,
    fit_log_period,
    merit_J2,
    merit_J3,
    sweep,
    write_map_csv,
)
from .topdyn import (
    Family,
    OrbitConstants,
    TopParameters,
    TrajectoryClass,
    analytic_trajectory,
    classify,
    energy,
    euler_rhs,
    orbit_constants,
    orbit_period,
    separatrix_trajectory,
    transfer_period,
    tre_initial,
)

__version__ = "0.1.0"

__all__ = [
    "AxisAnglePath", "ControlPulse", "ErrorParams", "Family", "GateReport",
    "NMR_FRAME", "NOT_SO3", "NOT_SU2", "OrbitConstants", "PhaseBudget",
    "PhaseGateDesign", "PropagatorPath", "RobustnessMap", "SynthesisProgram",
    "TopParameters", "Trajectory", "TrajectoryClass", "adjoint_map",
    "allen_eberly_pulse", "analytic_trajectory", "axis_angle_path",
    "bloch_propagate", "budget_defect", "classify", "composite_bir_not",
    "concat", "default_alpha_grid", "default_delta_grid", "design_phase_gate",
    "complete_E", "complete_K", "dynamical_phase", "energy", "euler_rhs",
    "fit_log_period", "gate_fidelity", "geometric_phase", "inverse_pulse",
    "jacobi_sn_cn_dn", "merit_J2", "merit_J3", "montgomery_phase",
    "nmr_frame", "orbit_constants", "orbit_period", "pulse_area",
    "read_pulse_csv", "rect_pi_pulse", "rotate_pulse", "separatrix_trajectory",
    "so3_final", "so3_propagate", "su2_final", "su2_propagate", "sweep",
    "synthesize_one_qubit", "transfer_period", "transform_pulse",
    "tre_initial", "tre_loop_pulse", "tre_pulse", "tune_not_gate",
    "write_gate_report", "write_map_csv", "write_propagator_csv",
    "write_pulse_csv", "write_trajectory_csv",
]
