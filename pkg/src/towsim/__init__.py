"""Planar dynamics of a towed cable and sensor-array chain behind a manoeuvring ship."""

from .dynamics import Chain, assemble_accel_system, chain_kinematics, initial_state, rhs, trailing_angle
from .hydro import DragResult, LinkMotion, drag_forces
from .model import (BodyParams, ChainConfig, ChainState, ConfigError, FluidEnv, REFERENCE_ARRAY,
                    REFERENCE_CABLE, reference_chain, validate_config)
from .numerics import SingularMatrixError, gauss_legendre, rk4_step, solve_dense
from .scenario import load_reference_scenario, load_scenario, parse_scenario
from .shiptrack import KNOT, ShipTrajectory, Straight, Turn, build_trajectory, reference_trajectory
from .simulate import SimulationError, TrajectoryRecord, run_scenario, write_csv
from .statics import SteadyState, steady_state

__version__ = "0.1.0"

__all__ = [
    "BodyParams", "Chain", "ChainConfig", "ChainState", "ConfigError", "DragResult", "FluidEnv", "KNOT",
    "LinkMotion", "REFERENCE_ARRAY", "REFERENCE_CABLE", "ShipTrajectory", "SimulationError",
    "SingularMatrixError", "SteadyState", "Straight", "TrajectoryRecord", "Turn", "assemble_accel_system",
    "build_trajectory", "chain_kinematics", "drag_forces", "gauss_legendre", "initial_state",
    "load_reference_scenario", "load_scenario", "parse_scenario", "reference_chain", "reference_trajectory",
    "rhs", "rk4_step", "run_scenario", "solve_dense", "steady_state", "trailing_angle", "validate_config",
    "write_csv",
]
