"""
Steady-state pitch of the towed system at constant speed.

The cable (all cable links lumped into one straight body) and the array
are each in force balance under weight, buoyancy, a horizontal drag and
the end tensions:

    array:  m₂g + B₂ = T₂ cos ψ₂,          F_d,2 = T₂ sin ψ₂
    cable:  m₁g + B₁ + T₂ cos ψ₂ = T₁ cos ψ₁,   F_d,1 + T₂ sin ψ₂ = T₁ sin ψ₁

with ψ measured from the vertical. Buoyancy B adds to weight by default,
as in the reference balance; ``buoyancy_opposes_weight`` subtracts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BodyParams, ChainConfig, FluidEnv, derive_body_props, validate_config

REFERENCE_PITCH_DEG = 5.64


@dataclass(frozen=True)
class BodyForces:
    drag: float
    weight: float
    buoyancy: float


@dataclass(frozen=True)
class SteadyState:
    speed: float
    psi_cable: float
    psi_array: float
    tension_tow: float
    tension_array: float
    cable: BodyForces
    array: BodyForces
    depth_estimate: float
    drag_model: str
    buoyancy_opposes_weight: bool

    @property
    def psi_cable_deg(self) -> float:
        return math.degrees(self.psi_cable)

    @property
    def psi_array_deg(self) -> float:
        return math.degrees(self.psi_array)


def steady_drag(body: BodyParams, fluid: FluidEnv, speed: float, model: str = "tangential") -> float:
    """
    Horizontal drag [N] on a body towed at ``speed``.

    ``tangential``: skin friction of an aligned cylinder, ½ρ C_t π D l V².
    ``normal``: cross-flow drag, ½ρ C_n D l V².
    """
    if speed < 0:
        raise ValueError("speed must be non-negative")
    q = 0.5 * fluid.density * speed * speed * body.length
    if model == "tangential":
        return q * body.drag_tangential * math.pi * body.diameter
    if model == "normal":
        return q * body.drag_normal * body.diameter
    raise ValueError(f"unknown steady drag model {model!r}")


def lumped_cable(cfg: ChainConfig) -> BodyParams:
    """The cable links merged back into one body (total length, mean mass per length)."""
    cable = cfg.cable
    length = sum(b.length for b in cable)
    mass = sum(b.length * b.linear_density for b in cable)
    first = cable[0]
    return BodyParams(length=length, diameter=first.diameter, linear_density=mass / length,
                      drag_normal=first.drag_normal, drag_tangential=first.drag_tangential)


def steady_state(cfg: ChainConfig, speed: float) -> SteadyState:
    validate_config(cfg)
    if cfg.n_links < 2:
        raise ValueError("steady state needs at least one cable link and the array")
    if speed < 0:
        raise ValueError("speed must be non-negative")
    sign = -1.0 if cfg.buoyancy_opposes_weight else 1.0
    forces = []
    for body in (lumped_cable(cfg), cfg.array):
        props = derive_body_props(body, cfg.fluid)
        forces.append(BodyForces(drag=steady_drag(body, cfg.fluid, speed, cfg.drag_model),
                                 weight=props.mass * cfg.fluid.gravity,
                                 buoyancy=props.buoyant_force))
    cable, array = forces

    vert_array = array.weight + sign * array.buoyancy
    vert_total = cable.weight + sign * cable.buoyancy + vert_array
    horiz_total = cable.drag + array.drag
    psi_array = math.atan2(array.drag, vert_array)
    psi_cable = math.atan2(horiz_total, vert_total)
    tension_array = math.hypot(vert_array, array.drag)
    tension_tow = math.hypot(vert_total, horiz_total)

    cable_length = sum(b.length for b in cfg.cable)
    depth = cable_length * math.cos(psi_cable) + cfg.array.length * math.cos(psi_array)
    return SteadyState(speed, psi_cable, psi_array, tension_tow, tension_array, cable, array,
                       depth, cfg.drag_model, cfg.buoyancy_opposes_weight)
