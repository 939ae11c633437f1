"""
Domain types for the towed cable / sensor-array chain.

Model assumptions carried by every other module:

- the array is hinged to the end of the cable, the cable is a chain of
  rigid links joined by frictionless hinges;
- the ship drives the tow point and feels no reaction from the chain;
- still water, no waves or current;
- links do not stretch or bend;
- drag coefficients do not depend on angle of attack.

All quantities are SI and double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Sequence

import numpy as np

DRAG_MODELS = ("tangential", "normal")
NORMAL_DRAG_LAWS = ("crossflow", "velocity")


class ConfigError(ValueError):
    """Invalid configuration. ``errors`` holds one message per violation."""

    def __init__(self, errors: Sequence[str] | str):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class FluidEnv:
    density: float = 1000.0
    gravity: float = 9.81


@dataclass(frozen=True)
class BodyParams:
    """
    One rigid link: a cable segment or the sensor array.

    Attributes
    ----------
    length : float
        Link length [m].
    diameter : float
        Outer diameter [m].
    linear_density : float
        Mass per unit length [kg/m].
    drag_normal : float
        Normal (pressure) drag coefficient [-].
    drag_tangential : float
        Tangential (skin friction) drag coefficient [-].
    """

    length: float
    diameter: float
    linear_density: float
    drag_normal: float
    drag_tangential: float

    @property
    def mass(self) -> float:
        return self.linear_density * self.length


@dataclass(frozen=True)
class DerivedBodyProps:
    mass: float
    inertia_about_lead: float
    buoyant_force: float


@dataclass(frozen=True)
class ChainConfig:
    """
    Ordered links plus fluid and solver settings.

    Links ``0 .. n-2`` are cable segments, link ``n-1`` is the array.
    ``normal_drag_law`` selects the dynamic normal-drag model (see
    ``towsim.hydro``); ``drag_model`` and ``buoyancy_opposes_weight`` only
    affect the steady-state solver.
    """

    fluid: FluidEnv
    links: tuple[BodyParams, ...]
    dt: float = 0.1
    duration: float = 1800.0
    output_stride: int = 1
    v_epsilon: float = 1e-9
    quadrature_points: int = 5
    quadrature_panels: int = 1
    normal_drag_law: str = "crossflow"
    drag_model: str = "tangential"
    buoyancy_opposes_weight: bool = False

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def cable(self) -> tuple[BodyParams, ...]:
        return self.links[:-1]

    @property
    def array(self) -> BodyParams:
        return self.links[-1]

    def with_overrides(self, **changes) -> "ChainConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class ChainState:
    """Time plus per-link yaw [rad, CCW from +x] and yaw rate [rad/s]."""

    t: float
    theta: np.ndarray
    theta_dot: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        theta_dot = np.array(self.theta_dot, dtype=float)
        if theta.shape != theta_dot.shape or theta.ndim != 1:
            raise ValueError("theta and theta_dot must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(theta_dot)) and math.isfinite(self.t)):
            raise ValueError("non-finite chain state")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "theta_dot", theta_dot)

    @property
    def n_links(self) -> int:
        return self.theta.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.theta_dot])

    @classmethod
    def from_vector(cls, t: float, y: np.ndarray) -> "ChainState":
        n = len(y) // 2
        return cls(t, y[:n], y[n:])


def _body_errors(body: BodyParams, label: str) -> list[str]:
    errors = []
    for f in fields(body):
        value = getattr(body, f.name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            errors.append(f"{label}.{f.name} must be positive (got {value!r})")
    return errors


def derive_body_props(body: BodyParams, fluid: FluidEnv) -> DerivedBodyProps:
    """Mass, inertia about the leading hinge (uniform slender rod) and buoyancy."""
    errors = _body_errors(body, "body") + _fluid_errors(fluid)
    if errors:
        raise ConfigError(errors)
    m = body.linear_density * body.length
    inertia = m * body.length**2 / 3.0
    buoyancy = fluid.density * fluid.gravity * math.pi * body.diameter**2 * body.length / 4.0
    return DerivedBodyProps(mass=m, inertia_about_lead=inertia, buoyant_force=buoyancy)


def _fluid_errors(fluid: FluidEnv) -> list[str]:
    errors = []
    if not (math.isfinite(fluid.density) and fluid.density > 0):
        errors.append(f"fluid.density must be positive (got {fluid.density!r})")
    if not (math.isfinite(fluid.gravity) and fluid.gravity > 0):
        errors.append(f"fluid.gravity must be positive (got {fluid.gravity!r})")
    return errors


def config_errors(cfg: ChainConfig) -> list[str]:
    """Every invariant violation in ``cfg``; empty when valid."""
    errors = _fluid_errors(cfg.fluid)
    if len(cfg.links) == 0:
        errors.append("at least one link required")
    for i, body in enumerate(cfg.links):
        errors.extend(_body_errors(body, f"links[{i}]"))
    if not (math.isfinite(cfg.dt) and cfg.dt > 0):
        errors.append("dt must be positive")
    if not (math.isfinite(cfg.duration) and cfg.duration > 0):
        errors.append("duration must be positive")
    if not (isinstance(cfg.output_stride, int) and cfg.output_stride >= 1):
        errors.append("output_stride must be an integer >= 1")
    if not (math.isfinite(cfg.v_epsilon) and cfg.v_epsilon > 0):
        errors.append("v_epsilon must be positive")
    if not (isinstance(cfg.quadrature_points, int) and cfg.quadrature_points >= 2):
        errors.append("quadrature_points must be an integer >= 2")
    if not (isinstance(cfg.quadrature_panels, int) and cfg.quadrature_panels >= 1):
        errors.append("quadrature_panels must be an integer >= 1")
    if cfg.normal_drag_law not in NORMAL_DRAG_LAWS:
        errors.append(f"normal_drag_law must be one of {', '.join(NORMAL_DRAG_LAWS)} (got {cfg.normal_drag_law!r})")
    if cfg.drag_model not in DRAG_MODELS:
        errors.append(f"drag_model must be one of {', '.join(DRAG_MODELS)} (got {cfg.drag_model!r})")
    return errors


def validate_config(cfg: ChainConfig) -> ChainConfig:
    """Return ``cfg`` unchanged if valid, otherwise raise ConfigError listing all violations."""
    errors = config_errors(cfg)
    if errors:
        raise ConfigError(errors)
    return cfg


def split_cable(cable: BodyParams, segments: int) -> list[BodyParams]:
    """Split a cable into ``segments`` equal links sharing diameter and coefficients."""
    if segments < 1:
        raise ConfigError("cable.segments must be >= 1")
    return [replace(cable, length=cable.length / segments) for _ in range(segments)]


# reference cable and array
REFERENCE_CABLE = BodyParams(length=723.0, diameter=0.041, linear_density=2.33,
                         drag_normal=2.0, drag_tangential=0.015)
REFERENCE_ARRAY = BodyParams(length=273.9, diameter=0.079, linear_density=5.07,
                         drag_normal=1.8, drag_tangential=0.009)


def reference_chain(segments: int = 2, **settings) -> ChainConfig:
    """Default chain: the reference cable split into ``segments`` links plus the array."""
    links = split_cable(REFERENCE_CABLE, segments) + [REFERENCE_ARRAY]
    return ChainConfig(fluid=FluidEnv(), links=tuple(links), **settings)
