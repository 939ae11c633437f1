"""
Hydrodynamic drag on one rigid link.

A point at distance ``r`` from the lead node P of a link with yaw ``θ`` and
yaw rate ``ω`` moves with

    V(r) = (ẋ_P - ω r sin θ,  ẏ_P + ω r cos θ)

whose normal and tangential components are

    X(r) = ẏ_P cos θ - ẋ_P sin θ + ω r,    T = ẋ_P cos θ + ẏ_P sin θ.

Normal drag per unit length, two laws:

- ``crossflow`` (default): ``-½ ρ C_n D X|X|`` along the link normal
  ``(-sin θ, cos θ)``; moment integrand about P is ``-½ ρ C_n D r X|X|``.
- ``velocity``: ``-½ ρ C_n D X² V/|V|``, i.e. along the full element
  velocity; moment integrand ``-½ ρ C_n D r X³/|V|``.

Tangential drag per unit length is ``-½ ρ C_t π D T² V/|V|`` and is not
counted in the moment about P. Its integral along the link has a closed
form (T is constant, X is linear in r), used in place of quadrature because
V/|V| turns sharply near the point where X = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import BodyParams, FluidEnv
from .numerics import Quadrature, gauss_legendre

DEFAULT_V_EPSILON = 1e-9

CROSSFLOW = 0
VELOCITY = 1
NORMAL_DRAG_LAWS = {"crossflow": CROSSFLOW, "velocity": VELOCITY}


def law_code(law: str) -> int:
    try:
        return NORMAL_DRAG_LAWS[law]
    except KeyError:
        raise ValueError(f"unknown normal drag law {law!r}; expected one of {sorted(NORMAL_DRAG_LAWS)}") from None


@dataclass(frozen=True)
class LinkMotion:
    theta: float
    theta_dot: float
    lead_vx: float
    lead_vy: float


@dataclass(frozen=True)
class DragResult:
    normal_x: float
    normal_y: float
    tangential_x: float
    tangential_y: float
    moment: float

    @property
    def normal(self) -> np.ndarray:
        return np.array([self.normal_x, self.normal_y])

    @property
    def tangential(self) -> np.ndarray:
        return np.array([self.tangential_x, self.tangential_y])

    @property
    def force(self) -> np.ndarray:
        return self.normal + self.tangential


@njit(cache=True)
def _velocity(theta, omega, vx, vy, r):
    ux = vx - omega * r * math.sin(theta)
    uy = vy + omega * r * math.cos(theta)
    return ux, uy, math.sqrt(ux * ux + uy * uy)


@njit(cache=True)
def _normal_density(theta, omega, vx, vy, r, kn, veps, law):
    ux, uy, speed = _velocity(theta, omega, vx, vy, r)
    if speed < veps:
        return 0.0, 0.0
    x_n = vy * math.cos(theta) - vx * math.sin(theta) + omega * r
    if law == CROSSFLOW:
        f = kn * x_n * abs(x_n)
        return f * math.sin(theta), -f * math.cos(theta)
    f = kn * x_n * x_n / speed
    return -f * ux, -f * uy


@njit(cache=True)
def _tangential_density(theta, omega, vx, vy, r, kt, veps):
    ux, uy, speed = _velocity(theta, omega, vx, vy, r)
    if speed < veps:
        return 0.0, 0.0
    x_t = vx * math.cos(theta) + vy * math.sin(theta)
    f = kt * x_t * x_t / speed
    return -f * ux, -f * uy


@njit(cache=True)
def _moment_density(theta, omega, vx, vy, r, kn, veps, law):
    ux, uy, speed = _velocity(theta, omega, vx, vy, r)
    if speed < veps:
        return 0.0
    x_n = vy * math.cos(theta) - vx * math.sin(theta) + omega * r
    if law == CROSSFLOW:
        return -kn * r * x_n * abs(x_n)
    return -kn * r * x_n * x_n * x_n / speed


@njit(cache=True)
def _accumulate(a, b, s, c, omega, vx, vy, x_n0, kn, veps, law, u, w, out):
    span = b - a
    for k in range(u.shape[0]):
        r = a + span * u[k]
        ux = vx - omega * r * s
        uy = vy + omega * r * c
        speed = math.sqrt(ux * ux + uy * uy)
        if speed < veps:
            continue
        wk = span * w[k]
        x_n = x_n0 + omega * r
        if law == CROSSFLOW:
            fn = kn * x_n * abs(x_n) * wk
            out[0] += fn * s
            out[1] -= fn * c
            out[4] -= fn * r
        else:
            fn = kn * x_n * x_n * wk / speed
            out[0] -= fn * ux
            out[1] -= fn * uy
            out[4] -= fn * r * x_n


@njit(cache=True)
def _tangential_total(s, c, omega, x_n0, x_t, length, kt, veps):
    """Exact ∫₀ˡ of the tangential density; returns (D_t,x, D_t,y)."""
    at = abs(x_t)
    if at < veps:
        return 0.0, 0.0
    x0 = x_n0
    x1 = x_n0 + omega * length
    v0 = math.sqrt(x_t * x_t + x0 * x0)
    v1 = math.sqrt(x_t * x_t + x1 * x1)
    # ∫ X/|V| dr = (|V1| - |V0|)/ω, rewritten without the 1/ω
    along_n = length * (x0 + x1) / (v0 + v1)
    # ∫ T/|V| dr = (T/ω)(asinh(X1/|T|) - asinh(X0/|T|))
    # a rate term this small changes nothing and would push asinh into subnormals
    if abs(omega) * length <= 1e-100 * at:
        along_t = length * x_t / v0
    else:
        a = x1 / at
        b = x0 / at
        if a * b > 0.0:
            ra = math.sqrt(1.0 + a * a)
            rb = math.sqrt(1.0 + b * b)
            diff = math.asinh((omega * length / at) * (a + b) / (a * rb + b * ra))
        else:
            diff = math.asinh(a) - math.asinh(b)
        along_t = x_t * diff / omega
    f = kt * x_t * x_t
    return -f * (along_t * c - along_n * s), -f * (along_t * s + along_n * c)


@njit(cache=True)
def link_drag(theta, omega, vx, vy, length, diameter, cdn, cdt, rho, veps, law, u, w):
    """
    Integrated drag on one link with the unit-interval rule ``(u, w)``.

    The normal-drag interval is split where the normal velocity changes
    sign, so each piece has a smooth integrand (a polynomial for the
    cross-flow law). Returns ``[Dn_x, Dn_y, Dt_x, Dt_y, M_d]``.
    """
    s = math.sin(theta)
    c = math.cos(theta)
    kn = 0.5 * rho * cdn * diameter
    kt = 0.5 * rho * cdt * math.pi * diameter
    x_t = vx * c + vy * s
    x_n0 = vy * c - vx * s
    out = np.zeros(5)
    out[2], out[3] = _tangential_total(s, c, omega, x_n0, x_t, length, kt, veps)
    split = length
    if omega != 0.0:
        root = -x_n0 / omega
        if 0.0 < root < length:
            split = root
    _accumulate(0.0, split, s, c, omega, vx, vy, x_n0, kn, veps, law, u, w, out)
    if split < length:
        _accumulate(split, length, s, c, omega, vx, vy, x_n0, kn, veps, law, u, w, out)
    return out


def _kn(body: BodyParams, fluid: FluidEnv) -> float:
    return 0.5 * fluid.density * body.drag_normal * body.diameter


def element_velocity(motion: LinkMotion, r: float) -> tuple[float, float, float]:
    """Velocity ``(V_x, V_y, |V|)`` of the point a distance ``r`` down the link."""
    return _velocity(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy, r)


def normal_drag_density(motion: LinkMotion, r: float, body: BodyParams, fluid: FluidEnv,
                        v_epsilon: float = DEFAULT_V_EPSILON, law: str = "crossflow") -> tuple[float, float]:
    """Normal drag force per unit length [N/m] at ``r``."""
    return _normal_density(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy, r,
                           _kn(body, fluid), v_epsilon, law_code(law))


def tangential_drag_density(motion: LinkMotion, r: float, body: BodyParams, fluid: FluidEnv,
                            v_epsilon: float = DEFAULT_V_EPSILON) -> tuple[float, float]:
    """Tangential drag force per unit length [N/m] at ``r``."""
    kt = 0.5 * fluid.density * body.drag_tangential * math.pi * body.diameter
    return _tangential_density(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy, r,
                               kt, v_epsilon)


def moment_density(motion: LinkMotion, r: float, body: BodyParams, fluid: FluidEnv,
                   v_epsilon: float = DEFAULT_V_EPSILON, law: str = "crossflow") -> float:
    """Normal-drag moment about the lead node per unit length [N m/m] at ``r``."""
    return _moment_density(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy, r,
                           _kn(body, fluid), v_epsilon, law_code(law))


def drag_forces(motion: LinkMotion, body: BodyParams, fluid: FluidEnv,
                quadrature: Quadrature | None = None,
                v_epsilon: float = DEFAULT_V_EPSILON, law: str = "crossflow") -> DragResult:
    """Normal and tangential drag on the whole link plus the drag moment about its lead node."""
    if quadrature is None:
        quadrature = gauss_legendre(5)
    u, w = quadrature.unit_rule()
    out = link_drag(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy,
                    body.length, body.diameter, body.drag_normal, body.drag_tangential,
                    fluid.density, v_epsilon, law_code(law), u, w)
    return DragResult(*out)


def drag_moment_about_lead(motion: LinkMotion, body: BodyParams, fluid: FluidEnv,
                           quadrature: Quadrature | None = None,
                           v_epsilon: float = DEFAULT_V_EPSILON, law: str = "crossflow") -> float:
    """Moment of the normal drag about the lead node [N m], positive counter-clockwise."""
    return drag_forces(motion, body, fluid, quadrature, v_epsilon, law).moment
