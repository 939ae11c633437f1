"""
Equations of motion of the hinged chain.

Link ``i`` has lead node P_i (P_0 is the tow point A) and rotates about it.
Its moment balance about P_i reads

    M_d,i + l_i (cos θ_i R_y,i - sin θ_i R_x,i)
        = I_i θ̈_i + (m_i l_i / 2)(ÿ_P cos θ_i - ẍ_P sin θ_i)

where R_i, the hinge force the downstream links exert at the tail of link
``i``, is ``-Σ_{j>i} (m_j a_G,j - D_j)``. Node and centre-of-gravity
accelerations are affine in the angular accelerations through the
kinematic chain, so the n balances form one linear system ``M θ̈ = b``.

Gravity and buoyancy act out of the yaw plane and do not appear here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .hydro import DragResult, law_code, link_drag
from .model import ChainConfig, ChainState, derive_body_props
from .numerics import SingularMatrixError, _gauss_solve, gauss_legendre, solve_dense
from .shiptrack import TowPointKinematics

TowFunction = Callable[[float], TowPointKinematics]


@dataclass(frozen=True)
class NodeKinematics:
    x: float
    y: float
    vx: float
    vy: float
    ax: float = math.nan
    ay: float = math.nan

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.vx, self.vy])

    @property
    def acceleration(self) -> np.ndarray:
        return np.array([self.ax, self.ay])


@dataclass(frozen=True)
class LinkKinematics:
    lead: NodeKinematics
    cg: NodeKinematics
    tail: NodeKinematics


@dataclass(frozen=True)
class ChainKinematics:
    links: tuple[LinkKinematics, ...]
    has_acceleration: bool


@dataclass(frozen=True)
class AccelSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    drags: tuple[DragResult, ...]


@dataclass(frozen=True)
class Chain:
    """Per-link arrays prepared once from a ChainConfig for the hot loop."""

    length: np.ndarray
    mass: np.ndarray
    inertia: np.ndarray
    diameter: np.ndarray
    cdn: np.ndarray
    cdt: np.ndarray
    rho: float
    v_epsilon: float
    law: int
    u: np.ndarray
    w: np.ndarray

    @classmethod
    def from_config(cls, cfg: ChainConfig) -> "Chain":
        props = [derive_body_props(b, cfg.fluid) for b in cfg.links]
        u, w = gauss_legendre(cfg.quadrature_points, cfg.quadrature_panels).unit_rule()
        return cls(
            length=np.array([b.length for b in cfg.links]),
            mass=np.array([p.mass for p in props]),
            inertia=np.array([p.inertia_about_lead for p in props]),
            diameter=np.array([b.diameter for b in cfg.links]),
            cdn=np.array([b.drag_normal for b in cfg.links]),
            cdt=np.array([b.drag_tangential for b in cfg.links]),
            rho=cfg.fluid.density,
            v_epsilon=cfg.v_epsilon,
            law=law_code(cfg.normal_drag_law),
            u=u,
            w=w,
        )

    @property
    def n_links(self) -> int:
        return self.length.size

    def kernel_args(self) -> tuple:
        return (self.length, self.mass, self.inertia, self.diameter, self.cdn, self.cdt,
                self.rho, self.v_epsilon, self.law, self.u, self.w)


@njit(cache=True)
def _assemble(theta, omega, tvx, tvy, tax, tay,
              length, mass, inertia, diameter, cdn, cdt, rho, veps, law, u, w):
    n = theta.shape[0]
    s = np.sin(theta)
    c = np.cos(theta)

    # lead-node velocities down the chain
    vx = np.empty(n)
    vy = np.empty(n)
    vx[0] = tvx
    vy[0] = tvy
    for i in range(n - 1):
        vx[i + 1] = vx[i] - length[i] * omega[i] * s[i]
        vy[i + 1] = vy[i] + length[i] * omega[i] * c[i]

    drags = np.empty((n, 5))
    for i in range(n):
        drags[i, :] = link_drag(theta[i], omega[i], vx[i], vy[i], length[i], diameter[i],
                                cdn[i], cdt[i], rho, veps, law, u, w)

    # accelerations as a0 + A @ θ̈ for each lead node (P) and CG (G)
    a0p = np.empty((n, 2))
    ap = np.zeros((n, 2, n))
    a0g = np.empty((n, 2))
    ag = np.zeros((n, 2, n))
    a0p[0, 0] = tax
    a0p[0, 1] = tay
    for i in range(n):
        if i > 0:
            k = i - 1
            a0p[i, 0] = a0p[k, 0] - length[k] * omega[k] ** 2 * c[k]
            a0p[i, 1] = a0p[k, 1] - length[k] * omega[k] ** 2 * s[k]
            ap[i, :, :] = ap[k, :, :]
            ap[i, 0, k] -= length[k] * s[k]
            ap[i, 1, k] += length[k] * c[k]
        half = 0.5 * length[i]
        a0g[i, 0] = a0p[i, 0] - half * omega[i] ** 2 * c[i]
        a0g[i, 1] = a0p[i, 1] - half * omega[i] ** 2 * s[i]
        ag[i, :, :] = ap[i, :, :]
        ag[i, 0, i] -= half * s[i]
        ag[i, 1, i] += half * c[i]

    M = np.zeros((n, n))
    b = np.empty(n)
    for i in range(n):
        lever = 0.5 * mass[i] * length[i]
        # inertial terms of link i about its moving lead node
        M[i, i] += inertia[i]
        for k in range(n):
            M[i, k] += lever * (c[i] * ap[i, 1, k] - s[i] * ap[i, 0, k])
        bi = drags[i, 4] - lever * (c[i] * a0p[i, 1] - s[i] * a0p[i, 0])
        # hinge force from everything downstream, R = Σ (D_j - m_j a_G,j)
        for j in range(i + 1, n):
            fx = drags[j, 0] + drags[j, 2] - mass[j] * a0g[j, 0]
            fy = drags[j, 1] + drags[j, 3] - mass[j] * a0g[j, 1]
            bi += length[i] * (c[i] * fy - s[i] * fx)
            for k in range(n):
                M[i, k] += length[i] * mass[j] * (c[i] * ag[j, 1, k] - s[i] * ag[j, 0, k])
        b[i] = bi
    return M, b, drags


@njit(cache=True)
def _derivative(y, tvx, tvy, tax, tay, length, mass, inertia, diameter, cdn, cdt, rho, veps, law, u, w):
    n = y.shape[0] // 2
    theta = y[:n]
    omega = y[n:]
    M, b, _ = _assemble(theta, omega, tvx, tvy, tax, tay,
                        length, mass, inertia, diameter, cdn, cdt, rho, veps, law, u, w)
    dy = np.empty(2 * n)
    dy[:n] = omega
    ok = _gauss_solve(M, b, dy[n:])
    return dy, ok


def assemble_accel_system(state: ChainState, tow: TowPointKinematics, chain: Chain) -> AccelSystem:
    """Linear system ``M θ̈ = b`` for the chain at ``state`` driven by ``tow``."""
    M, b, drags = _assemble(state.theta, state.theta_dot, tow.vx, tow.vy, tow.ax, tow.ay,
                            *chain.kernel_args())
    return AccelSystem(M, b, tuple(DragResult(*row) for row in drags))


def angular_accelerations(system: AccelSystem) -> np.ndarray:
    return solve_dense(system.matrix, system.rhs)


def rhs(t: float, y: np.ndarray, tow: TowFunction, chain: Chain) -> np.ndarray:
    """Time derivative of the flat state ``[θ_1..θ_n, θ̇_1..θ̇_n]``."""
    k = tow(t)
    dy, ok = _derivative(y, k.vx, k.vy, k.ax, k.ay, *chain.kernel_args())
    if not ok:
        if not np.all(np.isfinite(y)):
            raise FloatingPointError(f"non-finite state at t = {t!r} s: {list(y)!r}")
        raise SingularMatrixError(f"singular acceleration system at t = {t!r} s, state {list(y)!r}")
    return dy


def chain_kinematics(state: ChainState, tow: TowPointKinematics, lengths: Sequence[float],
                     theta_ddot: Sequence[float] | None = None) -> ChainKinematics:
    """Position, velocity and (when ``theta_ddot`` is given) acceleration of every node."""
    has_acc = theta_ddot is not None
    lead = NodeKinematics(tow.x, tow.y, tow.vx, tow.vy,
                          tow.ax if has_acc else math.nan, tow.ay if has_acc else math.nan)
    links = []
    for i, length in enumerate(lengths):
        th, om = state.theta[i], state.theta_dot[i]
        al = theta_ddot[i] if has_acc else math.nan
        nodes = [_advance(lead, length * f, th, om, al, has_acc) for f in (0.5, 1.0)]
        links.append(LinkKinematics(lead=lead, cg=nodes[0], tail=nodes[1]))
        lead = nodes[1]
    return ChainKinematics(tuple(links), has_acc)


def _advance(p: NodeKinematics, d: float, th: float, om: float, al: float, has_acc: bool) -> NodeKinematics:
    s, c = math.sin(th), math.cos(th)
    if has_acc:
        ax = p.ax - d * al * s - d * om * om * c
        ay = p.ay + d * al * c - d * om * om * s
    else:
        ax = ay = math.nan
    return NodeKinematics(p.x + d * c, p.y + d * s, p.vx - d * om * s, p.vy + d * om * c, ax, ay)


def downstream_force(j: int, kin: ChainKinematics, drag: DragResult, mass: float) -> np.ndarray:
    """
    ``m_j a_G,j - (D_n + D_t)_j``: the net force link ``j`` passes upstream.

    The hinge force at the tail of link ``i`` is minus the sum of this over
    all ``j > i``.
    """
    if not kin.has_acceleration:
        raise ValueError("chain kinematics were computed without accelerations")
    return mass * kin.links[j].cg.acceleration - drag.force


def reaction_forces(kin: ChainKinematics, drags: Sequence[DragResult], masses: Sequence[float]) -> np.ndarray:
    """Hinge force at the tail of every link; the last row (free end) is zero."""
    n = len(kin.links)
    out = np.zeros((n, 2))
    for i in range(n - 2, -1, -1):
        out[i] = out[i + 1] - downstream_force(i + 1, kin, drags[i + 1], masses[i + 1])
    return out


def trailing_angle(course_rad: float) -> float:
    """Yaw [rad, CCW from +x] of a link streaming straight behind a ship on ``course_rad``."""
    return math.pi / 2 - course_rad + math.pi


def initial_state(n_links: int, course_rad: float, t0: float = 0.0) -> ChainState:
    """All links trailing the ship, at rest relative to it."""
    theta = np.full(n_links, trailing_angle(course_rad))
    return ChainState(t0, theta, np.zeros(n_links))
