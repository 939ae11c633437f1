"""
Small numerical kernels: Gauss-Legendre quadrature, a dense solver with
partial pivoting, and the classical fixed-step RK4 step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

SINGULAR_PIVOT_RTOL = 1e-14


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Quadrature:
    """Gauss-Legendre rule on [-1, 1], applied on ``panels`` equal sub-intervals."""

    nodes: np.ndarray
    weights: np.ndarray
    panels: int = 1

    @property
    def n_points(self) -> int:
        return self.nodes.size

    def unit_rule(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Composite rule mapped onto [0, 1].

        Returns abscissae ``u`` and weights ``w`` with ``sum(w) == 1`` so that
        ``∫_0^L f(r) dr ≈ L * sum(w * f(L * u))``.
        """
        h = 1.0 / self.panels
        starts = h * np.arange(self.panels)
        u = (starts[:, None] + 0.5 * h * (self.nodes[None, :] + 1.0)).ravel()
        w = np.tile(0.5 * h * self.weights, self.panels)
        return u, w


def _legendre(n: int, x: float) -> tuple[float, float]:
    # P_n(x) and P_n'(x) from the three-term recurrence
    p0, p1 = 1.0, x
    if n == 0:
        return 1.0, 0.0
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n: int, panels: int = 1) -> Quadrature:
    """
    n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_n found by Newton iteration from the usual
    cosine initial guesses; weights are ``2 / ((1 - x²) P_n'(x)²)``.
    """
    if n < 1:
        raise ValueError("quadrature needs at least one point")
    if panels < 1:
        raise ValueError("quadrature needs at least one panel")
    nodes = np.empty(n)
    weights = np.empty(n)
    for i in range((n + 1) // 2):
        x = math.cos(math.pi * (i + 0.75) / (n + 0.5))
        for _ in range(100):
            p, dp = _legendre(n, x)
            dx = p / dp
            x -= dx
            if abs(dx) < 1e-16:
                break
        p, dp = _legendre(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        nodes[i], nodes[n - 1 - i] = -x, x
        weights[i] = weights[n - 1 - i] = w
    if n % 2 == 1:
        nodes[n // 2] = 0.0
    return Quadrature(nodes=nodes, weights=weights, panels=panels)


def integrate(q: Quadrature, f: Callable[[float], float], a: float, b: float) -> float:
    """Composite Gauss-Legendre estimate of ∫_a^b f."""
    if b < a:
        raise ValueError("integrate expects a <= b")
    u, w = q.unit_rule()
    span = b - a
    return span * sum(wi * f(a + span * ui) for ui, wi in zip(u, w))


@njit(cache=True)
def _gauss_solve(M, b, x):
    """In-place elimination on copies; returns False when a pivot is too small."""
    n = b.shape[0]
    a = M.copy()
    rhs = b.copy()
    scale = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += abs(a[i, j])
        if s > scale:
            scale = s
    tol = SINGULAR_PIVOT_RTOL * scale
    for k in range(n):
        p = k
        big = abs(a[k, k])
        for i in range(k + 1, n):
            if abs(a[i, k]) > big:
                big = abs(a[i, k])
                p = i
        if not big > tol:
            return False
        if p != k:
            for j in range(n):
                a[k, j], a[p, j] = a[p, j], a[k, j]
            rhs[k], rhs[p] = rhs[p], rhs[k]
        for i in range(k + 1, n):
            lam = a[i, k] / a[k, k]
            if lam != 0.0:
                for j in range(k + 1, n):
                    a[i, j] -= lam * a[k, j]
                rhs[i] -= lam * rhs[k]
    for k in range(n - 1, -1, -1):
        s = rhs[k]
        for j in range(k + 1, n):
            s -= a[k, j] * x[j]
        x[k] = s / a[k, k]
    return True


def solve_dense(M, b) -> np.ndarray:
    """Solve ``M x = b`` by Gaussian elimination with partial pivoting."""
    M = np.ascontiguousarray(M, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or b.shape != (M.shape[0],):
        raise ValueError(f"incompatible shapes {M.shape} and {b.shape}")
    if b.size == 0:
        raise ValueError("empty system")
    x = np.empty_like(b)
    if not _gauss_solve(M, b, x):
        raise SingularMatrixError("matrix is singular to working precision")
    return x


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of ``y' = f(t, y)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, y + half * k1)
    k3 = f(t + half, y + half * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
