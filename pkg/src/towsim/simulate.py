"""Fixed-step time integration of a scenario and CSV output."""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .dynamics import Chain, chain_kinematics, initial_state, rhs
from .model import ChainConfig, ChainState, ConfigError, validate_config
from .numerics import SingularMatrixError, rk4_step
from .shiptrack import ShipTrajectory, leg_kinematics

# absorbs round-off in duration / dt when counting steps
STEP_COUNT_SLACK = 1e-9
# leg boundaries this close (relative to dt) to a step end count as on it
BOUNDARY_SNAP = 1e-9


class SimulationError(ArithmeticError):
    """Numerical failure during a run; ``t`` is the time of the step that failed."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    ship_x: float
    ship_y: float
    ship_course_deg: float
    theta: tuple[float, ...]
    theta_dot: tuple[float, ...]
    tail_x: tuple[float, ...]
    tail_y: tuple[float, ...]
    cg_x: tuple[float, ...]
    cg_y: tuple[float, ...]

    @property
    def n_links(self) -> int:
        return len(self.theta)

    def row(self) -> list[float]:
        out = [self.t, self.ship_x, self.ship_y, self.ship_course_deg]
        for i in range(self.n_links):
            out += [self.theta[i], self.theta_dot[i], self.tail_x[i], self.tail_y[i], self.cg_x[i], self.cg_y[i]]
        return out


def step_count(duration: float, dt: float) -> int:
    return int(math.floor(duration / dt + STEP_COUNT_SLACK))


def integrate(chain: Chain, traj: ShipTrajectory, y0: np.ndarray, dt: float, n_steps: int,
              stride: int = 1, t0: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """
    RK4 from ``t0`` for ``n_steps`` steps of ``dt``.

    Step ``k`` ends at ``t0 + k*dt`` (not an accumulated sum). Every stage of
    a step sees the tow point of the leg the step lies in, and a step that
    straddles a leg change is split there, so the jump in ship acceleration
    does not cost accuracy. Returns the sample times and states for every
    ``stride``-th step, step 0 included.
    """
    per_leg = [partial(_rhs, tow=partial(leg_kinematics, traj, i), chain=chain) for i in range(len(traj.legs))]
    cuts = traj.boundaries
    n_out = n_steps // stride + 1
    times = np.empty(n_out)
    states = np.empty((n_out, y0.size))
    y = np.array(y0, dtype=float)
    times[0], states[0] = t0, y
    for k in range(1, n_steps + 1):
        t = t0 + (k - 1) * dt
        try:
            y = _step(per_leg, traj, cuts, t, t0 + k * dt, y, dt)
        except (SingularMatrixError, FloatingPointError) as exc:
            raise SimulationError(f"step from t = {t!r} s failed: {exc}", t) from exc
        if not np.all(np.isfinite(y)):
            raise SimulationError(f"non-finite state after step from t = {t!r} s: {list(y)!r}", t)
        if k % stride == 0:
            times[k // stride] = t0 + k * dt
            states[k // stride] = y
    return times, states


def _step(per_leg, traj, cuts, a, b, y, dt):
    snap = BOUNDARY_SNAP * dt
    i = bisect.bisect_right(cuts, a + snap)
    inner = []
    while i < len(cuts) and cuts[i] < b - snap:
        inner.append(cuts[i])
        i += 1
    for lo, hi in zip([a] + inner, inner + [b]):
        y = rk4_step(per_leg[traj.leg_index(0.5 * (lo + hi))], lo, y, hi - lo)
    return y


def _rhs(t, y, tow, chain):
    return rhs(t, y, tow, chain)


def make_record(t: float, y: np.ndarray, traj: ShipTrajectory, lengths: Sequence[float]) -> TrajectoryRecord:
    tow = traj(t)
    kin = chain_kinematics(ChainState.from_vector(t, y), tow, lengths)
    n = len(lengths)
    return TrajectoryRecord(
        t=float(t), ship_x=float(tow.x), ship_y=float(tow.y),
        ship_course_deg=math.degrees(traj.course_at(t)) % 360.0,
        theta=tuple(float(v) for v in y[:n]),
        theta_dot=tuple(float(v) for v in y[n:]),
        tail_x=tuple(float(k.tail.x) for k in kin.links), tail_y=tuple(float(k.tail.y) for k in kin.links),
        cg_x=tuple(float(k.cg.x) for k in kin.links), cg_y=tuple(float(k.cg.y) for k in kin.links),
    )


def run_scenario(cfg: ChainConfig, traj: ShipTrajectory, duration: float | None = None,
                 initial: ChainState | None = None) -> list[TrajectoryRecord]:
    """
    Simulate ``cfg`` behind ``traj`` and sample every ``cfg.output_stride`` steps.

    ``duration`` overrides ``cfg.duration`` and may be 0 (a single record at
    t = 0). The chain starts trailing the ship at rest unless ``initial`` is
    given.
    """
    validate_config(cfg)
    duration = cfg.duration if duration is None else duration
    if not (math.isfinite(duration) and duration >= 0):
        raise ConfigError(f"duration must be non-negative (got {duration!r})")
    if duration > traj.duration:
        raise ConfigError(f"duration {duration} s exceeds the ship trajectory ({traj.duration} s)")
    if initial is None:
        initial = initial_state(cfg.n_links, traj.course_at(0.0))
    elif initial.n_links != cfg.n_links:
        raise ConfigError(f"initial state has {initial.n_links} links, config has {cfg.n_links}")
    chain = Chain.from_config(cfg)
    times, states = integrate(chain, traj, initial.as_vector(), cfg.dt,
                              step_count(duration, cfg.dt), cfg.output_stride, initial.t)
    lengths = [b.length for b in cfg.links]
    return [make_record(t, y, traj, lengths) for t, y in zip(times, states)]


def csv_header(n_links: int) -> list[str]:
    cols = ["t_s", "ship_x_m", "ship_y_m", "ship_course_deg"]
    for i in range(1, n_links + 1):
        cols += [f"theta{i}_rad", f"thetadot{i}_rad_s", f"tail{i}_x_m", f"tail{i}_y_m", f"cg{i}_x_m", f"cg{i}_y_m"]
    return cols


def write_csv(records: Sequence[TrajectoryRecord], destination: str | Path | IO[str],
              n_links: int | None = None) -> None:
    """
    Header plus one row per record; floats use ``repr`` (shortest round-trip).

    ``n_links`` sizes the header when ``records`` is empty (default 3).
    """
    if n_links is None:
        n_links = records[0].n_links if records else 3
    if hasattr(destination, "write"):
        _write_rows(records, destination, n_links)
        return
    with open(destination, "w", newline="", encoding="utf-8") as fh:
        _write_rows(records, fh, n_links)


def _write_rows(records: Iterable[TrajectoryRecord], fh: IO[str], n_links: int) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(csv_header(n_links))
    for rec in records:
        if rec.n_links != n_links:
            raise ValueError("records with differing link counts")
        writer.writerow([repr(float(v)) for v in rec.row()])


def read_csv(source: str | Path) -> tuple[list[str], np.ndarray]:
    """Header and an (n_rows, n_cols) float array from a file written by write_csv."""
    with open(source, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, np.array([[float(v) for v in r] for r in body]).reshape(len(body), len(header))
