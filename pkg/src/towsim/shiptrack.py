"""
Ship manoeuvre plans and the exact tow-point kinematics they imply.

Courses are compass style: degrees clockwise from the +y axis, so the
velocity on course ``c`` is ``V * (sin c, cos c)``. Turn rates are signed
degrees per minute; a negative rate decreases the course.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence, Union

KNOT = 0.514444  # m/s
COURSE_CONTINUITY_TOL_DEG = 1e-6
# slack on the span check for time grids built as k * dt
TIME_SLACK = 1e-9


class TrajectoryError(ValueError):
    pass


@dataclass(frozen=True)
class Straight:
    course_deg: float
    duration: float


@dataclass(frozen=True)
class Turn:
    rate_deg_per_min: float
    duration: float

    @property
    def rate(self) -> float:
        """Turn rate in rad/s."""
        return math.radians(self.rate_deg_per_min) / 60.0


TrajectoryLeg = Union[Straight, Turn]


@dataclass(frozen=True)
class TowPointKinematics:
    x: float
    y: float
    vx: float
    vy: float
    ax: float
    ay: float


@dataclass(frozen=True)
class _LegStart:
    t: float
    x: float
    y: float
    course: float  # rad
    rate: float  # rad/s, 0 on straight legs


def _start_time(start: _LegStart) -> float:
    return start.t


@dataclass(frozen=True)
class ShipTrajectory:
    x0: float
    y0: float
    speed: float
    legs: tuple[TrajectoryLeg, ...]
    starts: tuple[_LegStart, ...]

    @property
    def duration(self) -> float:
        return self.starts[-1].t + self.legs[-1].duration

    def leg_index(self, t: float) -> int:
        slack = TIME_SLACK * max(1.0, self.duration)
        if not (-slack <= t <= self.duration + slack):
            raise TrajectoryError(f"t = {t!r} s outside trajectory span [0, {self.duration}]")
        i = bisect.bisect_right(self.starts, t, key=_start_time) - 1
        return min(max(i, 0), len(self.legs) - 1)

    @property
    def boundaries(self) -> tuple[float, ...]:
        """Times where one leg hands over to the next."""
        return tuple(s.t for s in self.starts[1:])

    def course_at(self, t: float) -> float:
        """Course [rad] at time ``t``."""
        s = self.starts[self.leg_index(t)]
        return s.course + s.rate * (t - s.t)

    def __call__(self, t: float) -> TowPointKinematics:
        return tow_kinematics_at(self, t)


def _end_of_leg(start: _LegStart, leg: TrajectoryLeg, speed: float) -> tuple[float, float, float]:
    tau = leg.duration
    if isinstance(leg, Straight):
        return (start.x + speed * math.sin(start.course) * tau,
                start.y + speed * math.cos(start.course) * tau,
                start.course)
    w = leg.rate
    course = start.course + w * tau
    r = speed / w
    return (start.x + r * (math.cos(start.course) - math.cos(course)),
            start.y + r * (math.sin(course) - math.sin(start.course)),
            course)


def build_trajectory(x0: float, y0: float, speed: float, legs: Sequence[TrajectoryLeg]) -> ShipTrajectory:
    """
    Chain the legs into a time-continuous track starting at ``(x0, y0)`` at t = 0.

    The first leg must be Straight (it fixes the initial course). Every later
    Straight leg must declare the course the previous leg ends on.
    """
    legs = tuple(legs)
    if not legs:
        raise TrajectoryError("trajectory needs at least one leg")
    if not (math.isfinite(speed) and speed > 0):
        raise TrajectoryError("ship speed must be positive")
    for k, leg in enumerate(legs, start=1):
        if not (math.isfinite(leg.duration) and leg.duration > 0):
            raise TrajectoryError(f"leg {k}: duration must be positive")
        if isinstance(leg, Turn) and not (math.isfinite(leg.rate_deg_per_min) and leg.rate_deg_per_min != 0):
            raise TrajectoryError(f"leg {k}: turn rate must be non-zero")
    if not isinstance(legs[0], Straight):
        raise TrajectoryError("leg 1 must be straight to fix the initial course")

    starts = []
    t, x, y = 0.0, float(x0), float(y0)
    course = math.radians(legs[0].course_deg)
    for k, leg in enumerate(legs, start=1):
        if isinstance(leg, Straight):
            declared = math.radians(leg.course_deg)
            gap = math.degrees(math.remainder(declared - course, 2 * math.pi))
            if k > 1 and abs(gap) > COURSE_CONTINUITY_TOL_DEG:
                raise TrajectoryError(
                    f"leg {k}: course {leg.course_deg} deg does not continue previous leg "
                    f"(ends at {math.degrees(course) % 360.0:.9g} deg)")
            course = declared
            start = _LegStart(t, x, y, course, 0.0)
        else:
            start = _LegStart(t, x, y, course, leg.rate)
        starts.append(start)
        x, y, course = _end_of_leg(start, leg, speed)
        t += leg.duration
    return ShipTrajectory(float(x0), float(y0), float(speed), legs, tuple(starts))


def tow_kinematics_at(traj: ShipTrajectory, t: float) -> TowPointKinematics:
    """Closed-form position, velocity and acceleration of the tow point."""
    return leg_kinematics(traj, traj.leg_index(t), t)


def leg_kinematics(traj: ShipTrajectory, leg: int, t: float) -> TowPointKinematics:
    """
    Kinematics from leg ``leg``'s formula at ``t``, without choosing the leg by time.

    At a boundary this gives the one-sided limit from that leg, which is
    what an integration step lying inside the leg should see.
    """
    s = traj.starts[leg]
    V = traj.speed
    tau = t - s.t
    if s.rate == 0.0:
        sa, ca = math.sin(s.course), math.cos(s.course)
        return TowPointKinematics(s.x + V * sa * tau, s.y + V * ca * tau, V * sa, V * ca, 0.0, 0.0)
    w = s.rate
    a = s.course + w * tau
    sa, ca = math.sin(a), math.cos(a)
    r = V / w
    return TowPointKinematics(
        s.x + r * (math.cos(s.course) - ca),
        s.y + r * (sa - math.sin(s.course)),
        V * sa, V * ca,
        V * w * ca, -V * w * sa,
    )


def reference_trajectory() -> ShipTrajectory:
    """5 kn from the origin: 12 min on 140°, 4 min turning at -30°/min, 14 min on 20°."""
    return build_trajectory(0.0, 0.0, 5 * KNOT, [
        Straight(140.0, 720.0),
        Turn(-30.0, 240.0),
        Straight(20.0, 840.0),
    ])
