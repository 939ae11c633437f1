"""
Acceptance criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` (any verbosity); the summary at the
end lists one PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest

from oracles import riemann_drag, three_body_accel, three_body_drags, three_body_rhs
from report import check
from test_shiptrack import finite_difference_errors
from towsim.dynamics import Chain, assemble_accel_system, angular_accelerations, initial_state, rhs, trailing_angle
from towsim.hydro import LinkMotion, drag_forces
from towsim.model import REFERENCE_ARRAY, ChainState, reference_chain
from towsim.numerics import gauss_legendre, rk4_step
from towsim.scenario import load_reference_scenario
from towsim.shiptrack import KNOT, Straight, TowPointKinematics, Turn, build_trajectory, tow_kinematics_at
from towsim.simulate import integrate, run_scenario
from towsim.statics import REFERENCE_PITCH_DEG, steady_state

V = 5 * KNOT


@pytest.fixture(scope="module")
def scenario():
    return load_reference_scenario()


@pytest.fixture(scope="module")
def scenario_records(scenario):
    cfg, traj = scenario
    return cfg, traj, run_scenario(cfg.with_overrides(output_stride=1), traj)


def test_c1_quadrature_against_riemann():
    cfg = reference_chain()
    rng = np.random.default_rng(101)
    q = gauss_legendre(cfg.quadrature_points, cfg.quadrature_panels)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        body = cfg.links[rng.integers(0, cfg.n_links)]
        body = type(body)(rng.uniform(1.0, 400.0), body.diameter, body.linear_density,
                          body.drag_normal, body.drag_tangential)
        motion = LinkMotion(rng.uniform(-math.pi, math.pi), rng.uniform(-0.02, 0.02), *rng.uniform(-3, 3, 2))
        d = drag_forces(motion, body, cfg.fluid, q, cfg.v_epsilon, cfg.normal_drag_law)
        ref = riemann_drag(motion.theta, motion.theta_dot, motion.lead_vx, motion.lead_vy, body.length,
                           body.diameter, body.drag_normal, body.drag_tangential, cfg.fluid.density)
        got = np.array([d.normal_x, d.normal_y, d.tangential_x, d.tangential_y, d.moment])
        # vector relative error per quantity, absolute 1e-9 near zero
        for sl in (slice(0, 2), slice(2, 4), slice(4, 5)):
            err = np.linalg.norm(got[sl] - ref[sl])
            size = np.linalg.norm(ref[sl])
            worst = max(worst, err / size if size > 1e-9 else err / 1e-9 * 1e-6)
    elapsed = time.perf_counter() - start
    check(1, worst < 1e-6 and elapsed < 10,
          f"worst relative error {worst:.2e} (< 1e-6), {elapsed:.2f} s (< 10 s), GL{q.nodes.size} x {q.panels} panel")


def test_c2_three_body_equivalence(scenario):
    cfg = reference_chain()
    chain = Chain.from_config(cfg)
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(1000):
        th, om = rng.uniform(-math.pi, math.pi, 3), rng.uniform(-0.02, 0.02, 3)
        v, a = rng.uniform(-3, 3, 2), rng.uniform(-0.05, 0.05, 2)
        acc = angular_accelerations(assemble_accel_system(ChainState(0.0, th, om),
                                                          TowPointKinematics(0, 0, *v, *a), chain))
        M, b = three_body_accel(th, om, v, a, chain.length, chain.mass, three_body_drags(th, om, v, cfg))
        ref = np.linalg.solve(M, b)
        worst = max(worst, np.max(np.abs(acc - ref)) / np.max(np.abs(ref)))

    # 60 s through the start of the turn from an off-equilibrium state
    _, traj = scenario
    y = initial_state(3, math.radians(140.0)).as_vector() + np.r_[np.radians([3.0, -2.0, 4.0]), 1e-3, -1e-3, 2e-3]
    ya, yb, drift = y.copy(), y.copy(), 0.0
    for k in range(600):
        t = 700.0 + 0.1 * k
        ya = rk4_step(lambda t, y: rhs(t, y, traj, chain), t, ya, 0.1)
        yb = rk4_step(lambda t, y: three_body_rhs(t, y, traj, cfg), t, yb, 0.1)
        drift = max(drift, np.max(np.abs(ya[:3] - yb[:3])))
    check(2, worst <= 1e-12 and drift <= 1e-10,
          f"theta_ddot relative {worst:.1e} (<= 1e-12) on 1000 states; 60 s trajectories {drift:.1e} rad (<= 1e-10)")


def test_c3_rk4_order(scenario):
    cfg, traj = scenario
    chain = Chain.from_config(cfg)
    # t in [0, 720] is the trailing fixed point, so the window is the first 120 s of the manoeuvre
    t0 = 720.0
    y0 = initial_state(3, traj.course_at(0.0)).as_vector()
    runs = {}
    for dt in (0.2, 0.1, 0.05):
        n0, n = round(t0 / dt), round(120.0 / dt)
        _, start = integrate(chain, traj, y0, dt, n0, n0)
        _, Y = integrate(chain, traj, start[-1], dt, n, round(1.0 / dt), t0=t0)
        runs[dt] = Y[:, :3]
    e1 = np.max(np.abs(runs[0.2] - runs[0.1]), axis=0)
    e2 = np.max(np.abs(runs[0.1] - runs[0.05]), axis=0)
    order = np.log2(e1 / e2)
    check(3, bool(np.all(order >= 3.5)),
          f"observed order per link {np.round(order, 2).tolist()} (>= 3.5) over t in [720, 840] s")


def test_c4_equilibrium_and_stability():
    cfg = reference_chain()
    chain = Chain.from_config(cfg)
    traj = build_trajectory(0, 0, V, [Straight(20.0, 3600.0)])
    trail = trailing_angle(math.radians(20.0))
    rest = initial_state(3, math.radians(20.0)).as_vector()
    still = np.max(np.abs(rhs(100.0, rest, traj, chain)[3:]))

    y0 = rest.copy()
    y0[0] += math.radians(5.0)
    t, Y = integrate(chain, traj, y0, cfg.dt, round(3600 / cfg.dt), 10)
    dev = np.degrees(np.abs(Y[:, :3] - trail)).max(axis=1)
    outside = t[dev > 0.1]
    settled = outside[-1] if outside.size else 0.0
    peaks = [dev[(t >= w) & (t < w + 300)].max() for w in range(0, 3600, 300)]
    monotone = all(b <= a for a, b in zip(peaks, peaks[1:]))
    ok = still <= 1e-10 and settled < 3600 - 1800 and monotone
    check(4, ok, f"|theta_ddot| at rest {still:.1e} (<= 1e-10); 5 deg kick within 0.1 deg from t = {settled:.0f} s "
                 f"through 3600 s; 300 s envelope non-increasing: {monotone}")


def test_c5_dissipation():
    cfg = reference_chain().with_overrides(links=(REFERENCE_ARRAY,))
    chain = Chain.from_config(cfg)
    rest = lambda t: TowPointKinematics(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)  # noqa: E731
    # explicit RK4 needs dt * |d(theta_ddot)/d(theta_dot)| < ~2.8; that derivative is -576 s^-1 at the start
    dt = 0.004
    y = np.array([0.3, 0.1])
    energies = [0.5 * chain.inertia[0] * y[1] ** 2]
    for k in range(round(300 / dt)):
        y = rk4_step(lambda t, y: rhs(t, y, rest, chain), k * dt, y, dt)
        energies.append(0.5 * chain.inertia[0] * y[1] ** 2)
    e = np.array(energies)
    rises = np.nonzero(e[1:] > e[:-1] * (1 + 1e-12))[0]
    check(5, rises.size == 0, f"array link, theta_dot0 = 0.1 rad/s, dt = {dt} s: {rises.size} increases over "
                              f"{e.size - 1} steps; energy {e[0]:.3e} -> {e[-1]:.3e} J")


def test_c6_scenario(scenario, scenario_records):
    cfg, traj, records = scenario_records
    t = np.array([r.t for r in records])
    theta = np.array([r.theta for r in records])

    def off(deg_course, rows):
        return np.degrees(np.abs(np.remainder(theta[rows] - trailing_angle(math.radians(deg_course)) + math.pi,
                                              2 * math.pi) - math.pi))

    pre = off(140.0, t <= 720.0).max()
    final = off(20.0, t == 1800.0).max()

    cg = np.array([(r.cg_x[-1], r.cg_y[-1]) for r in records])
    ship = np.array([(r.ship_x, r.ship_y) for r in records])
    heading = np.array([math.sin(math.radians(140.0)), math.cos(math.radians(140.0))])
    normal = np.array([-heading[1], heading[0]])
    window = (t >= 720.0) & (t <= 1100.0)
    off_track = np.abs(cg[window] @ normal).max()
    cg_path = np.sum(np.linalg.norm(np.diff(cg, axis=0), axis=1))
    ship_path = np.sum(np.linalg.norm(np.diff(ship, axis=0), axis=1))

    run_scenario(cfg, traj, duration=10.0)  # JIT warm-up outside the timed run
    start = time.perf_counter()
    run_scenario(cfg.with_overrides(dt=0.05), traj)
    elapsed = time.perf_counter() - start

    ok_a, ok_b = pre <= 0.5, final <= 1.0
    ok_c = off_track > 1.0 and cg_path < ship_path
    check("6a", ok_a, f"max deviation from trailing 140 deg on [0, 720] s: {pre:.2e} deg (<= 0.5)")
    check("6b", ok_b, f"max deviation from trailing 20 deg at 1800 s: {final:.3f} deg (<= 1)")
    check("6c", ok_c, f"array CG leaves pre-turn track by {off_track:.1f} m on [720, 1100] s; "
                      f"CG path {cg_path:.1f} m < ship path {ship_path:.1f} m")
    check("6t", elapsed < 5.0, f"full run at dt = 0.05 s took {elapsed:.2f} s (< 5 s, JIT warm)")


def test_c7_steady_state(scenario):
    cfg, _ = scenario
    s = steady_state(cfg, V)
    c, a = s.cable, s.array
    residuals = [
        (a.weight + a.buoyancy - s.tension_array * math.cos(s.psi_array)) / s.tension_array,
        (a.drag - s.tension_array * math.sin(s.psi_array)) / s.tension_array,
        (c.weight + c.buoyancy + s.tension_array * math.cos(s.psi_array) - s.tension_tow * math.cos(s.psi_cable))
        / s.tension_tow,
        (c.drag + s.tension_array * math.sin(s.psi_array) - s.tension_tow * math.sin(s.psi_cable)) / s.tension_tow,
        math.tan(s.psi_cable) - (c.drag + a.drag) / (c.weight + a.weight + c.buoyancy + a.buoyancy),
    ]
    speeds = np.linspace(0.0, 10.0, 101)
    psis = [steady_state(cfg, v).psi_cable for v in speeds]
    rest = steady_state(cfg, 0.0)
    ok = (max(map(abs, residuals)) < 1e-9 and all(b > a_ for a_, b in zip(psis, psis[1:]))
          and rest.psi_cable == 0.0 and rest.psi_array == 0.0)
    check(7, ok, f"residuals {max(map(abs, residuals)):.1e} (< 1e-9), monotone in V, psi(0) = 0; computed psi1 = "
                 f"{s.psi_cable_deg:.3f} deg from vertical ({s.drag_model} drag) vs reported {REFERENCE_PITCH_DEG} deg "
                 f"(not independently reproduced; its drag law is not stated)")


def test_c8_geometry(scenario_records):
    cfg, _, records = scenario_records
    lengths = [b.length for b in cfg.links]
    hinge = rigid = 0.0
    for r in records:
        lead = (r.ship_x, r.ship_y)
        for i, l in enumerate(lengths):
            tail = (r.tail_x[i], r.tail_y[i])
            expect = (lead[0] + l * math.cos(r.theta[i]), lead[1] + l * math.sin(r.theta[i]))
            hinge = max(hinge, math.dist(tail, expect),
                        math.dist((r.cg_x[i], r.cg_y[i]), ((lead[0] + tail[0]) / 2, (lead[1] + tail[1]) / 2)))
            rigid = max(rigid, abs(math.dist(lead, tail) - l) / l)
            lead = tail
    check(8, hinge <= 1e-9 and rigid <= 1e-9,
          f"{len(records)} samples: hinge/CG placement {hinge:.1e} m (<= 1e-9), link length {rigid:.1e} rel (<= 1e-9)")


def test_c9_ship_trajectory(scenario):
    _, traj = scenario
    times = [t for t in np.linspace(1, 1799, 400) if all(abs(t - s.t) > 0.01 for s in traj.starts)]
    dv, da = finite_difference_errors(traj, times)
    circle = build_trajectory(0, 0, V, [Straight(0.0, 1.0), Turn(-30.0, 720.0)])
    p0, p1 = tow_kinematics_at(circle, 1.0), tow_kinematics_at(circle, 721.0)
    gap = math.hypot(p1.x - p0.x, p1.y - p0.y)
    s = traj.starts[1]
    r = V / s.rate
    cx, cy = s.x + r * math.cos(s.course), s.y - r * math.sin(s.course)
    radius_oracle = 294.75469995828126  # V / (30 deg/min in rad/s), evaluated separately
    radii = [math.hypot(k.x - cx, k.y - cy) for k in (tow_kinematics_at(traj, t) for t in np.linspace(720, 960, 49))]
    rad_err = max(abs(x - radius_oracle) / radius_oracle for x in radii)
    ok = dv < 1e-6 and da < 1e-4 and gap < 1e-9 and rad_err < 1e-6
    check(9, ok, f"finite differences: velocity {dv:.1e} m/s, accel {da:.1e} m/s^2; full circle closes to "
                 f"{gap:.1e} m; turn radius {radii[0]:.4f} m, rel error {rad_err:.1e}")


def test_c10_mirror(scenario):
    cfg, traj = scenario
    cfg = cfg.with_overrides(output_stride=1)
    mirrored = build_trajectory(-traj.x0, traj.y0, traj.speed,
                                [Straight(-leg.course_deg, leg.duration) if isinstance(leg, Straight)
                                 else Turn(-leg.rate_deg_per_min, leg.duration) for leg in traj.legs])
    a, b = run_scenario(cfg, traj), run_scenario(cfg, mirrored)
    ang = pos = 0.0
    for ra, rb in zip(a, b):
        ang = max([ang] + [abs(math.remainder(tb - (math.pi - ta), 2 * math.pi)) for ta, tb in zip(ra.theta, rb.theta)]
                  + [abs(wa + wb) for wa, wb in zip(ra.theta_dot, rb.theta_dot)])
        xs = zip(ra.tail_x + ra.cg_x + (ra.ship_x,), rb.tail_x + rb.cg_x + (rb.ship_x,))
        ys = zip(ra.tail_y + ra.cg_y + (ra.ship_y,), rb.tail_y + rb.cg_y + (rb.ship_y,))
        pos = max([pos] + [abs(xa + xb) for xa, xb in xs] + [abs(ya - yb) for ya, yb in ys])
    check(10, len(a) == len(b) and ang <= 1e-9 and pos <= 1e-9,
          f"x -> -x reflection over {len(a)} samples: angles {ang:.1e} rad, positions {pos:.1e} m (<= 1e-9)")
