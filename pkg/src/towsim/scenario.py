"""
Scenario files: INI-style sections of ``key = value`` lines, ``#`` comments.

Sections and keys (required keys marked *, everything else has the default
shown)::

    [fluid]   density=1000 gravity=9.81
    [cable]   length* diameter* mass_per_length* cdn* cdt* segments=2
    [array]   length* diameter* mass_per_length* cdn* cdt*
    [sim]     dt=0.1 duration_s=<sum of legs> output_stride=1 v_epsilon=1e-9
              quadrature_points=5 quadrature_panels=1
    [hydro]   normal_drag_law=crossflow          (crossflow | velocity)
    [ship]    x0=0 y0=0 speed_knots*
    [steady]  drag_model=tangential buoyancy_opposes_weight=false
    [leg.K]   type*=straight|turn duration_s*
              course_deg* (straight) | rate_deg_per_min* (turn)

``[cable]``, ``[array]``, ``[ship]`` and at least one ``[leg.K]`` are
required. Legs run in increasing K. Unknown sections or keys are errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import BodyParams, ChainConfig, ConfigError, FluidEnv, config_errors, split_cable
from .shiptrack import KNOT, ShipTrajectory, Straight, TrajectoryError, Turn, build_trajectory

_BOOLS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _bool(text: str) -> bool:
    try:
        return _BOOLS[text.lower()]
    except KeyError:
        raise ValueError(f"expected true/false, got {text!r}") from None


_BODY = {"length": float, "diameter": float, "mass_per_length": float, "cdn": float, "cdt": float}
SCHEMA = {
    "fluid": {"density": float, "gravity": float},
    "cable": {**_BODY, "segments": int},
    "array": dict(_BODY),
    "sim": {"dt": float, "duration_s": float, "output_stride": int, "v_epsilon": float,
            "quadrature_points": int, "quadrature_panels": int},
    "hydro": {"normal_drag_law": str},
    "ship": {"x0": float, "y0": float, "speed_knots": float},
    "steady": {"drag_model": str, "buoyancy_opposes_weight": _bool},
}
LEG_SCHEMA = {"type": str, "course_deg": float, "rate_deg_per_min": float, "duration_s": float}
REQUIRED_SECTIONS = ("cable", "array", "ship")

_SECTION = re.compile(r"^\[\s*([A-Za-z0-9_.]+)\s*\]$")
_LEG = re.compile(r"^leg\.(\d+)$")


@dataclass(frozen=True)
class _Value:
    value: object
    line: int


def _read_sections(text: str, errors: list[str]) -> tuple[dict[str, dict[str, _Value]], dict[str, int]]:
    sections: dict[str, dict[str, _Value]] = {}
    header_line: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            name = m.group(1)
            if name not in SCHEMA and not _LEG.match(name):
                errors.append(f"line {lineno}: unknown section [{name}]")
                current = None
                continue
            if name in sections:
                errors.append(f"line {lineno}: duplicate section [{name}]")
            sections.setdefault(name, {})
            header_line.setdefault(name, lineno)
            current = name
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        if current is None:
            if not errors or not errors[-1].startswith(f"line {lineno - 1}"):
                errors.append(f"line {lineno}: key outside a known section")
            continue
        key, text_value = (part.strip() for part in line.split("=", 1))
        schema = LEG_SCHEMA if _LEG.match(current) else SCHEMA[current]
        if key not in schema:
            errors.append(f"line {lineno}: unknown key {key!r} in [{current}]")
            continue
        if key in sections[current]:
            errors.append(f"line {lineno}: duplicate key {key!r} in [{current}]")
            continue
        try:
            value = schema[key](text_value)
        except ValueError:
            errors.append(f"line {lineno}: [{current}] {key} = {text_value!r} is not a valid "
                          f"{getattr(schema[key], '__name__', 'value').lstrip('_')}")
            continue
        sections[current][key] = _Value(value, lineno)
    return sections, header_line


def _body(sections, name: str, errors: list[str]) -> BodyParams | None:
    sec = sections[name]
    missing = [k for k in _BODY if k not in sec]
    if missing:
        errors.append(f"[{name}] missing required key(s): {', '.join(missing)}")
        return None
    return BodyParams(length=sec["length"].value, diameter=sec["diameter"].value,
                      linear_density=sec["mass_per_length"].value,
                      drag_normal=sec["cdn"].value, drag_tangential=sec["cdt"].value)


def _legs(sections, header_line, errors: list[str]) -> list:
    names = sorted((int(_LEG.match(n).group(1)), n) for n in sections if _LEG.match(n))
    if not names:
        errors.append("at least one [leg.K] section required")
    legs = []
    for _, name in names:
        sec = sections[name]
        where = f"line {header_line[name]}: [{name}]"
        kind = sec.get("type")
        if "duration_s" not in sec:
            errors.append(f"{where} missing duration_s")
            continue
        duration = sec["duration_s"].value
        if kind is None:
            errors.append(f"{where} missing type")
        elif kind.value == "straight":
            if "rate_deg_per_min" in sec:
                errors.append(f"line {sec['rate_deg_per_min'].line}: rate_deg_per_min not allowed on a straight leg")
            if "course_deg" not in sec:
                errors.append(f"{where} missing course_deg")
            else:
                legs.append(Straight(sec["course_deg"].value, duration))
        elif kind.value == "turn":
            if "course_deg" in sec:
                errors.append(f"line {sec['course_deg'].line}: course_deg not allowed on a turn leg")
            if "rate_deg_per_min" not in sec:
                errors.append(f"{where} missing rate_deg_per_min")
            else:
                legs.append(Turn(sec["rate_deg_per_min"].value, duration))
        else:
            errors.append(f"line {kind.line}: leg type must be 'straight' or 'turn', got {kind.value!r}")
    return legs


def _get(sections, section: str, key: str, default):
    entry = sections.get(section, {}).get(key)
    return default if entry is None else entry.value


def parse_scenario(text: str) -> tuple[ChainConfig, ShipTrajectory]:
    """Parse and validate a scenario; raises ConfigError listing every problem found."""
    errors: list[str] = []
    sections, header_line = _read_sections(text, errors)
    for name in REQUIRED_SECTIONS:
        if name not in sections:
            errors.append(f"missing required section [{name}]")
    if errors:
        raise ConfigError(errors)

    cable = _body(sections, "cable", errors)
    array = _body(sections, "array", errors)
    if "speed_knots" not in sections["ship"]:
        errors.append("[ship] missing required key: speed_knots")
    legs = _legs(sections, header_line, errors)
    if errors:
        raise ConfigError(errors)

    try:
        traj = build_trajectory(_get(sections, "ship", "x0", 0.0), _get(sections, "ship", "y0", 0.0),
                                sections["ship"]["speed_knots"].value * KNOT, legs)
    except TrajectoryError as exc:
        raise ConfigError(str(exc)) from None

    segments = _get(sections, "cable", "segments", 2)
    if segments < 1:
        raise ConfigError(f"line {sections['cable']['segments'].line}: [cable] segments must be >= 1")
    duration = _get(sections, "sim", "duration_s", traj.duration)
    cfg = ChainConfig(
        fluid=FluidEnv(density=_get(sections, "fluid", "density", 1000.0),
                       gravity=_get(sections, "fluid", "gravity", 9.81)),
        links=tuple(split_cable(cable, segments) + [array]),
        dt=_get(sections, "sim", "dt", 0.1),
        duration=duration,
        output_stride=_get(sections, "sim", "output_stride", 1),
        v_epsilon=_get(sections, "sim", "v_epsilon", 1e-9),
        quadrature_points=_get(sections, "sim", "quadrature_points", 5),
        quadrature_panels=_get(sections, "sim", "quadrature_panels", 1),
        normal_drag_law=_get(sections, "hydro", "normal_drag_law", "crossflow"),
        drag_model=_get(sections, "steady", "drag_model", "tangential"),
        buoyancy_opposes_weight=_get(sections, "steady", "buoyancy_opposes_weight", False),
    )
    errors = config_errors(cfg)
    if duration > traj.duration:
        errors.append(f"[sim] duration_s = {duration} exceeds the ship trajectory ({traj.duration} s)")
    if errors:
        raise ConfigError(errors)
    return cfg, traj


def load_scenario(path: str | Path) -> tuple[ChainConfig, ShipTrajectory]:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def reference_scenario_text() -> str:
    return resources.files("towsim").joinpath("data/reference_scenario.ini").read_text(encoding="utf-8")


def load_reference_scenario() -> tuple[ChainConfig, ShipTrajectory]:
    return parse_scenario(reference_scenario_text())
