"""Flat key-value run configuration for the command line front end.

The format is one ``key = value`` pair per line; blank lines and lines
starting with ``#`` are ignored.  Keys are the physical parameter names of
:class:`~cyclospec.model.SystemParams` plus run controls (mode, counts, grid
sizes, output path).  Angles accept literals like ``pi/2`` or ``3pi/2``.
A named preset fully overrides the physical parameters.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, fields, replace

from .model import SystemParams, Topology


class ConfigError(ValueError):
    """Configuration problems, with one message per offending field."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class Mode(enum.Enum):
    POPULATIONS = "populations"
    SPECTRUM = "spectrum"
    PHASE_SWEEP = "phase_sweep"
    MIXTURE = "mixture"
    VALIDATE = "validate"


_ANGLE_RE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\s*pi(?:\s*/\s*(\d+(?:\.\d*)?))?$")


def parse_angle(text: str) -> float:
    """Parse 'pi/2', '3pi/2', '-pi', '2pi' or a plain float literal."""
    text = text.strip().lower()
    match = _ANGLE_RE.match(text)
    if match:
        sign = -1.0 if match.group(1) == "-" else 1.0
        coef = float(match.group(2)) if match.group(2) else 1.0
        den = float(match.group(3)) if match.group(3) else 1.0
        return sign * coef * math.pi / den
    return float(text)


def parse_window(text: str) -> tuple[float, float]:
    """Parse 'LO:HI' into a (lo, hi) pair."""
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"window must look like LO:HI, got {text!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if not hi > lo:
        raise ValueError(f"window must satisfy LO < HI, got {text!r}")
    return lo, hi


_PARAM_FIELDS = {f.name for f in fields(SystemParams)}


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs."""

    mode: Mode | None = None
    preset: str | None = None
    params: SystemParams = SystemParams()
    initial: str = "b"
    n_left: float = 0.0
    n_right: float = 0.0
    delta_k: float = 0.0
    window: tuple[float, float] | None = None
    n_points: int | None = None
    t_end: float | None = None
    dt: float | None = None
    out: str | None = None


def parse_config_text(text: str) -> RunConfig:
    """Parse the key-value format, collecting per-field error messages."""
    problems: list[str] = []
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        if key in raw:
            problems.append(f"{key}: given more than once")
        raw[key] = value.strip()

    param_values: dict[str, object] = {}
    run_values: dict[str, object] = {}

    def take(key, conv, target):
        if key not in raw:
            return
        try:
            target[key] = conv(raw.pop(key))
        except (ValueError, TypeError) as err:
            problems.append(f"{key}: {err}")

    take("mode", lambda v: Mode(v.lower()), run_values)
    take("preset", str, run_values)
    take("out", str, run_values)
    take("initial", _parse_initial, run_values)
    take("n_left", _non_negative, run_values)
    take("n_right", _non_negative, run_values)
    take("delta_k", float, run_values)
    take("window", parse_window, run_values)
    take("n_points", _positive_int, run_values)
    take("t_end", _positive_float, run_values)
    take("dt", _positive_float, run_values)

    for name in sorted(_PARAM_FIELDS):
        if name not in raw:
            continue
        value = raw.pop(name)
        try:
            if name == "topology":
                param_values[name] = Topology(value.lower())
            elif name == "phi":
                param_values[name] = parse_angle(value)
            else:
                param_values[name] = float(value)
        except (ValueError, TypeError) as err:
            problems.append(f"{name}: {err}")

    for key in sorted(raw):
        problems.append(f"{key}: unknown configuration key")

    params = SystemParams()
    if not problems:
        try:
            params = replace(params, **param_values)
        except ValueError as err:
            problems.append(str(err))

    if problems:
        raise ConfigError(problems)
    return RunConfig(params=params, **run_values)


def _parse_initial(value: str) -> str:
    v = value.lower()
    if v not in ("a", "b", "c"):
        raise ValueError(f"initial level must be 'a', 'b' or 'c', got {value!r}")
    return v


def _non_negative(value: str) -> float:
    x = float(value)
    if x < 0:
        raise ValueError(f"must be >= 0, got {value}")
    return x


def _positive_int(value: str) -> int:
    x = int(value)
    if x <= 0:
        raise ValueError(f"must be a positive integer, got {value}")
    return x


def _positive_float(value: str) -> float:
    x = float(value)
    if x <= 0:
        raise ValueError(f"must be > 0, got {value}")
    return x


def validate_run_config(config: RunConfig) -> None:
    """Cross-field checks that cannot live on individual fields."""
    problems = []
    if config.preset is None and config.mode is None:
        problems.append("mode: required unless a preset is named")
    if config.mode is Mode.MIXTURE and config.n_left + config.n_right <= 0:
        problems.append("n_left/n_right: a mixture needs a positive total count")
    if problems:
        raise ConfigError(problems)
