"""
Run configuration: settings defaults, overlaid by a JSON document, overlaid by CLI flags.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from thetanorm.config import settings
from thetanorm.core.period import PeriodPoint
from thetanorm.core.polarization import PolarizationType
from thetanorm.core.tolerances import Tolerances
from thetanorm.utils.exceptions import ConfigError, DomainError

PERIOD_SOURCES = ("preset", "X", "Z", "seed")


@dataclass
class RunConfig:
    g: Optional[int] = None
    # Period source: exactly one of preset, (X, k), Z, seed
    preset: Optional[str] = None
    X: Optional[List[List[int]]] = None
    k: Optional[complex] = None
    Z: Optional[List[List[complex]]] = None
    seed: Optional[int] = None
    # Tolerances
    series_tol: float = settings.DEFAULT_SERIES_TOL
    rank_tol: float = settings.DEFAULT_RANK_TOL
    accept: float = settings.DEFAULT_ACCEPT_GAP
    reject: float = settings.DEFAULT_REJECT_GAP
    zero_slack: float = settings.DEFAULT_ZERO_SLACK
    dps: Optional[int] = None
    # Type selection
    type: Optional[PolarizationType] = None
    min_h0: Optional[int] = None
    max_h0: Optional[int] = None
    # Output and execution
    format: str = "json"
    out: Optional[str] = None
    jobs: int = settings.DEFAULT_JOBS
    force_numeric: bool = False
    confirm_iyer: bool = False
    escalate: bool = True
    timings: bool = False
    source: Dict[str, str] = field(default_factory=dict)

    # --- Validation ---

    def validate(self) -> "RunConfig":
        present = [name for name in PERIOD_SOURCES if getattr(self, name) is not None]
        if len(present) > 1:
            raise ConfigError(f"period: exactly one period source allowed, got {', '.join(present)}")
        if (self.X is None) != (self.k is None):
            raise ConfigError("X, k: the split form needs both X and k")
        if self.g is not None and self.g < 1:
            raise ConfigError(f"g: must be positive, got {self.g}")
        if self.format not in settings.SUPPORTED_FORMATS:
            raise ConfigError(f"format: must be one of {', '.join(settings.SUPPORTED_FORMATS)}, got '{self.format}'")
        if self.jobs < 1:
            raise ConfigError(f"jobs: must be at least 1, got {self.jobs}")
        if self.min_h0 is not None and self.min_h0 < 1:
            raise ConfigError(f"min_h0: must be positive, got {self.min_h0}")
        if self.min_h0 is not None and self.max_h0 is not None and self.min_h0 > self.max_h0:
            raise ConfigError(f"min_h0, max_h0: need min_h0 <= max_h0, got {self.min_h0} > {self.max_h0}")
        if self.type is not None and self.g is not None and self.type.g != self.g:
            raise ConfigError(f"type: {self.type} has g={self.type.g} but g={self.g}")
        try:
            self.tolerances()
        except DomainError as e:
            raise ConfigError(f"tolerances: {e}") from e
        return self

    # --- Derived objects ---

    def tolerances(self) -> Tolerances:
        return Tolerances(series_tol=self.series_tol, rank_tol=self.rank_tol, accept=self.accept,
                          reject=self.reject, zero_slack=self.zero_slack, dps=self.dps)

    @property
    def has_period(self) -> bool:
        return any(getattr(self, name) is not None for name in PERIOD_SOURCES)

    def period_point(self) -> Optional[PeriodPoint]:
        """The configured period point, or None when no source is given."""
        try:
            if self.preset is not None:
                period = PeriodPoint.from_preset(self.preset)
            elif self.X is not None:
                period = PeriodPoint.from_split(self.X, self.k, label="split")
            elif self.Z is not None:
                period = PeriodPoint(Z=self.Z, label="matrix")
            elif self.seed is not None:
                if self.g is None:
                    raise ConfigError("g: a random period point needs g")
                period = PeriodPoint.random(self.g, self.seed)
            else:
                return None
        except DomainError as e:
            raise ConfigError(f"period: {e}") from e
        if self.g is not None and period.g != self.g:
            raise ConfigError(f"g: period matrix is {period.g}x{period.g} but g={self.g}")
        return period

    def dimension(self) -> int:
        if self.g is not None:
            return self.g
        if self.type is not None:
            return self.type.g
        preset = settings.PRESET_ALIASES.get(self.preset, self.preset)
        if preset is not None and preset in settings.PRESETS:
            return settings.PRESETS[preset]["g"]
        for name in ("X", "Z"):
            matrix = getattr(self, name)
            if matrix is not None:
                return len(matrix)
        raise ConfigError("g: cannot infer the dimension; pass --g")

    def bounds(self) -> Tuple[int, int]:
        """(min_h0, max_h0), defaulting to the dimension count and the Iyer bound."""
        g = self.dimension()
        low = self.min_h0 if self.min_h0 is not None else 2 ** (g + 1) - 1
        high = self.max_h0 if self.max_h0 is not None else 2 ** g * math.factorial(g)
        if low > high:
            raise ConfigError(f"min_h0, max_h0: need min_h0 <= max_h0, got {low} > {high}")
        return low, high

    def as_dict(self) -> dict:
        period = {}
        if self.preset is not None:
            period["preset"] = self.preset
        if self.X is not None:
            period["X"] = [list(map(int, row)) for row in self.X]
            period["k"] = {"re": self.k.real, "im": self.k.imag}
        if self.Z is not None:
            period["Z"] = [[{"re": complex(z).real, "im": complex(z).imag} for z in row] for row in self.Z]
        if self.seed is not None:
            period["seed"] = self.seed
        return {
            "g": self.g,
            "period": period,
            "tolerances": self.tolerances().as_dict(),
            "type": str(self.type) if self.type is not None else None,
            "min_h0": self.min_h0,
            "max_h0": self.max_h0,
            "force_numeric": self.force_numeric,
        }


# --- Value coercion ---

def _complex(value: Any, name: str) -> complex:
    if isinstance(value, dict):
        try:
            return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{name}: bad complex number {value!r}") from e
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError as e:
            raise ConfigError(f"{name}: cannot parse complex number '{value}'") from e
    raise ConfigError(f"{name}: expected a complex number, got {value!r}")


def _matrix(value: Any, name: str, integer: bool) -> list:
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise ConfigError(f"{name}: expected a non-empty list of rows")
    n = len(value)
    if any(len(row) != n for row in value):
        raise ConfigError(f"{name}: expected a square {n}x{n} matrix")
    out = []
    for a, row in enumerate(value):
        converted = []
        for b, entry in enumerate(row):
            if integer:
                if isinstance(entry, bool) or not isinstance(entry, (int, float)) or entry != int(entry):
                    raise ConfigError(f"{name}[{a}][{b}]: expected an integer, got {entry!r}")
                converted.append(int(entry))
            else:
                converted.append(_complex(entry, f"{name}[{a}][{b}]"))
        out.append(converted)
    return out


def _typed(value: Any, name: str, kind: type):
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{name}: expected true/false, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name}: expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{name}: expected a string, got {value!r}")
    return value


_SCALARS = {
    "g": int, "seed": int, "dps": int, "min_h0": int, "max_h0": int, "jobs": int,
    "series_tol": float, "rank_tol": float, "accept": float, "reject": float, "zero_slack": float,
    "preset": str, "format": str, "out": str,
    "force_numeric": bool, "confirm_iyer": bool, "escalate": bool, "timings": bool,
}


def coerce_values(raw: Dict[str, Any], origin: str) -> Dict[str, Any]:
    """Validate and convert raw config values; unknown keys are an error."""
    known = {f.name for f in fields(RunConfig)} - {"source"}
    out = {}
    for name, value in raw.items():
        if name not in known:
            raise ConfigError(f"{name}: unknown config key in {origin}")
        if value is None:
            continue
        if name in _SCALARS:
            out[name] = _typed(value, name, _SCALARS[name])
        elif name == "X":
            out[name] = _matrix(value, name, integer=True)
        elif name == "Z":
            out[name] = _matrix(value, name, integer=False)
        elif name == "k":
            out[name] = _complex(value, name)
        elif name == "type":
            try:
                out[name] = value if isinstance(value, PolarizationType) else (
                    PolarizationType(tuple(value)) if isinstance(value, list) else PolarizationType.parse(str(value)))
            except (DomainError, TypeError) as e:
                raise ConfigError(f"type: {e}") from e
    return out


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON config document; syntax errors report line and column."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config: {path}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config: {path} must contain a JSON object")
    logging.debug(f"Loaded config {path} with keys {sorted(raw)}")
    return coerce_values(raw, path)


def load_split_file(path: str) -> Dict[str, Any]:
    """An X file holds either a bare integer matrix or an object with X (and optionally k)."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"X-file: cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"X-file: {path}:{e.lineno}:{e.colno}: {e.msg}") from e
    if isinstance(raw, list):
        raw = {"X": raw}
    if not isinstance(raw, dict) or "X" not in raw:
        raise ConfigError(f"X-file: {path} must hold a matrix or an object with key 'X'")
    return coerce_values({key: raw[key] for key in ("X", "k") if key in raw}, path)


def build_run_config(overrides: Dict[str, Any], config_path: Optional[str] = None,
                     split_path: Optional[str] = None) -> RunConfig:
    """
    Merge settings defaults, the JSON document at config_path, and CLI overrides.

    CLI overrides are already-named RunConfig fields; None means "not given".
    A period source on the command line replaces any period source from the file.
    """
    values: Dict[str, Any] = {}
    source: Dict[str, str] = {}
    if config_path:
        for name, value in load_config_file(config_path).items():
            values[name] = value
            source[name] = config_path

    cli = coerce_values({k: v for k, v in overrides.items() if v is not None}, "command line")
    if split_path:
        cli.update(load_split_file(split_path))
    if any(name in cli for name in PERIOD_SOURCES):
        for name in PERIOD_SOURCES + ("k",):
            if name not in cli:
                values.pop(name, None)
    for name, value in cli.items():
        values[name] = value
        source[name] = "command line"

    return RunConfig(source=source, **values).validate()
