"""Plain-text run configuration: ``key = value`` lines, frequencies in Hz.

Every frequency-like entry is an ordinary frequency nu (Hz); the loader
multiplies by 2*pi once so the rest of the package works in rad/s.
Complex couplings are written as ``re+imj`` (Python complex syntax).
Lines starting with ``#`` and blank lines are ignored.

Exactly one parameter mode must be present:

* effective mode  - delta_c_eff, delta_n_eff, G_c, G_n
* raw-drive mode  - delta_c_bare, delta_n_bare, g_c_bare, g_n_bare,
  omega_L_rabi

Shared (always required): kappa_c, kappa_n, gamma_a, gamma_b, nu_b,
delta_a, g_N.  Optional: eps_p (default 1).  Sweep keys are optional and
default sensibly: delta_start (0.5 nu_b), delta_stop (1.5 nu_b), n_points
(2001), fd_step (1e-6 nu_b), prominence (0.05), engine (oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .params import RawDriveParams, SystemParams, validate_params, validate_raw_params
from .sweep import ENGINES, SweepSpec

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Base class for configuration failures (CLI exit code 2)."""


class ParseError(ConfigError):
    def __init__(self, path: str, line_no: int, detail: str):
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {detail}")


class MissingField(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)


class ConflictingModes(ConfigError):
    def __init__(self, detail: str):
        super().__init__(detail)


class UnknownKey(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)


_SHARED_REAL = ("kappa_c", "kappa_n", "gamma_a", "gamma_b", "nu_b",
                "delta_a", "g_N")
_EFFECTIVE_ONLY = ("delta_c_eff", "delta_n_eff", "G_c", "G_n")
_RAW_ONLY = ("delta_c_bare", "delta_n_bare", "g_c_bare", "g_n_bare",
             "omega_L_rabi")
_SWEEP_KEYS = ("delta_start", "delta_stop", "n_points", "fd_step",
               "prominence", "engine")
_OPTIONAL = ("eps_p",)

_ALL_KEYS = set(_SHARED_REAL) | set(_EFFECTIVE_ONLY) | set(_RAW_ONLY) \
    | set(_SWEEP_KEYS) | set(_OPTIONAL)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters plus sweep settings from one config file."""

    params: SystemParams
    raw_params: RawDriveParams | None
    sweep: SweepSpec
    mode: str  # "effective" | "raw"


def _parse_lines(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    text = Path(path).read_text()
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(path, line_no, f"expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if not key or not value:
            raise ParseError(path, line_no, f"empty key or value in {line!r}")
        if key not in _ALL_KEYS:
            raise ParseError(path, line_no, f"unknown key {key!r}")
        if key in entries:
            raise ParseError(path, line_no, f"duplicate key {key!r}")
        entries[key] = value
    return entries


def _to_float(entries: dict[str, str], key: str) -> float:
    try:
        return float(entries[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _to_complex(entries: dict[str, str], key: str) -> complex:
    try:
        return complex(entries[key].replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def load_config(path: str, engine: str | None = None,
                gc_hz: float | None = None, gn_hz: float | None = None,
                n_points: int | None = None) -> RunConfig:
    """Load, convert to angular units, and validate one config file.

    The keyword arguments implement the CLI overrides: engine choice,
    coupling overrides in Hz, and the grid size.
    """
    entries = _parse_lines(path)

    eff_present = [k for k in _EFFECTIVE_ONLY if k in entries]
    raw_present = [k for k in _RAW_ONLY if k in entries]
    if eff_present and raw_present:
        raise ConflictingModes(
            f"both effective-mode ({eff_present[0]}) and raw-mode "
            f"({raw_present[0]}) keys present")
    mode = "raw" if raw_present else "effective"

    for key in _SHARED_REAL:
        if key not in entries:
            raise MissingField(key)
    needed = _RAW_ONLY if mode == "raw" else _EFFECTIVE_ONLY
    for key in needed:
        if key not in entries:
            raise MissingField(key)

    shared = {k: TWO_PI * _to_float(entries, k) for k in _SHARED_REAL}
    eps_p = _to_float(entries, "eps_p") if "eps_p" in entries else 1.0
    nu_b = shared.pop("nu_b")

    raw_params: RawDriveParams | None = None
    if mode == "raw":
        raw_params = RawDriveParams(
            kappa_c=shared["kappa_c"], kappa_n=shared["kappa_n"],
            gamma_a=shared["gamma_a"], gamma_b=shared["gamma_b"],
            omega_b=nu_b, delta_a=shared["delta_a"],
            delta_c_bare=TWO_PI * _to_float(entries, "delta_c_bare"),
            delta_n_bare=TWO_PI * _to_float(entries, "delta_n_bare"),
            g_N=shared["g_N"],
            g_c_bare=TWO_PI * _to_float(entries, "g_c_bare"),
            g_n_bare=TWO_PI * _to_float(entries, "g_n_bare"),
            omega_L_rabi=TWO_PI * _to_float(entries, "omega_L_rabi"),
            eps_p=eps_p,
        )
        validate_raw_params(raw_params)
        from .params import raw_to_system_params
        params = raw_to_system_params(raw_params)
    else:
        params = SystemParams(
            kappa_c=shared["kappa_c"], kappa_n=shared["kappa_n"],
            gamma_a=shared["gamma_a"], gamma_b=shared["gamma_b"],
            omega_b=nu_b, delta_a=shared["delta_a"],
            delta_c_eff=TWO_PI * _to_float(entries, "delta_c_eff"),
            delta_n_eff=TWO_PI * _to_float(entries, "delta_n_eff"),
            g_N=shared["g_N"],
            G_c=TWO_PI * _to_complex(entries, "G_c"),
            G_n=TWO_PI * _to_complex(entries, "G_n"),
            eps_p=eps_p,
        )

    if gc_hz is not None:
        params = params.with_couplings(G_c=TWO_PI * gc_hz)
    if gn_hz is not None:
        params = params.with_couplings(G_n=TWO_PI * gn_hz)
    validate_params(params)

    delta_start = TWO_PI * _to_float(entries, "delta_start") \
        if "delta_start" in entries else 0.5 * params.omega_b
    delta_stop = TWO_PI * _to_float(entries, "delta_stop") \
        if "delta_stop" in entries else 1.5 * params.omega_b
    npts = n_points if n_points is not None else (
        int(_to_float(entries, "n_points")) if "n_points" in entries else 2001)
    fd_step = TWO_PI * _to_float(entries, "fd_step") \
        if "fd_step" in entries else None
    prominence = _to_float(entries, "prominence") \
        if "prominence" in entries else 0.05
    eng = engine if engine is not None else entries.get("engine", "oracle")
    if eng not in ENGINES:
        raise ConfigError(f"engine: must be one of {ENGINES}, got {eng!r}")

    try:
        sweep = SweepSpec(delta_start=delta_start, delta_stop=delta_stop,
                          n_points=npts, fd_step=fd_step,
                          prominence=prominence, engine=eng)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return RunConfig(params=params, raw_params=raw_params, sweep=sweep,
                     mode=mode)
