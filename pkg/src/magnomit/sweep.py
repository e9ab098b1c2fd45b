"""Sweep orchestration: grids of response points, engine comparison, output.

A sweep evaluates c_- on the detuning grid and at delta +- fd_step (for the
group delay), derives every observable, unwraps the phase over the ordered
grid, and returns one ResponsePoint per delta.  Points may be evaluated in
parallel chunks; results are always assembled in grid order, so the output
is deterministic regardless of the thread count.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .params import SystemParams
from .response import (cavity_amplitude, output_field, phase_profile,
                       transmission)

ENGINES = ("oracle", "closed_printed", "closed_corrected")

CSV_COLUMNS = ("delta_rad_s", "eps_R", "eps_I", "T_re", "T_im", "T_sq",
               "phase_rad", "tau_s")


@dataclass(frozen=True)
class SweepSpec:
    """Detuning grid plus numerical knobs for one sweep."""

    delta_start: float           # rad/s
    delta_stop: float            # rad/s
    n_points: int = 2001
    fd_step: float | None = None  # rad/s; default 1e-6 * omega_b
    prominence: float = 0.05
    engine: str = "oracle"

    def __post_init__(self):
        if not self.delta_start < self.delta_stop:
            raise ValueError("delta_start must be < delta_stop")
        if self.n_points < 3:
            raise ValueError("n_points must be >= 3")
        if self.fd_step is not None and self.fd_step <= 0.0:
            raise ValueError("fd_step must be > 0")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")

    @staticmethod
    def default_for(p: SystemParams, engine: str = "oracle",
                    n_points: int = 2001, prominence: float = 0.05) -> "SweepSpec":
        """The standard window: delta/omega_b in [0.5, 1.5]."""
        return SweepSpec(delta_start=0.5 * p.omega_b,
                         delta_stop=1.5 * p.omega_b,
                         n_points=n_points,
                         prominence=prominence,
                         engine=engine)

    def grid(self) -> np.ndarray:
        return np.linspace(self.delta_start, self.delta_stop, self.n_points)


@dataclass(frozen=True)
class ResponsePoint:
    """delta plus every derived observable at that detuning."""

    delta: float
    c_minus: complex
    eps_out: complex
    T: complex
    T_sq: float
    phase: float
    tau: float


@dataclass(frozen=True)
class SweepResult:
    points: list[ResponsePoint]
    spec: SweepSpec
    params: SystemParams
    max_residual: float = math.nan

    def column(self, name: str) -> np.ndarray:
        if name == "delta_rad_s":
            return np.array([q.delta for q in self.points])
        if name == "eps_R":
            return np.array([q.eps_out.real for q in self.points])
        if name == "eps_I":
            return np.array([q.eps_out.imag for q in self.points])
        if name == "T_re":
            return np.array([q.T.real for q in self.points])
        if name == "T_im":
            return np.array([q.T.imag for q in self.points])
        if name == "T_sq":
            return np.array([q.T_sq for q in self.points])
        if name == "phase_rad":
            return np.array([q.phase for q in self.points])
        if name == "tau_s":
            return np.array([q.tau for q in self.points])
        raise KeyError(name)


def _amplitudes(p: SystemParams, deltas: np.ndarray, engine: str,
                threads: int) -> np.ndarray:
    """c_- over an arbitrary delta array, optionally chunked over threads."""
    if threads <= 1 or deltas.size < 64:
        return cavity_amplitude(p, deltas, engine)
    chunks = np.array_split(np.arange(deltas.size), threads)
    out = np.empty(deltas.size, dtype=complex)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [(idx, pool.submit(cavity_amplitude, p, deltas[idx], engine))
                   for idx in chunks if idx.size]
        for idx, fut in futures:
            out[idx] = fut.result()
    return out


def run_sweep(p: SystemParams, spec: SweepSpec, threads: int = 1) -> SweepResult:
    """One ResponsePoint per grid delta, ordered by delta.

    The oracle engine additionally records the worst linear-system residual
    across the grid (including the finite-difference side points).
    """
    deltas = spec.grid()
    fd = spec.fd_step if spec.fd_step is not None else 1e-6 * p.omega_b
    stacked = np.concatenate([deltas, deltas - fd, deltas + fd])

    max_residual = math.nan
    if spec.engine == "oracle":
        from .sideband import cavity_amplitude_oracle
        c_all, res = cavity_amplitude_oracle(p, stacked, with_residuals=True)
        max_residual = float(res.max())
    else:
        c_all = _amplitudes(p, stacked, spec.engine, threads)

    n = deltas.size
    c0, cm, cp = c_all[:n], c_all[n:2 * n], c_all[2 * n:]
    t0 = transmission(c0, p)
    tau = ((transmission(cp, p) - transmission(cm, p)) / (2.0 * fd) / t0).imag
    eps = output_field(c0, p)
    phase = phase_profile(t0)

    points = [ResponsePoint(delta=float(deltas[i]),
                            c_minus=complex(c0[i]),
                            eps_out=complex(eps[i]),
                            T=complex(t0[i]),
                            T_sq=float(abs(t0[i]) ** 2),
                            phase=float(phase[i]),
                            tau=float(tau[i]))
              for i in range(n)]
    return SweepResult(points=points, spec=spec, params=p,
                       max_residual=max_residual)


@dataclass(frozen=True)
class EngineComparison:
    """Per-delta relative |c_-| differences of each closed form vs oracle."""

    deltas: np.ndarray
    rel_printed: np.ndarray
    rel_corrected: np.ndarray
    max_printed: float = field(init=False)
    mean_printed: float = field(init=False)
    max_corrected: float = field(init=False)
    mean_corrected: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_printed", float(self.rel_printed.max()))
        object.__setattr__(self, "mean_printed", float(self.rel_printed.mean()))
        object.__setattr__(self, "max_corrected", float(self.rel_corrected.max()))
        object.__setattr__(self, "mean_corrected", float(self.rel_corrected.mean()))


def compare_engines(p: SystemParams, spec: SweepSpec) -> EngineComparison:
    deltas = spec.grid()
    oracle = cavity_amplitude(p, deltas, "oracle")
    printed = cavity_amplitude(p, deltas, "closed_printed")
    corrected = cavity_amplitude(p, deltas, "closed_corrected")
    scale = np.abs(oracle)
    return EngineComparison(
        deltas=deltas,
        rel_printed=np.abs(printed - oracle) / scale,
        rel_corrected=np.abs(corrected - oracle) / scale,
    )


def write_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for q in result.points:
            w.writerow([repr(q.delta), repr(q.eps_out.real), repr(q.eps_out.imag),
                        repr(q.T.real), repr(q.T.imag), repr(q.T_sq),
                        repr(q.phase), repr(q.tau)])


def _params_meta(p: SystemParams) -> dict:
    return {
        "kappa_c_rad_s": p.kappa_c,
        "kappa_n_rad_s": p.kappa_n,
        "gamma_a_rad_s": p.gamma_a,
        "gamma_b_rad_s": p.gamma_b,
        "omega_b_rad_s": p.omega_b,
        "delta_a_rad_s": p.delta_a,
        "delta_c_eff_rad_s": p.delta_c_eff,
        "delta_n_eff_rad_s": p.delta_n_eff,
        "g_N_rad_s": p.g_N,
        "G_c_rad_s": [p.G_c.real, p.G_c.imag],
        "G_n_rad_s": [p.G_n.real, p.G_n.imag],
        "eps_p": p.eps_p,
    }


def write_json(result: SweepResult, path: str) -> None:
    meta = _params_meta(result.params)
    meta.update({
        "engine": result.spec.engine,
        "n_points": result.spec.n_points,
        "delta_start_rad_s": result.spec.delta_start,
        "delta_stop_rad_s": result.spec.delta_stop,
        "max_residual": None if math.isnan(result.max_residual)
        else result.max_residual,
    })
    rows = [{
        "delta_rad_s": q.delta,
        "eps_R": q.eps_out.real,
        "eps_I": q.eps_out.imag,
        "T_re": q.T.real,
        "T_im": q.T.imag,
        "T_sq": q.T_sq,
        "phase_rad": q.phase,
        "tau_s": q.tau,
    } for q in result.points]
    with open(path, "w") as fh:
        json.dump({"meta": meta, "rows": rows}, fh, indent=1)
        fh.write("\n")


def write_comparison_csv(cmp: EngineComparison, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta_rad_s", "rel_diff_printed", "rel_diff_corrected"])
        for i in range(cmp.deltas.size):
            w.writerow([repr(float(cmp.deltas[i])),
                        repr(float(cmp.rel_printed[i])),
                        repr(float(cmp.rel_corrected[i]))])
