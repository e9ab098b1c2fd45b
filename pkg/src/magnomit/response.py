"""Observable spectra and the closed-form coefficient cascades.

The sideband solver (:mod:`magnomit.sideband`) is the authoritative path
for every shipped spectrum.  This module adds:

* the h1..h8 coefficient block and the script-H cascade, in two variants:
  ``printed`` follows the published closed-form definitions verbatim, while
  ``corrected`` is the cascade obtained by symbolically eliminating the
  7x7 system (it agrees with the solver to machine precision; the printed
  variant does not once G_c != 0, which is exactly why both are kept),
* the output-field / transmission identities,
* phase unwrapping and the finite-difference group delay,
* transparency-window detection on an absorption trace.

All per-point functions broadcast over numpy arrays of detunings.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import SystemParams
from .sideband import cavity_amplitude_oracle

SQRT2 = math.sqrt(2.0)

VARIANTS = ("printed", "corrected")


class PoleEncountered(ArithmeticError):
    """A closed-form divisor vanished relative to its dividend."""


class UnwrapAmbiguity(ValueError):
    """A neighbouring phase jump sits at +-pi: the grid must be refined."""


class StepTooLargeWarning(UserWarning):
    """Group-delay finite difference failed its step-halving check."""


@dataclass(frozen=True)
class HCoefficients:
    """The eight denominator coefficients at one detuning (or grid)."""

    h1: complex
    h2: complex
    h3: complex
    h4: complex
    h5: complex
    h6: complex
    h7: complex
    h8: complex


@dataclass(frozen=True)
class ScriptHCoefficients:
    H1: complex
    H2: complex
    H3: complex
    H4: complex
    H5: complex
    H6: complex
    variant: str = "printed"


@dataclass(frozen=True)
class GroupDelay:
    """Group delay with its step-halving diagnostic."""

    tau_s: float
    tau_halved_s: float
    rel_step_change: float
    step_ok: bool


@dataclass(frozen=True)
class TransparencyWindow:
    """A dip in the absorption trace bracketed by two qualifying maxima."""

    delta_min: float       # rad/s, location of the minimum
    eps_r_min: float       # absorption at the minimum
    depth: float           # min(bracketing maxima) - minimum
    width: float           # rad/s, at half the window's own depth


def h_coefficients(p: SystemParams, delta) -> HCoefficients:
    """h1..h8 exactly as defined; ``delta`` may be a scalar or array."""
    d = delta
    return HCoefficients(
        h1=p.gamma_a + 1j * (p.delta_a - d),
        h2=p.gamma_a + 1j * (p.delta_a + d),
        h3=p.kappa_c + 1j * (p.delta_c_eff - d),
        h4=p.kappa_c + 1j * (p.delta_c_eff + d),
        h5=p.kappa_n + 1j * (p.delta_n_eff - d),
        h6=p.kappa_n + 1j * (p.delta_n_eff + d),
        h7=p.omega_b ** 2 - d ** 2 - 1j * p.gamma_b * d,
        h8=p.omega_b ** 2 - d ** 2 + 1j * p.gamma_b * d,
    )


def _div(num, den):
    """Division guarded against response poles.

    Raises PoleEncountered when |den| < 1e-30 |num| anywhere.
    """
    if np.any(np.abs(den) < 1e-30 * np.abs(num)):
        raise PoleEncountered("divisor vanished relative to its dividend")
    return num / den


def script_h_coefficients(h: HCoefficients, p: SystemParams,
                          variant: str = "printed") -> ScriptHCoefficients:
    """The script-H cascade for the closed-form cavity amplitude.

    ``printed`` implements the published definitions verbatim, squares of
    the (possibly complex) couplings included.  ``corrected`` implements
    the cascade derived by eliminating the sideband system directly:

        H4 = omega_b (|G_c|^2 / (2 H1* h4*) + |G_n|^2 / (2 h6*))
        H3 = -omega_b |G_n|^2 / (2 h5) - i h7
        H5 = H3 + H4
        H6 = omega_b G_c* / sqrt(2)

    with H1 as printed and H2 = i h8* - H4 retained for completeness.
    """
    g2 = p.g_N ** 2
    G_c, G_n = complex(p.G_c), complex(p.G_n)
    wb = p.omega_b
    if variant == "printed":
        H1 = 1.0 + _div(g2, h.h2 * h.h4)
        H2 = 1j * np.conj(h.h8) - wb * (
            _div(G_c ** 2, 2.0 * np.conj(H1) * np.conj(h.h4))
            + _div(G_n ** 2, 2.0 * np.conj(h.h6)))
        H3 = wb * _div(-G_n ** 2, 2.0 * h.h5) - 1j * h.h7
        H4 = wb * (_div(G_c ** 2, np.conj(h.h4) * H1)
                   + _div(G_n ** 2, 2.0 * np.conj(h.h6)))
        H5 = H3 - _div(wb * G_n ** 2 * H4, 2.0 * h.h5 * H2)
        H6 = wb * (G_c / SQRT2) * (1.0 + _div(H4, H2))
    elif variant == "corrected":
        H1 = 1.0 + _div(g2, h.h2 * h.h4)
        H1_conj = 1.0 + _div(g2, np.conj(h.h2) * np.conj(h.h4))
        H4 = wb * (_div(abs(G_c) ** 2, 2.0 * H1_conj * np.conj(h.h4))
                   + _div(abs(G_n) ** 2, 2.0 * np.conj(h.h6)))
        H3 = -wb * _div(abs(G_n) ** 2, 2.0 * h.h5) - 1j * h.h7
        H2 = 1j * np.conj(h.h8) - H4
        H5 = H3 + H4
        H6 = wb * np.conj(G_c) / SQRT2 + 0.0 * H3  # broadcast to h-shape
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ScriptHCoefficients(H1=H1, H2=H2, H3=H3, H4=H4, H5=H5, H6=H6,
                               variant=variant)


def cavity_amplitude_closed_form(p: SystemParams, delta,
                                 variant: str = "printed"):
    """c_- = eps_p / (h3 + g_N^2/h1 - (G_c/sqrt2) H6/H5).

    The bracket divides the probe amplitude; the product reading of the
    same expression has the dimensions of eps_p * (rad/s) and diverges off
    resonance, so it cannot be a cavity amplitude.
    """
    h = h_coefficients(p, delta)
    sh = script_h_coefficients(h, p, variant)
    G_c = complex(p.G_c)
    if G_c == 0:
        coupling_term = 0.0
    else:
        coupling_term = (G_c / SQRT2) * _div(sh.H6, sh.H5)
    bracket = h.h3 + _div(p.g_N ** 2, h.h1) - coupling_term
    return _div(p.eps_p, bracket)


def cavity_amplitude(p: SystemParams, delta, engine: str = "oracle"):
    """Dispatch c_-(delta) to the requested engine.

    ``oracle`` solves the sideband system; ``closed_printed`` and
    ``closed_corrected`` use the respective cascades.  ``delta`` may be a
    scalar or an array; the return matches.
    """
    scalar = np.isscalar(delta)
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    if engine == "oracle":
        c = cavity_amplitude_oracle(p, d)
    elif engine == "closed_printed":
        c = np.asarray(cavity_amplitude_closed_form(p, d, "printed"))
    elif engine == "closed_corrected":
        c = np.asarray(cavity_amplitude_closed_form(p, d, "corrected"))
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return complex(c[0]) if scalar else c


def output_field(c_minus, p: SystemParams):
    """eps_out = 2 kappa_c c_- / eps_p.

    Its real part is the absorption spectrum, its imaginary part the
    dispersion spectrum.
    """
    return 2.0 * p.kappa_c * c_minus / p.eps_p


def transmission(c_minus, p: SystemParams):
    """T = (eps_p - 2 kappa_c c_-) / eps_p = 1 - eps_out."""
    return 1.0 - output_field(c_minus, p)


def phase_profile(t_values) -> np.ndarray:
    """Unwrapped phase of an ordered transmission trace.

    phi_i = Arg[T_i] + 2 pi k_i with k_i chosen so every neighbouring step
    is below pi in magnitude.  A step that lands on +-pi within 1e-9 is
    ambiguous and raises UnwrapAmbiguity: refine the grid.
    """
    t = np.asarray(t_values, dtype=complex)
    raw = np.angle(t)
    if raw.size <= 1:
        return raw
    d = np.diff(raw)
    wrapped = (d + np.pi) % (2.0 * np.pi) - np.pi
    ambiguous = np.abs(np.abs(wrapped) - np.pi) < 1e-9
    if ambiguous.any():
        i = int(np.argmax(ambiguous))
        raise UnwrapAmbiguity(
            f"phase step at grid index {i} -> {i + 1} equals pi; "
            "refine the detuning grid")
    out = np.empty_like(raw)
    out[0] = raw[0]
    out[1:] = raw[0] + np.cumsum(wrapped)
    return out


def group_delay(p: SystemParams, delta: float, fd_step: float | None = None,
                engine: str = "oracle", check_step: bool = True) -> GroupDelay:
    """tau = Im[(1/T) dT/d omega_p] by central finite difference.

    The probe frequency enters only through delta at fixed drive, so the
    derivative is taken in delta.  tau > 0 is slow light, tau < 0 fast
    light.  With ``check_step`` the difference is re-evaluated at half the
    step; disagreement beyond 1% flags the result (``step_ok=False``) and
    emits StepTooLargeWarning rather than silently returning it.
    """
    if fd_step is None:
        fd_step = 1e-6 * p.omega_b
    if fd_step <= 0.0:
        raise ValueError("fd_step must be > 0")

    def tau_at(step: float) -> float:
        d = np.array([delta - step, delta, delta + step])
        t = transmission(cavity_amplitude(p, d, engine), p)
        return float((((t[2] - t[0]) / (2.0 * step)) / t[1]).imag)

    tau = tau_at(fd_step)
    if not check_step:
        return GroupDelay(tau, math.nan, math.nan, True)
    tau_half = tau_at(fd_step / 2.0)
    scale = max(abs(tau), abs(tau_half))
    rel = abs(tau - tau_half) / scale if scale > 0.0 else 0.0
    ok = rel <= 0.01
    if not ok:
        warnings.warn(
            f"group delay at delta={delta:g} changed by {rel:.2%} under "
            f"step halving; reduce fd_step", StepTooLargeWarning)
    return GroupDelay(tau, tau_half, rel, ok)


def group_delay_profile(deltas: np.ndarray, p: SystemParams,
                        fd_step: float | None = None,
                        engine: str = "oracle") -> np.ndarray:
    """Vectorized tau over a grid (no per-point step check)."""
    if fd_step is None:
        fd_step = 1e-6 * p.omega_b
    d = np.asarray(deltas, dtype=float)
    stacked = np.concatenate([d - fd_step, d, d + fd_step])
    t = transmission(cavity_amplitude(p, stacked, engine), p)
    n = d.size
    tm, t0, tp = t[:n], t[n:2 * n], t[2 * n:]
    return ((tp - tm) / (2.0 * fd_step) / t0).imag


def find_transparency_windows(spectrum, prominence: float = 0.05
                              ) -> list[TransparencyWindow]:
    """Detect transparency windows in a sorted (delta, eps_R) trace.

    A window is a local minimum bracketed by a local maximum on each side,
    both exceeding the minimum by at least prominence * (global max -
    global min).  The reported width is taken where the trace crosses
    halfway up the window's own depth, interpolated linearly.

    Returns an empty list for monotone traces.
    """
    if not 0.0 < prominence < 1.0:
        raise ValueError("prominence must lie in (0, 1)")
    pts = list(spectrum)
    deltas = np.asarray([q[0] for q in pts], dtype=float)
    e_r = np.asarray([q[1] for q in pts], dtype=float)
    n = e_r.size
    if n < 3:
        return []
    if np.any(np.diff(deltas) <= 0.0):
        raise ValueError("spectrum must be sorted by strictly increasing delta")

    rng = float(e_r.max() - e_r.min())
    if rng == 0.0:
        return []
    threshold = prominence * rng

    minima = [i for i in range(1, n - 1)
              if e_r[i] < e_r[i - 1] and e_r[i] <= e_r[i + 1]]
    maxima = [i for i in range(1, n - 1)
              if e_r[i] > e_r[i - 1] and e_r[i] >= e_r[i + 1]]

    windows: list[TransparencyWindow] = []
    for i in minima:
        left = [j for j in maxima if j < i]
        right = [j for j in maxima if j > i]
        if not left or not right:
            continue
        jl, jr = left[-1], right[0]
        if (e_r[jl] - e_r[i] < threshold) or (e_r[jr] - e_r[i] < threshold):
            continue
        depth = min(e_r[jl], e_r[jr]) - e_r[i]
        level = e_r[i] + 0.5 * depth
        windows.append(TransparencyWindow(
            delta_min=float(deltas[i]),
            eps_r_min=float(e_r[i]),
            depth=float(depth),
            width=_width_at_level(deltas, e_r, i, jl, jr, level),
        ))
    return windows


def _width_at_level(deltas: np.ndarray, e_r: np.ndarray, i: int,
                    jl: int, jr: int, level: float) -> float:
    """Linear-interpolated crossing distance of ``level`` around minimum i."""
    k = i
    while k > jl and e_r[k] < level:
        k -= 1
    left = _cross(deltas[k], e_r[k], deltas[k + 1], e_r[k + 1], level) \
        if e_r[k] >= level else deltas[k]
    k = i
    while k < jr and e_r[k] < level:
        k += 1
    right = _cross(deltas[k - 1], e_r[k - 1], deltas[k], e_r[k], level) \
        if e_r[k] >= level else deltas[k]
    return float(right - left)


def _cross(x0: float, y0: float, x1: float, y1: float, level: float) -> float:
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)
