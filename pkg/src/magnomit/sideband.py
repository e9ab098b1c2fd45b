"""Frequency-domain sideband solver: the authoritative response engine.

Linearizing the mean-field equations of motion around the steady state with
the ansatz  <X> = X0 + X_- e^{-i delta t} + X_+ e^{+i delta t}  and
eliminating the mechanical momentum (p_- = -i delta q_- / omega_b) leaves a
dense 7x7 complex linear system in

    x = (a_-, c_-, n_-, a_+^*, c_+^*, n_+^*, q_-),

driven by the probe amplitude eps_p in the c_- row.  Hermiticity of the
mechanical displacement is imposed structurally (q_+ = q_-^*), which is why
q_+ is not an unknown.

The rows, with h-coefficients as in :mod:`magnomit.response`:

    h1 a_-   + i g_N c_-                                   = 0
    i g_N a_- + h3 c_-                 - (G_c/sqrt2) q_-   = eps_p
    h5 n_-                             + (G_n/sqrt2) q_-   = 0
    h2* a_+* - i g_N c_+*                                  = 0
    -i g_N a_+* + h4* c_+*             - (G_c*/sqrt2) q_-  = 0
    h6* n_+*                           + (G_n*/sqrt2) q_-  = 0
    h7 q_- - (i omega_b/sqrt2) [G_c* c_- - G_c c_+* - G_n* n_- + G_n n_+*] = 0

The mechanical-row sign convention is locked by the reduction tests in the
test suite rather than trusted from any single derivation pass.

Systems are solved by dense complex Gaussian elimination with partial
pivoting.  A batched variant runs the same elimination vectorized across a
whole detuning grid; the two paths are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams

SQRT2 = math.sqrt(2.0)

#: pivot magnitudes below this are treated as an exact response pole
PIVOT_FLOOR = 1e-300

#: index of each unknown in the solution vector
A_MINUS, C_MINUS, N_MINUS, A_PLUS_CONJ, C_PLUS_CONJ, N_PLUS_CONJ, Q_MINUS = range(7)


class SingularSystem(ArithmeticError):
    """Pivot underflow: the parameter set sits exactly on a response pole."""

    def __init__(self, delta: float):
        self.delta = delta
        super().__init__(f"sideband system singular at delta = {delta!r} rad/s")


@dataclass(frozen=True)
class SidebandSystem:
    """Assembled coefficient matrix and drive vector at one detuning."""

    matrix: np.ndarray  # (7, 7) complex
    rhs: np.ndarray     # (7,) complex, single nonzero entry eps_p
    delta: float


@dataclass(frozen=True)
class SidebandSolution:
    """Fluctuation amplitudes at one detuning, plus the solve residual.

    ``residual`` is the backward error
    ||M x - b||_inf / (||M||_inf ||x||_inf + ||b||_inf); the mechanical row
    scales as omega_b^2, so a residual relative to ||b|| alone would be
    meaningless.
    """

    a_minus: complex
    c_minus: complex
    n_minus: complex
    a_plus_conj: complex
    c_plus_conj: complex
    n_plus_conj: complex
    q_minus: complex
    delta: float
    residual: float


def assemble_sideband_system(p: SystemParams, delta: float) -> SidebandSystem:
    """Build the 7x7 system for validated parameters at one detuning."""
    m, r = _assemble_batch(p, np.asarray([float(delta)]))
    return SidebandSystem(matrix=m[0], rhs=r[0], delta=float(delta))


def _assemble_batch(p: SystemParams, deltas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(N,7,7) matrices and (N,7) drive vectors over a detuning array."""
    d = np.asarray(deltas, dtype=float)
    n = d.shape[0]
    g_N = p.g_N
    G_c, G_n = complex(p.G_c), complex(p.G_n)
    h1 = p.gamma_a + 1j * (p.delta_a - d)
    h3 = p.kappa_c + 1j * (p.delta_c_eff - d)
    h5 = p.kappa_n + 1j * (p.delta_n_eff - d)
    h2c = p.gamma_a - 1j * (p.delta_a + d)      # h2*
    h4c = p.kappa_c - 1j * (p.delta_c_eff + d)  # h4*
    h6c = p.kappa_n - 1j * (p.delta_n_eff + d)  # h6*
    h7 = p.omega_b ** 2 - d ** 2 - 1j * p.gamma_b * d

    m = np.zeros((n, 7, 7), dtype=complex)
    m[:, A_MINUS, A_MINUS] = h1
    m[:, A_MINUS, C_MINUS] = 1j * g_N
    m[:, C_MINUS, A_MINUS] = 1j * g_N
    m[:, C_MINUS, C_MINUS] = h3
    m[:, C_MINUS, Q_MINUS] = -G_c / SQRT2
    m[:, N_MINUS, N_MINUS] = h5
    m[:, N_MINUS, Q_MINUS] = G_n / SQRT2
    m[:, A_PLUS_CONJ, A_PLUS_CONJ] = h2c
    m[:, A_PLUS_CONJ, C_PLUS_CONJ] = -1j * g_N
    m[:, C_PLUS_CONJ, A_PLUS_CONJ] = -1j * g_N
    m[:, C_PLUS_CONJ, C_PLUS_CONJ] = h4c
    m[:, C_PLUS_CONJ, Q_MINUS] = -np.conj(G_c) / SQRT2
    m[:, N_PLUS_CONJ, N_PLUS_CONJ] = h6c
    m[:, N_PLUS_CONJ, Q_MINUS] = np.conj(G_n) / SQRT2
    f = 1j * p.omega_b / SQRT2
    m[:, Q_MINUS, C_MINUS] = -f * np.conj(G_c)
    m[:, Q_MINUS, C_PLUS_CONJ] = f * G_c
    m[:, Q_MINUS, N_MINUS] = f * np.conj(G_n)
    m[:, Q_MINUS, N_PLUS_CONJ] = -f * G_n
    m[:, Q_MINUS, Q_MINUS] = h7

    rhs = np.zeros((n, 7), dtype=complex)
    rhs[:, C_MINUS] = p.eps_p
    return m, rhs


def gauss_solve(matrix: np.ndarray, rhs: np.ndarray,
                delta: float = math.nan) -> np.ndarray:
    """Solve one dense complex system by elimination with partial pivoting.

    Raises SingularSystem(delta) when a pivot magnitude underflows
    PIVOT_FLOOR.
    """
    a = np.array(matrix, dtype=complex)
    b = np.array(rhs, dtype=complex)
    n = a.shape[0]
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) < PIVOT_FLOOR:
            raise SingularSystem(delta)
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            b[[k, piv]] = b[[piv, k]]
        fac = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= fac[:, None] * a[k, k:]
        b[k + 1:] -= fac * b[k]
    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def gauss_solve_batch(matrices: np.ndarray, rhs: np.ndarray,
                      deltas: np.ndarray | None = None) -> np.ndarray:
    """Same elimination, vectorized across the leading batch axis.

    Row interchanges and elimination steps are performed simultaneously for
    every system; per-system pivot selection keeps the algorithm identical
    to :func:`gauss_solve` (the tests assert bitwise-insensitive agreement).
    """
    a = np.array(matrices, dtype=complex)
    b = np.array(rhs, dtype=complex)
    nbatch, n, _ = a.shape
    idx = np.arange(nbatch)
    for k in range(n):
        piv = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        bad = np.abs(a[idx, piv, k]) < PIVOT_FLOOR
        if bad.any():
            where = int(np.argmax(bad))
            d = float(deltas[where]) if deltas is not None else math.nan
            raise SingularSystem(d)
        rows_k = a[idx, k].copy()
        a[idx, k] = a[idx, piv]
        a[idx, piv] = rows_k
        bk = b[idx, k].copy()
        b[idx, k] = b[idx, piv]
        b[idx, piv] = bk
        fac = a[:, k + 1:, k] / a[:, k, k][:, None]
        a[:, k + 1:, k:] -= fac[:, :, None] * a[:, k, k:][:, None, :]
        b[:, k + 1:] -= fac * b[:, k][:, None]
    x = np.zeros((nbatch, n), dtype=complex)
    for k in range(n - 1, -1, -1):
        acc = np.einsum("bj,bj->b", a[:, k, k + 1:], x[:, k + 1:])
        x[:, k] = (b[:, k] - acc) / a[:, k, k]
    return x


def backward_error(matrix: np.ndarray, x: np.ndarray, rhs: np.ndarray) -> float:
    """||Mx - b||_inf / (||M||_inf ||x||_inf + ||b||_inf)."""
    r = matrix @ x - rhs
    denom = (np.abs(matrix).sum(axis=-1).max() * np.abs(x).max()
             + np.abs(rhs).max())
    return float(np.abs(r).max() / denom)


def backward_error_batch(matrices: np.ndarray, x: np.ndarray,
                         rhs: np.ndarray) -> np.ndarray:
    r = np.einsum("bij,bj->bi", matrices, x) - rhs
    denom = (np.abs(matrices).sum(axis=2).max(axis=1) * np.abs(x).max(axis=1)
             + np.abs(rhs).max(axis=1))
    return np.abs(r).max(axis=1) / denom


def solve_sideband(system: SidebandSystem) -> SidebandSolution:
    """Solve one assembled system and record its residual."""
    x = gauss_solve(system.matrix, system.rhs, system.delta)
    res = backward_error(system.matrix, x, system.rhs)
    return SidebandSolution(
        a_minus=complex(x[A_MINUS]),
        c_minus=complex(x[C_MINUS]),
        n_minus=complex(x[N_MINUS]),
        a_plus_conj=complex(x[A_PLUS_CONJ]),
        c_plus_conj=complex(x[C_PLUS_CONJ]),
        n_plus_conj=complex(x[N_PLUS_CONJ]),
        q_minus=complex(x[Q_MINUS]),
        delta=system.delta,
        residual=res,
    )


def cavity_amplitude_oracle(p: SystemParams, deltas: np.ndarray,
                            with_residuals: bool = False):
    """c_- over a detuning grid via the batched elimination.

    Returns the complex amplitudes, or ``(amplitudes, residuals)`` when
    ``with_residuals`` is set.
    """
    d = np.atleast_1d(np.asarray(deltas, dtype=float))
    m, r = _assemble_batch(p, d)
    x = gauss_solve_batch(m, r, d)
    c = x[:, C_MINUS]
    if with_residuals:
        return c, backward_error_batch(m, x, r)
    return c
