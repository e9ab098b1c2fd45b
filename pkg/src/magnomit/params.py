"""Physical parameters, validation, and the zero-order (steady-state) problem.

All frequency-like quantities are angular (rad/s) throughout the package.
Config files use ordinary frequencies in Hz; the conversion happens once,
at load time (see :mod:`magnomit.config`).

Two parameter modes exist:

* effective mode (:class:`SystemParams`) - the effective couplings ``G_c``,
  ``G_n`` and the effective detunings are direct inputs.  This is the mode
  all spectra are computed in.
* raw-drive mode (:class:`RawDriveParams`) - bare couplings plus the magnon
  Rabi drive.  :func:`solve_magnon_steady_state` finds the self-consistent
  static displacement and magnon amplitude, from which the effective
  quantities follow.  Because the cavity itself carries no zero-order drive,
  this mode always yields ``G_c = 0``; it exists as a consistency tool.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

SQRT2 = math.sqrt(2.0)


class ParamError(ValueError):
    """Base class for parameter validation failures."""

    def __init__(self, field: str, detail: str = ""):
        self.field = field
        super().__init__(f"{field}: {detail}" if detail else field)


class NonPositiveRate(ParamError):
    """A decay rate or resonance frequency that must be > 0 is not."""


class NonFiniteValue(ParamError):
    """A parameter contains NaN or Inf."""


class NegativeCoupling(ParamError):
    """The collective atom-cavity coupling g_N must be >= 0."""


class NoConvergence(RuntimeError):
    """Fixed-point iteration hit max_iter; carries the last residual."""

    def __init__(self, residual: float, max_iter: int):
        self.residual = residual
        self.max_iter = max_iter
        super().__init__(
            f"steady state not converged after {max_iter} iterations "
            f"(residual {residual:.3e})"
        )


@dataclass(frozen=True)
class SystemParams:
    """One physical configuration in effective-coupling form.

    Attributes
    ----------
    kappa_c, kappa_n : float
        Cavity / magnon amplitude decay rates, rad/s.
    gamma_a, gamma_b : float
        Atomic / mechanical decay rates, rad/s.
    omega_b : float
        Mechanical resonance frequency, rad/s.
    delta_a : float
        Atom-drive detuning, rad/s.
    delta_c_eff, delta_n_eff : float
        Effective cavity / magnon detunings (bare detuning shifted by the
        static mechanical displacement), rad/s.
    g_N : float
        Collective atom-cavity coupling, rad/s (real, >= 0).
    G_c, G_n : complex
        Effective opto- / magnomechanical couplings, rad/s.
    eps_p : float
        Probe amplitude; pure normalization, every reported spectrum is
        invariant under rescaling it.
    """

    kappa_c: float
    kappa_n: float
    gamma_a: float
    gamma_b: float
    omega_b: float
    delta_a: float
    delta_c_eff: float
    delta_n_eff: float
    g_N: float
    G_c: complex
    G_n: complex
    eps_p: float = 1.0

    def with_couplings(self, G_c: complex | None = None,
                       G_n: complex | None = None) -> "SystemParams":
        """Copy with one or both effective couplings replaced."""
        kw = {}
        if G_c is not None:
            kw["G_c"] = complex(G_c)
        if G_n is not None:
            kw["G_n"] = complex(G_n)
        return replace(self, **kw)


@dataclass(frozen=True)
class RawDriveParams:
    """Bare-coupling configuration with an explicit magnon drive.

    ``g_c_bare`` and ``delta_c_bare`` are carried so the effective cavity
    detuning can be formed after the static displacement is known.
    """

    kappa_c: float
    kappa_n: float
    gamma_a: float
    gamma_b: float
    omega_b: float
    delta_a: float
    delta_c_bare: float
    delta_n_bare: float
    g_N: float
    g_c_bare: float
    g_n_bare: float
    omega_L_rabi: float
    eps_p: float = 1.0


@dataclass(frozen=True)
class SteadyState:
    """Zero-order amplitudes and the effective detunings they induce."""

    a0: complex
    c0: complex
    n0: complex
    q0: float
    delta_c_eff: float
    delta_n_eff: float
    residual: float
    multiple_roots: bool = False


_RATE_FIELDS = ("kappa_c", "kappa_n", "gamma_a", "gamma_b", "omega_b")
_REAL_FIELDS = _RATE_FIELDS + ("delta_a", "delta_c_eff", "delta_n_eff",
                               "g_N", "eps_p")


def validate_params(p: SystemParams) -> SystemParams:
    """Check all invariants; return ``p`` unchanged if they hold.

    Raises the error naming the first violated field, in declaration order:
    rates and omega_b strictly positive, every real field finite, g_N >= 0,
    G_c and G_n finite.
    """
    for name in _REAL_FIELDS:
        v = getattr(p, name)
        if not math.isfinite(v):
            raise NonFiniteValue(name, f"value {v!r}")
        if name in _RATE_FIELDS and v <= 0.0:
            raise NonPositiveRate(name, f"value {v!r}")
    if p.g_N < 0.0:
        raise NegativeCoupling("g_N", f"value {p.g_N!r}")
    for name in ("G_c", "G_n"):
        v = complex(getattr(p, name))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NonFiniteValue(name, f"value {v!r}")
    return p


def validate_raw_params(p: RawDriveParams) -> RawDriveParams:
    """Invariants of the raw-drive mode; same error conventions."""
    for name in _RATE_FIELDS:
        v = getattr(p, name)
        if not math.isfinite(v):
            raise NonFiniteValue(name, f"value {v!r}")
        if v <= 0.0:
            raise NonPositiveRate(name, f"value {v!r}")
    for name in ("delta_a", "delta_c_bare", "delta_n_bare", "g_N",
                 "g_c_bare", "g_n_bare", "omega_L_rabi", "eps_p"):
        v = getattr(p, name)
        if not math.isfinite(v):
            raise NonFiniteValue(name, f"value {v!r}")
    if p.g_N < 0.0:
        raise NegativeCoupling("g_N", f"value {p.g_N!r}")
    if p.omega_L_rabi < 0.0:
        raise NegativeCoupling("omega_L_rabi", f"value {p.omega_L_rabi!r}")
    return p


def effective_couplings(g_c: float, c0: complex,
                        g_n: float, n0: complex) -> tuple[complex, complex]:
    """Effective couplings from bare couplings and zero-order amplitudes.

    G_c = i*sqrt(2)*g_c*c0 and G_n = i*sqrt(2)*g_n*n0.
    """
    return 1j * SQRT2 * g_c * c0, 1j * SQRT2 * g_n * n0


def steady_state_cubic_coeffs(p: RawDriveParams) -> tuple[float, float, float, float]:
    """Coefficients (a3, a2, a1, a0) of the real cubic satisfied by q0.

    Substituting |n0|^2 = Omega_L^2 / (kappa_n^2 + (Delta_n + g_n q0)^2)
    into q0*omega_b + g_n*|n0|^2 = 0 and clearing the denominator gives

        omega_b*g_n^2 * q^3 + 2*omega_b*g_n*Delta_n * q^2
        + omega_b*(kappa_n^2 + Delta_n^2) * q + g_n*Omega_L^2 = 0.
    """
    gn, dn, kn, wb = p.g_n_bare, p.delta_n_bare, p.kappa_n, p.omega_b
    return (wb * gn * gn,
            2.0 * wb * gn * dn,
            wb * (kn * kn + dn * dn),
            gn * p.omega_L_rabi ** 2)


def _count_real_cubic_roots(p: RawDriveParams) -> int:
    a3, a2, a1, a0 = steady_state_cubic_coeffs(p)
    if a3 == 0.0:
        # linear in q0 (g_n = 0 collapses the cubic entirely)
        return 1
    roots = np.roots([a3, a2, a1, a0])
    scale = max(abs(roots).max(), 1.0)
    return int(np.sum(np.abs(roots.imag) <= 1e-9 * scale))


def solve_magnon_steady_state(p: RawDriveParams, tol: float = 1e-12,
                              max_iter: int = 10_000) -> SteadyState:
    """Solve the zero-order magnon/mechanics fixed point.

    With no zero-order cavity drive the cavity and atom amplitudes vanish,
    leaving q0 = -g_n |n0|^2 / omega_b with
    n0 = Omega_L / (kappa_n + i (Delta_n + g_n q0)).  A damped Picard
    iteration (damping 0.5) converges for the mild cubic nonlinearity at
    the operating scales of interest; convergence is declared when

        |q0*omega_b + g_n*|n0|^2| <= tol * omega_b * max(1, |q0|).

    When the underlying real cubic in q0 admits more than one real root
    (bistability), the converged root is returned and ``multiple_roots``
    is set on the result.

    Raises
    ------
    NoConvergence
        If max_iter is reached; the exception carries the last residual.
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    validate_raw_params(p)

    gn, dn, kn, wb = p.g_n_bare, p.delta_n_bare, p.kappa_n, p.omega_b
    omega_L = p.omega_L_rabi
    alpha = 0.5

    def n_of_q(q: float) -> complex:
        return omega_L / (kn + 1j * (dn + gn * q))

    # Iterate all the way to the machine fixed point (the damped map
    # contracts with factor ~alpha here), then verify the residual bound:
    # stopping at the bound alone would leave weak-drive roots, which sit
    # many orders below the tolerance scale, unresolved.
    q = 0.0
    converged = False
    for _ in range(max_iter):
        n0 = n_of_q(q)
        q_new = (1.0 - alpha) * q + alpha * (-gn * abs(n0) ** 2 / wb)
        dq = abs(q_new - q)
        q = q_new
        if dq <= 4.0 * math.ulp(abs(q)):
            converged = True
            break
    n0 = n_of_q(q)
    residual = abs(q * wb + gn * abs(n0) ** 2)
    if not converged or residual > tol * wb * max(1.0, abs(q)):
        raise NoConvergence(residual, max_iter)
    multiple = _count_real_cubic_roots(p) > 1 if omega_L > 0 and gn != 0 else False
    return SteadyState(
        a0=0j,
        c0=0j,
        n0=n0,
        q0=q,
        delta_c_eff=p.delta_c_bare - p.g_c_bare * q,
        delta_n_eff=dn + gn * q,
        residual=residual,
        multiple_roots=multiple,
    )


def raw_to_system_params(p: RawDriveParams,
                         steady: SteadyState | None = None) -> SystemParams:
    """Build effective-mode parameters from a raw-drive configuration.

    The zero-order cavity amplitude is exactly zero in this mode, so the
    resulting G_c is 0; the optomechanical coupling only enters through
    the static shift of the cavity detuning.
    """
    if steady is None:
        steady = solve_magnon_steady_state(p)
    G_c, G_n = effective_couplings(p.g_c_bare, steady.c0, p.g_n_bare, steady.n0)
    return SystemParams(
        kappa_c=p.kappa_c,
        kappa_n=p.kappa_n,
        gamma_a=p.gamma_a,
        gamma_b=p.gamma_b,
        omega_b=p.omega_b,
        delta_a=p.delta_a,
        delta_c_eff=steady.delta_c_eff,
        delta_n_eff=steady.delta_n_eff,
        g_N=p.g_N,
        G_c=G_c,
        G_n=G_n,
        eps_p=p.eps_p,
    )


def phase_of(z: complex) -> float:
    """Principal argument; tiny helper shared by tests and reports."""
    return cmath.phase(z)
