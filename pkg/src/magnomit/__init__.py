"""Linear probe-field response of an atom-opto-magnomechanical cavity.

The package computes absorption, dispersion, transmission, phase, and group
delay versus probe-drive detuning for a driven cavity coupled to a two-level
atomic ensemble, a magnon mode, and a shared mechanical vibration mode.
"""

from .params import (NegativeCoupling, NoConvergence, NonFiniteValue,
                     NonPositiveRate, ParamError, RawDriveParams, SteadyState,
                     SystemParams, effective_couplings, raw_to_system_params,
                     solve_magnon_steady_state, validate_params)
from .response import (GroupDelay, HCoefficients, PoleEncountered,
                       ScriptHCoefficients, StepTooLargeWarning,
                       TransparencyWindow, UnwrapAmbiguity, cavity_amplitude,
                       cavity_amplitude_closed_form, find_transparency_windows,
                       group_delay, group_delay_profile, h_coefficients,
                       output_field, phase_profile, script_h_coefficients,
                       transmission)
from .sideband import (SidebandSolution, SidebandSystem, SingularSystem,
                       assemble_sideband_system, cavity_amplitude_oracle,
                       solve_sideband)
from .sweep import (ENGINES, EngineComparison, ResponsePoint, SweepResult,
                    SweepSpec, compare_engines, run_sweep, write_csv,
                    write_json)

__all__ = [
    "SystemParams", "RawDriveParams", "SteadyState", "ParamError",
    "NonPositiveRate", "NonFiniteValue", "NegativeCoupling", "NoConvergence",
    "validate_params", "solve_magnon_steady_state", "effective_couplings",
    "raw_to_system_params",
    "SidebandSystem", "SidebandSolution", "SingularSystem",
    "assemble_sideband_system", "solve_sideband", "cavity_amplitude_oracle",
    "HCoefficients", "ScriptHCoefficients", "GroupDelay", "TransparencyWindow",
    "PoleEncountered", "UnwrapAmbiguity", "StepTooLargeWarning",
    "h_coefficients", "script_h_coefficients", "cavity_amplitude_closed_form",
    "cavity_amplitude", "output_field", "transmission", "phase_profile",
    "group_delay", "group_delay_profile", "find_transparency_windows",
    "SweepSpec", "ResponsePoint", "SweepResult", "EngineComparison", "ENGINES",
    "run_sweep", "compare_engines", "write_csv", "write_json",
]

__version__ = "0.1.0"
