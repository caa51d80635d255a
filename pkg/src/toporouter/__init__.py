"""Topological state routing on an extended SSH resonator lattice.

A chain of 2N+1 sites with intracell hopping J + cos(theta), intercell and
long-range hopping J - cos(theta) carries a chiral-protected zero mode.
Ramping theta from 0 to pi adiabatically routes an excitation from the right
edge into an equal-weight superposition over the output ports.  This package
provides the Hamiltonian assembly, spectral analysis, ramp propagation with
quenched disorder ensembles, driven-dissipative detection, and a CLI that
emits deterministic CSV/SVG artifacts.
"""

from .detection import (
    DetectionTable,
    DriveConfig,
    SteadyState,
    detection_spectrum,
    single_site_drive,
    steady_state,
)
from .errors import NumericsError
from .evolution import (
    EvolutionResult,
    RampSchedule,
    SweepCell,
    SweepResult,
    derive_seed,
    evolve,
    fidelity,
    initial_state,
    occupancy_trajectory,
    phase_pattern_deviation,
    phase_profile,
    raw_phase_scatter,
    resolve_workers,
    router_target,
    sweep_fidelity,
)
from .model import (
    DisorderKind,
    DisorderRealization,
    Hoppings,
    LatticeSpec,
    StateVector,
    a_site_ordinals,
    build_hamiltonian,
    chiral_defect,
    chiral_operator,
    chiral_signs,
    disorder_terms,
    effective_hopping_from_circuit,
    hamiltonian_parts,
    hoppings,
    port_ordinals,
    sample_disorder,
    site_a,
    site_b,
    site_from_label,
    site_label,
)
from .reporting import ResultTable, read_csv, tool_version, write_csv
from .spectral import (
    EigenSystem,
    GapReport,
    SpectrumTable,
    ZeroMode,
    adiabatic_speed_ok,
    analytic_zero_mode,
    eigh,
    gap_scan_grid,
    gap_vs_location,
    gap_vs_size,
    minimal_gap,
    spectrum_vs_theta,
    zero_mode,
    zero_mode_gap,
)

__version__ = tool_version()

__all__ = [
    "DetectionTable",
    "DisorderKind",
    "DisorderRealization",
    "DriveConfig",
    "EigenSystem",
    "EvolutionResult",
    "GapReport",
    "Hoppings",
    "LatticeSpec",
    "NumericsError",
    "RampSchedule",
    "ResultTable",
    "SpectrumTable",
    "StateVector",
    "SteadyState",
    "SweepCell",
    "SweepResult",
    "ZeroMode",
    "a_site_ordinals",
    "adiabatic_speed_ok",
    "analytic_zero_mode",
    "build_hamiltonian",
    "chiral_defect",
    "chiral_operator",
    "chiral_signs",
    "derive_seed",
    "detection_spectrum",
    "disorder_terms",
    "effective_hopping_from_circuit",
    "eigh",
    "evolve",
    "fidelity",
    "gap_scan_grid",
    "gap_vs_location",
    "gap_vs_size",
    "hamiltonian_parts",
    "hoppings",
    "initial_state",
    "minimal_gap",
    "occupancy_trajectory",
    "phase_pattern_deviation",
    "phase_profile",
    "port_ordinals",
    "raw_phase_scatter",
    "read_csv",
    "resolve_workers",
    "router_target",
    "sample_disorder",
    "single_site_drive",
    "site_a",
    "site_b",
    "site_from_label",
    "site_label",
    "spectrum_vs_theta",
    "steady_state",
    "sweep_fidelity",
    "tool_version",
    "write_csv",
    "zero_mode",
    "zero_mode_gap",
]
