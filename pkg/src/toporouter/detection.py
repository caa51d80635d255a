"""Driven-dissipative steady state of the resonator lattice.

With a coherent drive of amplitude Omega_n on each resonator, uniform
detuning Delta between drive and resonators, and per-site decay kappa_n,
the mean-field steady state solves

    (Delta I + M - i K/2) r = -Omega_vec

where M is the lattice Hamiltonian.  Scanning Delta and reading out
|r_n|^2 images the mode structure without any time evolution, which is the
practical way to verify the routed state on hardware.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericsError
from .model import LatticeSpec, build_hamiltonian

__all__ = [
    "DriveConfig",
    "SteadyState",
    "single_site_drive",
    "steady_state",
    "DetectionTable",
    "detection_spectrum",
]


@dataclass(frozen=True)
class DriveConfig:
    amplitudes: np.ndarray
    detuning: float
    kappa: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=float)
        kap = np.asarray(self.kappa, dtype=float)
        if amps.shape != kap.shape:
            raise ValueError("amplitudes and kappa must have the same length")
        if not np.all(np.isfinite(amps)):
            raise ValueError("drive amplitudes must be finite")
        if not (np.all(kap > 0) and np.all(np.isfinite(kap))):
            # kappa = 0 would put the resolvent poles on the real axis.
            raise ValueError("kappa entries must be positive and finite")
        if not np.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "kappa", kap)


def single_site_drive(
    spec: LatticeSpec,
    site: int,
    amplitude: float = 1.0,
    kappa: float = 0.1,
    detuning: float = 0.0,
) -> DriveConfig:
    amps = np.zeros(spec.n_sites)
    amps[site] = amplitude
    return DriveConfig(amplitudes=amps, detuning=detuning, kappa=np.full(spec.n_sites, kappa))


@dataclass(frozen=True)
class SteadyState:
    means: np.ndarray        # complex resonator field expectation per site
    populations: np.ndarray  # |mean|^2 per site


def steady_state(spec: LatticeSpec, theta: float, drive: DriveConfig) -> SteadyState:
    """Direct complex solve of the steady-state linear system."""
    m = build_hamiltonian(spec, theta)
    L = spec.n_sites
    if drive.amplitudes.shape != (L,):
        raise ValueError(
            f"drive has {drive.amplitudes.shape[0]} entries, lattice has {L} sites"
        )
    a = drive.detuning * np.eye(L) + m - 0.5j * np.diag(drive.kappa)
    means = np.linalg.solve(a, -drive.amplitudes.astype(complex))
    drive_norm = float(np.linalg.norm(drive.amplitudes))
    residual = float(np.linalg.norm(a @ means + drive.amplitudes))
    if residual > 1e-10 * max(drive_norm, 1e-30):
        raise NumericsError(
            f"steady-state solve residual {residual:.3e} exceeds contract"
        )
    return SteadyState(means=means, populations=np.abs(means) ** 2)


@dataclass(frozen=True)
class DetectionTable:
    detunings: np.ndarray
    means: np.ndarray        # shape (G, L) complex
    populations: np.ndarray  # shape (G, L)
    resonance_index: int     # row with maximal total population


def detection_spectrum(
    spec: LatticeSpec,
    theta: float,
    drive_site: int,
    detuning_grid: Sequence[float],
    kappa: float = 0.1,
    amplitude: float = 1.0,
) -> DetectionTable:
    """Steady-state response while scanning the common detuning."""
    grid = np.asarray(detuning_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid is empty")
    L = spec.n_sites
    means = np.empty((grid.size, L), dtype=complex)
    pops = np.empty((grid.size, L))
    for i, delta in enumerate(grid):
        drive = single_site_drive(spec, drive_site, amplitude, kappa, float(delta))
        ss = steady_state(spec, theta, drive)
        means[i] = ss.means
        pops[i] = ss.populations
    resonance = int(np.argmax(pops.sum(axis=1)))
    return DetectionTable(
        detunings=grid, means=means, populations=pops, resonance_index=resonance
    )
