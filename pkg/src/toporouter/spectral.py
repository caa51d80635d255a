"""Eigendecomposition, zero-mode construction, and gap scans.

The chain with an odd site count always carries one eigenvalue pinned at
zero as long as the chiral symmetry holds.  The routing analysis needs three
things from this module: the numeric zero mode at a given theta, the closed
recurrence form of the same mode for cross-checks, and the minimal spectral
distance from the zero mode to the rest of the band along the ramp, which
bounds how fast the ramp may run.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import NumericsError
from .model import (
    DisorderRealization,
    LatticeSpec,
    StateVector,
    build_hamiltonian,
    chiral_defect,
    hoppings,
    site_a,
)

__all__ = [
    "EigenSystem",
    "ZeroMode",
    "GapReport",
    "SpectrumTable",
    "eigh",
    "zero_mode",
    "analytic_zero_mode",
    "spectrum_vs_theta",
    "gap_scan_grid",
    "zero_mode_gap",
    "minimal_gap",
    "gap_vs_location",
    "gap_vs_size",
    "adiabatic_speed_ok",
]

# Amplitudes this small are treated as an exactly closed bond when picking
# the degenerate endpoint forms of the zero mode.
_BOND_EPS = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Full decomposition; eigenvalues ascending, columns orthonormal."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh(h: np.ndarray) -> EigenSystem:
    """Dense Hermitian eigendecomposition with an explicit residual gate.

    Raises NumericsError if any eigenpair residual or the column
    orthonormality error exceeds 1e-10 (relative to the largest entry),
    so downstream consumers never see a silently bad decomposition.
    """
    h = np.asarray(h)
    vals, vecs = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(h))))
    residual = float(np.max(np.linalg.norm(h @ vecs - vecs * vals, axis=0)))
    if residual > 1e-10 * scale:
        raise NumericsError(f"eigensolver residual {residual:.3e} exceeds contract")
    ortho = float(np.max(np.abs(vecs.conj().T @ vecs - np.eye(h.shape[0]))))
    if ortho > 1e-10:
        raise NumericsError(f"eigenvector orthonormality error {ortho:.3e}")
    return EigenSystem(eigenvalues=vals, eigenvectors=vecs)


class ZeroMode(NamedTuple):
    state: StateVector
    energy: float
    index: int


def zero_mode(h: np.ndarray) -> ZeroMode:
    """Eigenvector of smallest |E|, gauge-fixed; ties take the lower index.

    With on-site disorder there is no exact zero; the nearest mode is still
    well defined and tracked, but a warning flags the broken symmetry.
    """
    if chiral_defect(h) > 1e-10:
        warnings.warn(
            "Hamiltonian is not chiral-symmetric; returning the nearest-zero mode",
            RuntimeWarning,
            stacklevel=2,
        )
    es = eigh(h)
    k = int(np.argmin(np.abs(es.eigenvalues)))
    state = StateVector(es.eigenvectors[:, k].astype(complex)).gauge_fixed()
    return ZeroMode(state=state, energy=float(es.eigenvalues[k]), index=k)


def analytic_zero_mode(spec: LatticeSpec, theta: float) -> StateVector:
    """Zero mode of the base variant from the bond-balance recurrence.

    The b-sublattice amplitudes vanish identically; on the a-sublattice,
    psi_{a2} = lam * psi_{a1} with lam = -j1/j2, and
    psi_{a,n+1} = lam * psi_{a,n} - psi_{a1} for n >= 2.  The recurrence is
    used directly (never the geometric-sum closed form, whose lam = 1
    denominator is spurious).  The closed j2 = 0 and j1 = 0 endpoints are
    returned exactly.
    """
    if spec.extra_hop is not None:
        raise ValueError("analytic zero mode is defined for the base variant only")
    j = hoppings(spec, theta)
    n_cells = spec.n_cells
    amps = np.zeros(spec.n_sites)
    if abs(j.j2) <= _BOND_EPS:
        # Right edge decoupled: the mode sits entirely on a_(N+1).
        amps[site_a(n_cells + 1)] = 1.0
        return StateVector(amps.astype(complex), gauge="fixed")
    if abs(j.j1) <= _BOND_EPS:
        # Fully routed endpoint: equal weight on a1 and a3..a(N+1), a2 dark.
        amps[site_a(1)] = 1.0
        for n in range(3, n_cells + 2):
            amps[site_a(n)] = -1.0
        return StateVector.normalized(amps.astype(complex), gauge="fixed").gauge_fixed()
    lam = -j.j1 / j.j2
    a_vals = np.zeros(n_cells + 1)
    a_vals[0] = 1.0
    a_vals[1] = lam
    for n in range(2, n_cells + 1):
        a_vals[n] = lam * a_vals[n - 1] - a_vals[0]
    for n in range(1, n_cells + 2):
        amps[site_a(n)] = a_vals[n - 1]
    return StateVector.normalized(amps.astype(complex)).gauge_fixed()


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalues and tracked zero-mode density on a theta grid."""

    thetas: np.ndarray
    energies: np.ndarray            # shape (T, L), each row ascending
    zero_mode_density: np.ndarray   # shape (T, L)
    zero_mode_abs_energy: np.ndarray


def spectrum_vs_theta(spec: LatticeSpec, thetas: Sequence[float]) -> SpectrumTable:
    grid = np.asarray(thetas, dtype=float)
    if grid.size == 0:
        raise ValueError("theta grid is empty")
    if np.any(grid < 0) or np.any(grid > 2 * np.pi + 1e-12):
        raise ValueError("theta grid values must lie in [0, 2*pi]")
    L = spec.n_sites
    energies = np.empty((grid.size, L))
    density = np.empty((grid.size, L))
    abs_e0 = np.empty(grid.size)
    for t, theta in enumerate(grid):
        es = eigh(build_hamiltonian(spec, theta))
        k = int(np.argmin(np.abs(es.eigenvalues)))
        energies[t] = es.eigenvalues
        density[t] = np.abs(es.eigenvectors[:, k]) ** 2
        abs_e0[t] = abs(es.eigenvalues[k])
    return SpectrumTable(grid, energies, density, abs_e0)


@dataclass(frozen=True)
class GapReport:
    delta_e: float
    theta_at_min: float
    zero_mode_index: int


def gap_scan_grid(points: int = 250) -> np.ndarray:
    """Default theta grid for gap scans.

    249 intervals put no grid point at the exact closing angles pi/2 and
    3*pi/2, so a variant whose gap pinches shut there reports the gap at
    this sampling resolution instead of collapsing to zero.  Scans that
    need the true continuum minimum should pass refine=True.
    """
    if points < 3:
        raise ValueError("gap scan needs at least 3 grid points")
    return np.linspace(0.0, 2 * np.pi, points)


def zero_mode_gap(h: np.ndarray) -> tuple[float, int]:
    """Distance from the nearest-zero eigenvalue to the rest of the spectrum."""
    vals = eigh(h).eigenvalues
    k = int(np.argmin(np.abs(vals)))
    others = np.delete(vals, k)
    return float(np.min(np.abs(others - vals[k]))), k


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    # Plain golden-section search; f is assumed unimodal on [lo, hi].
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def minimal_gap(
    spec: LatticeSpec,
    theta_grid: Optional[Sequence[float]] = None,
    refine: bool = False,
    disorder: Optional[DisorderRealization] = None,
) -> GapReport:
    """Minimum over theta of the zero mode's distance to the nearest band.

    The reported value is the minimum over the scanned grid; with
    refine=True a golden-section search tightens the bracket around the
    coarse minimizer to 1e-6 in theta and may land below grid resolution.
    """
    grid = gap_scan_grid() if theta_grid is None else np.sort(np.asarray(theta_grid, dtype=float))
    if grid.size < 2:
        raise ValueError("gap scan needs at least 2 grid points")

    def gap_at(theta: float) -> float:
        return zero_mode_gap(build_hamiltonian(spec, theta, disorder))[0]

    gaps = np.array([gap_at(t) for t in grid])
    i = int(np.argmin(gaps))
    best_theta = float(grid[i])
    best_gap = float(gaps[i])
    if refine:
        lo = float(grid[max(i - 1, 0)])
        hi = float(grid[min(i + 1, grid.size - 1)])
        x, fx = _golden_min(gap_at, lo, hi, 1e-6)
        if fx < best_gap:
            best_theta, best_gap = float(x), float(fx)
    k = zero_mode_gap(build_hamiltonian(spec, best_theta, disorder))[1]
    return GapReport(delta_e=best_gap, theta_at_min=best_theta, zero_mode_index=k)


def gap_vs_location(
    spec_base: LatticeSpec,
    m_values: Sequence[int],
    theta_grid: Optional[Sequence[float]] = None,
    refine: bool = False,
) -> list[tuple[int, GapReport]]:
    """Minimal gap as a function of where the extra long-range hop lands."""
    if len(m_values) == 0:
        raise ValueError("m_values is empty")
    out = []
    for m in m_values:
        spec = LatticeSpec(spec_base.n_cells, spec_base.j, extra_hop=int(m))
        out.append((int(m), minimal_gap(spec, theta_grid, refine)))
    return out


def gap_vs_size(
    l_values: Sequence[int],
    theta_grid: Optional[Sequence[float]] = None,
    refine: bool = False,
) -> list[tuple[int, GapReport]]:
    """Minimal gap versus chain length with the extra hop at m = N."""
    if len(l_values) == 0:
        raise ValueError("l_values is empty")
    out = []
    for L in l_values:
        L = int(L)
        if L % 2 == 0 or (L - 1) // 2 % 2 != 0 or L < 9:
            raise ValueError(
                f"invalid size {L}: need L = 2N+1 with N even and N >= 4"
            )
        n_cells = (L - 1) // 2
        spec = LatticeSpec(n_cells, extra_hop=n_cells)
        out.append((L, minimal_gap(spec, theta_grid, refine)))
    return out


def adiabatic_speed_ok(omega: float, delta_e: float) -> bool:
    """Ramp speed check: sqrt(omega) must stay below the minimal gap."""
    return np.sqrt(omega) < delta_e
