"""Lattice definition and Hamiltonian assembly for the long-range SSH router.

The chain has L = 2N+1 sites ordered [a1, b1, a2, b2, ..., aN, bN, a(N+1)].
Three bond families exist: intracell (a_n, b_n) with amplitude j1, intercell
(a_(n+1), b_n) with amplitude j2, and long-range (a1, b_n) for n = 2..N, also
with amplitude j2.  The "extra hop" variant adds one more long-range bond
(b1, a_m) with amplitude j2, which turns the N-port router into an N+1 port
router and widens the protecting gap when m is placed near the chain center.

Amplitudes follow j1 = J + cos(theta), j2 = J - cos(theta), so a slow ramp
theta: 0 -> pi interpolates between the trivial (j2 = 0) and routed (j1 = 0)
configurations while j1 + j2 = 2J stays fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np
from numpy.random import Generator, Philox

__all__ = [
    "LatticeSpec",
    "Hoppings",
    "DisorderKind",
    "DisorderRealization",
    "StateVector",
    "site_a",
    "site_b",
    "site_label",
    "site_from_label",
    "sublattice_of",
    "cell_of",
    "a_site_ordinals",
    "port_ordinals",
    "hoppings",
    "disorder_terms",
    "sample_disorder",
    "build_hamiltonian",
    "hamiltonian_parts",
    "chiral_signs",
    "chiral_operator",
    "chiral_defect",
    "effective_hopping_from_circuit",
]

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# site bookkeeping

def site_a(n: int) -> int:
    """Ordinal of site a_n (1-based cell index)."""
    return 2 * (n - 1)


def site_b(n: int) -> int:
    """Ordinal of site b_n (1-based cell index)."""
    return 2 * n - 1


def sublattice_of(ordinal: int) -> str:
    return "a" if ordinal % 2 == 0 else "b"


def cell_of(ordinal: int) -> int:
    """1-based cell index n such that the ordinal is a_n or b_n."""
    return ordinal // 2 + 1


def site_label(ordinal: int) -> str:
    return f"{sublattice_of(ordinal)}{cell_of(ordinal)}"


def site_from_label(label: str) -> int:
    """Inverse of site_label, e.g. 'a3' -> 4."""
    kind, num = label[:1], label[1:]
    if kind not in ("a", "b") or not num.isdigit() or int(num) < 1:
        raise ValueError(f"bad site label {label!r}, expected like 'a3' or 'b1'")
    n = int(num)
    return site_a(n) if kind == "a" else site_b(n)


@dataclass(frozen=True)
class LatticeSpec:
    """Static description of one router lattice.

    n_cells: number N of unit cells; the chain has L = 2N+1 sites.
    j: overall coupling scale J > 0 (the energy unit).
    extra_hop: None for the base N-port router, or the cell index m of the
        added (b1, a_m) bond, m in [3, N+1].
    """

    n_cells: int
    j: float = 1.0
    extra_hop: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n_cells < 2:
            raise ValueError(f"n_cells must be >= 2, got {self.n_cells}")
        if self.n_cells % 2 != 0:
            # Odd N breaks the symmetric port pattern; the model is defined
            # for even cell counts only.
            raise ValueError(f"n_cells must be even, got {self.n_cells}")
        if not (self.j > 0 and np.isfinite(self.j)):
            raise ValueError(f"j must be positive and finite, got {self.j}")
        if self.extra_hop is not None:
            m = self.extra_hop
            if not (3 <= m <= self.n_cells + 1):
                raise ValueError(
                    f"extra_hop must lie in [3, {self.n_cells + 1}], got {m}"
                )

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells + 1

    def to_json_dict(self) -> dict:
        return {"n_cells": self.n_cells, "j": self.j, "extra_hop": self.extra_hop}

    @classmethod
    def from_json_dict(cls, data: dict) -> "LatticeSpec":
        return cls(
            n_cells=int(data["n_cells"]),
            j=float(data.get("j", 1.0)),
            extra_hop=None if data.get("extra_hop") is None else int(data["extra_hop"]),
        )


def a_site_ordinals(spec: LatticeSpec) -> tuple[int, ...]:
    return tuple(site_a(n) for n in range(1, spec.n_cells + 2))


def port_ordinals(spec: LatticeSpec) -> tuple[int, ...]:
    """Output ports of the routed state at theta = pi.

    Base variant: {a1, a3, ..., a(N+1)} (a2 stays dark).  Extra-hop variant:
    all N+1 a-sites.
    """
    if spec.extra_hop is None:
        return (site_a(1),) + tuple(site_a(n) for n in range(3, spec.n_cells + 2))
    return a_site_ordinals(spec)


class Hoppings(NamedTuple):
    j1: float
    j2: float
    theta: float


def hoppings(spec: LatticeSpec, theta: float) -> Hoppings:
    """Instantaneous bond amplitudes at ramp angle theta."""
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    c = np.cos(theta)
    return Hoppings(spec.j + c, spec.j - c, float(theta))


# ---------------------------------------------------------------------------
# disorder

class DisorderKind(str, Enum):
    ONSITE = "onsite"
    NEAREST_NEIGHBOR = "nearest_neighbor"
    LONG_RANGE = "long_range"


def disorder_terms(spec: LatticeSpec, kind: DisorderKind) -> tuple[tuple[int, int], ...]:
    """Canonical ordered term set for one disorder kind.

    Each term is a matrix position (i, j) with i <= j; i == j marks an
    on-site term.  The position in this tuple is the term ordinal that keys
    the per-term random draw, so the order here is part of the seeding
    contract and must not change.
    """
    kind = DisorderKind(kind)
    if kind is DisorderKind.ONSITE:
        return tuple((k, k) for k in range(spec.n_sites))
    if kind is DisorderKind.NEAREST_NEIGHBOR:
        # Intracell and intercell bonds are exactly the adjacent-ordinal
        # pairs in this basis ordering.
        return tuple((k, k + 1) for k in range(2 * spec.n_cells))
    terms = [(site_a(1), site_b(n)) for n in range(2, spec.n_cells + 1)]
    if spec.extra_hop is not None:
        # The added bond is long-range in origin, so it is disordered with
        # the same kind.  b1 < a_m for all valid m.
        terms.append((site_b(1), site_a(spec.extra_hop)))
    return tuple(terms)


def _uniform_for_term(seed: int, ordinal: int) -> float:
    # Counter-based draw keyed on (seed, term ordinal): independent of draw
    # order, so parallel workers reproduce identical realizations.
    gen = Generator(Philox(key=((ordinal & _MASK64) << 64) | (seed & _MASK64)))
    return float(gen.random() - 0.5)


@dataclass(frozen=True)
class DisorderRealization:
    """Quenched disorder: one delta in [-0.5, 0.5] per term, fixed in time."""

    kind: DisorderKind
    w: float
    seed: int
    terms: tuple[tuple[int, int], ...]
    values: tuple[float, ...]

    def matrix(self, n_sites: int) -> np.ndarray:
        """Symmetric additive contribution W * delta at each term position."""
        h = np.zeros((n_sites, n_sites))
        for (i, j), delta in zip(self.terms, self.values):
            h[i, j] += self.w * delta
            if i != j:
                h[j, i] += self.w * delta
        return h

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "w": self.w,
            "seed": self.seed,
            "terms": [list(t) for t in self.terms],
            "values": list(self.values),
        }


def sample_disorder(
    spec: LatticeSpec, kind: DisorderKind, w: float, seed: int
) -> DisorderRealization:
    """Draw one quenched realization; identical inputs give identical values."""
    if w < 0 or not np.isfinite(w):
        raise ValueError(f"disorder strength must be >= 0, got {w}")
    kind = DisorderKind(kind)
    terms = disorder_terms(spec, kind)
    values = tuple(_uniform_for_term(seed, k) for k in range(len(terms)))
    return DisorderRealization(kind=kind, w=float(w), seed=int(seed), terms=terms, values=values)


# ---------------------------------------------------------------------------
# Hamiltonian assembly

def _bond_patterns(spec: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """0/1 adjacency of the j1 bond family and of the j2 bond family."""
    L = spec.n_sites
    p1 = np.zeros((L, L))
    p2 = np.zeros((L, L))
    for n in range(1, spec.n_cells + 1):
        p1[site_a(n), site_b(n)] = 1.0
        p2[site_a(n + 1), site_b(n)] = 1.0
    for n in range(2, spec.n_cells + 1):
        p2[site_a(1), site_b(n)] = 1.0
    if spec.extra_hop is not None:
        p2[site_a(spec.extra_hop), site_b(1)] = 1.0
    p1 += p1.T
    p2 += p2.T
    return p1, p2


def hamiltonian_parts(
    spec: LatticeSpec, disorder: Optional[DisorderRealization] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Split H(theta) = const + cos(theta) * coeff.

    With j1 = J + cos(theta) on the intracell bonds and j2 = J - cos(theta)
    on the intercell and long-range bonds, const = J*(P1+P2) + disorder and
    coeff = P1 - P2.  The ramp integrator and the static builder both use
    this split, so they see bit-identical matrices.
    """
    p1, p2 = _bond_patterns(spec)
    const = spec.j * (p1 + p2)
    if disorder is not None:
        expected = disorder_terms(spec, disorder.kind)
        if disorder.terms != expected:
            raise ValueError(
                "disorder realization does not match this lattice: "
                f"{len(disorder.terms)} terms vs expected {len(expected)}"
                + ("" if len(disorder.terms) != len(expected) else " (positions differ)")
            )
        const = const + disorder.matrix(spec.n_sites)
    return const, p1 - p2


def build_hamiltonian(
    spec: LatticeSpec,
    theta: float,
    disorder: Optional[DisorderRealization] = None,
) -> np.ndarray:
    """Dense real symmetric H(theta), optionally with quenched disorder."""
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    const, coeff = hamiltonian_parts(spec, disorder)
    return const + np.cos(theta) * coeff


def chiral_signs(n_sites: int) -> np.ndarray:
    """Diagonal of the chiral operator: +1 on a-sites, -1 on b-sites."""
    if n_sites % 2 == 0 or n_sites < 5:
        raise ValueError(f"n_sites must be odd and >= 5, got {n_sites}")
    signs = np.ones(n_sites)
    signs[1::2] = -1.0
    return signs


def chiral_operator(n_sites: int) -> np.ndarray:
    return np.diag(chiral_signs(n_sites))


def chiral_defect(h: np.ndarray) -> float:
    """Max-norm of Gamma H Gamma + H; zero iff H anticommutes with Gamma.

    Clean and bond-disordered Hamiltonians are strictly inter-sublattice,
    so their defect vanishes; on-site disorder survives the conjugation
    and the defect equals twice the largest diagonal magnitude.
    """
    g = chiral_signs(h.shape[0])
    return float(np.max(np.abs(g[:, None] * h * g[None, :] + h)))


def effective_hopping_from_circuit(g: float, delta_q: float) -> float:
    """Dispersive two-resonator coupling -g^2/Delta_q mediated by a qubit.

    Negative detuning gives the positive hoppings the lattice model uses;
    the sign is returned as computed so callers can check their regime.
    """
    if delta_q == 0:
        raise ValueError("delta_q must be nonzero (dispersive regime)")
    return -(g * g) / delta_q


# ---------------------------------------------------------------------------
# states

@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitudes over the L sites.

    gauge records whether the global phase has been fixed ("fixed" means the
    largest-magnitude component is real and positive) or left as produced
    ("raw").  Raw phases carry physical information after a ramp: a broken
    chiral symmetry shows up as a common offset that a relative profile
    would cancel.
    """

    amplitudes: np.ndarray
    gauge: str = "raw"

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond 1e-10")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex], gauge: str = "raw") -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm, gauge)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def gauge_fixed(self) -> "StateVector":
        """Rotate the global phase so the largest component is real positive."""
        k = int(np.argmax(np.abs(self.amplitudes)))
        phase = self.amplitudes[k] / abs(self.amplitudes[k])
        return StateVector(self.amplitudes / phase, gauge="fixed")
