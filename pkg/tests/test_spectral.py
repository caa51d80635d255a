import numpy as np
import pytest

from toporouter import (
    DisorderKind,
    LatticeSpec,
    NumericsError,
    adiabatic_speed_ok,
    analytic_zero_mode,
    build_hamiltonian,
    eigh,
    gap_scan_grid,
    gap_vs_location,
    gap_vs_size,
    minimal_gap,
    sample_disorder,
    site_a,
    spectrum_vs_theta,
    zero_mode,
    zero_mode_gap,
)
from conftest import load_golden


# ---------------------------------------------------------------------------
# eigensolver

def test_eigh_dimer_chain_spectrum():
    vals = eigh(build_hamiltonian(LatticeSpec(2), 0.0)).eigenvalues
    assert np.allclose(vals, [-2, -2, 0, 2, 2], atol=1e-12)


def test_eigh_two_by_two():
    t = 1.7
    vals = eigh(np.array([[0.0, t], [t, 0.0]])).eigenvalues
    assert np.allclose(vals, [-t, t], atol=1e-14)


def test_eigh_chiral_pairing_and_determinism(spec6):
    h = build_hamiltonian(spec6, 1.0)
    es1 = eigh(h)
    es2 = eigh(h)
    assert np.array_equal(es1.eigenvalues, es2.eigenvalues)
    assert np.array_equal(es1.eigenvectors, es2.eigenvectors)
    assert np.max(np.abs(es1.eigenvalues + es1.eigenvalues[::-1])) <= 1e-10


def test_eigh_residual_gate_fires_on_garbage():
    # a non-Hermitian matrix breaks the residual contract
    h = np.array([[0.0, 5.0], [0.0, 0.0]])
    with pytest.raises(NumericsError):
        eigh(h)


# ---------------------------------------------------------------------------
# zero mode

def test_zero_mode_sits_on_right_edge_at_theta0(spec6):
    zm = zero_mode(build_hamiltonian(spec6, 0.0))
    assert abs(zm.energy) <= 1e-14
    assert zm.state.populations[site_a(7)] == pytest.approx(1.0, abs=1e-14)


def test_zero_mode_routed_profile_at_theta_pi(spec6):
    zm = zero_mode(build_hamiltonian(spec6, np.pi))
    pops = zm.state.populations
    ports = [site_a(n) for n in (1, 3, 4, 5, 6, 7)]
    for p in ports:
        assert pops[p] == pytest.approx(1 / 6, abs=1e-9)
    assert pops[1::2].sum() <= 1e-18
    assert pops[site_a(2)] <= 1e-12
    amps = zm.state.amplitudes
    signs = np.sign(amps[ports].real)
    assert signs[0] == 1.0 and np.all(signs[1:] == -1.0)


def test_zero_mode_component_ratios_at_lambda_third(spec6):
    theta = 2 * np.pi / 3  # lam = -(1 + cos)/(1 - cos) = -1/3
    zm = zero_mode(build_hamiltonian(spec6, theta))
    amps = zm.state.amplitudes
    assert amps[site_a(2)] / amps[site_a(1)] == pytest.approx(-1 / 3, abs=1e-10)
    assert amps[site_a(3)] / amps[site_a(1)] == pytest.approx(-8 / 9, abs=1e-10)
    ana = analytic_zero_mode(spec6, theta)
    assert ana.amplitudes[site_a(2)] / ana.amplitudes[site_a(1)] == pytest.approx(
        -1 / 3, abs=1e-14
    )


def test_zero_mode_warns_when_symmetry_broken(spec6):
    d = sample_disorder(spec6, DisorderKind.ONSITE, 0.2, 5)
    with pytest.warns(RuntimeWarning, match="chiral"):
        zm = zero_mode(build_hamiltonian(spec6, 1.0, d))
    assert abs(zm.energy) > 0


# ---------------------------------------------------------------------------
# analytic zero mode

def test_analytic_endpoints(spec6):
    left = analytic_zero_mode(spec6, 0.0)
    assert left.amplitudes[site_a(7)] == 1.0
    assert np.count_nonzero(left.amplitudes) == 1
    routed = analytic_zero_mode(spec6, np.pi)
    expect = np.zeros(13)
    expect[site_a(1)] = 1 / np.sqrt(6)
    for n in range(3, 8):
        expect[site_a(n)] = -1 / np.sqrt(6)
    assert np.allclose(routed.amplitudes.real, expect, atol=1e-15)
    assert np.max(np.abs(routed.amplitudes.imag)) == 0.0


def test_analytic_rejects_extra_hop(spec6_m6):
    with pytest.raises(ValueError):
        analytic_zero_mode(spec6_m6, 1.0)


def test_recurrence_matches_closed_form():
    # closed form a_n = lam^n - (lam^(n-1) - 1)/(lam - 1), valid away from lam = 1;
    # the module must agree without ever forming that denominator
    rng = np.random.default_rng(77)
    spec = LatticeSpec(6)
    for lam in rng.uniform(-6.0, -0.02, size=20):
        c = (lam + 1) / (lam - 1)
        theta = float(np.arccos(c))
        state = analytic_zero_mode(spec, theta)
        a = state.amplitudes[0::2].real
        ratios = a / a[0]
        for n in range(1, 7):
            closed = lam**n - (lam ** (n - 1) - 1) / (lam - 1)
            assert ratios[n] == pytest.approx(closed, rel=1e-9, abs=1e-9)


def test_analytic_numeric_overlap_on_grid():
    for n_cells in (4, 6):
        spec = LatticeSpec(n_cells)
        for theta in np.linspace(np.pi / 2, np.pi, 52)[1:-1]:
            zm = zero_mode(build_hamiltonian(spec, theta))
            overlap = abs(np.vdot(analytic_zero_mode(spec, theta).amplitudes, zm.state.amplitudes))
            assert overlap >= 1 - 1e-10


# ---------------------------------------------------------------------------
# spectra and gaps

def test_spectrum_endpoints_and_symmetry(spec6):
    table = spectrum_vs_theta(spec6, [0.0, np.pi])
    assert np.max(table.zero_mode_abs_energy) <= 1e-12
    assert table.zero_mode_density[0, site_a(7)] == pytest.approx(1.0, abs=1e-12)
    for p in (0, 4, 6, 8, 10, 12):
        assert table.zero_mode_density[1, p] == pytest.approx(1 / 6, abs=1e-9)
    for row in table.energies:
        assert np.max(np.abs(row + row[::-1])) <= 1e-10


def test_spectrum_zero_level_persists_with_extra_hop():
    table = spectrum_vs_theta(
        LatticeSpec(6, extra_hop=4), np.linspace(0, 2 * np.pi, 629)
    )
    assert np.max(table.zero_mode_abs_energy) <= 1e-10


def test_spectrum_grid_validation(spec6):
    with pytest.raises(ValueError):
        spectrum_vs_theta(spec6, [])
    with pytest.raises(ValueError):
        spectrum_vs_theta(spec6, [-0.1])
    with pytest.raises(ValueError):
        spectrum_vs_theta(spec6, [7.0])


def test_gap_scan_grid_shape():
    grid = gap_scan_grid()
    assert grid.size == 250
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        gap_scan_grid(2)


def test_minimal_gap_matches_goldens():
    golden = load_golden("gap_vs_location.json")
    for m, expect in golden.items():
        report = minimal_gap(LatticeSpec(6, extra_hop=int(m)))
        assert report.delta_e == pytest.approx(expect["gap"], abs=1e-9)
        assert report.theta_at_min == pytest.approx(expect["theta"], abs=1e-9)


def test_gap_vs_location_peaks_at_m6(spec6):
    pairs = gap_vs_location(spec6, [3, 4, 5, 6, 7])
    gaps = {m: r.delta_e for m, r in pairs}
    assert all(gaps[6] > gaps[m] for m in (3, 4, 5, 7))
    # consistency with the single-spec entry point
    assert gaps[3] == minimal_gap(LatticeSpec(6, extra_hop=3)).delta_e
    with pytest.raises(ValueError):
        gap_vs_location(spec6, [])
    with pytest.raises(ValueError):
        gap_vs_location(spec6, [2])


def test_refine_exposes_true_closing_for_m3():
    coarse = minimal_gap(LatticeSpec(6, extra_hop=3))
    fine = minimal_gap(LatticeSpec(6, extra_hop=3), refine=True)
    # the odd-m gap pinches shut at theta = pi/2 and 3*pi/2; the grid value
    # is a sampling floor, not a physical gap
    assert fine.delta_e < 1e-5
    assert fine.delta_e < coarse.delta_e
    assert fine.theta_at_min == pytest.approx(3 * np.pi / 2, abs=1e-3)


def test_gap_vs_size_matches_goldens_and_decreases():
    golden = load_golden("gap_vs_size.json")
    pairs = gap_vs_size([9, 13, 17, 21])
    gaps = [r.delta_e for _, r in pairs]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    for (L, r) in pairs:
        assert r.delta_e == pytest.approx(golden[str(L)], abs=1e-9)
    for bad in (7, 11, 12):
        with pytest.raises(ValueError):
            gap_vs_size([bad])


def test_minimal_gap_with_disorder_stays_positive(spec6):
    d = sample_disorder(spec6, DisorderKind.NEAREST_NEIGHBOR, 0.2, 3)
    report = minimal_gap(spec6, disorder=d)
    assert report.delta_e > 0


def test_zero_mode_gap_direct(spec6):
    gap, k = zero_mode_gap(build_hamiltonian(spec6, np.pi))
    assert k == 6  # middle of 13 ascending eigenvalues
    assert gap == pytest.approx(2.0, abs=1e-9)


def test_adiabatic_speed_predicate():
    assert adiabatic_speed_ok(1e-4, 0.39)
    assert not adiabatic_speed_ok(1e-2, 0.0092)
