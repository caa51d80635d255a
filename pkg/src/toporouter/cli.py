"""Command-line front end.

Six commands, each driven by one JSON config document:

    toporouter spectrum  --config cfg.json   eigenvalues and mode density vs theta
    toporouter zeromode  --config cfg.json   zero mode at one theta
    toporouter gap-scan  --config cfg.json   minimal gap vs hop location or size
    toporouter evolve    --config cfg.json   one adiabatic ramp
    toporouter sweep     --config cfg.json   fidelity over (omega x W) ensembles
    toporouter detect    --config cfg.json   driven-dissipative detection spectrum

Flags --out, --seed, --workers override the matching config fields.  Every
run writes its tables as CSV (with '#' provenance headers), an SVG rendered
from the CSV content, and a manifest.json recording the resolved config and
a sha256 per output.  Exit codes: 0 success, 2 config error, 3 numeric
contract failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import detection, evolution, spectral, svgplot
from .errors import NumericsError
from .model import (
    DisorderKind,
    LatticeSpec,
    build_hamiltonian,
    sample_disorder,
    site_a,
    site_from_label,
    site_label,
)
from .reporting import ResultTable, read_csv, tool_version, write_csv, write_manifest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(Exception):
    """Invalid or unusable run configuration; maps to exit code 2."""


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(config, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(config).__name__}")
    return config


def _require(cfg: dict, key: str, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"{where} is missing required key {key!r}")
    return cfg[key]


def _lattice(cfg: dict) -> LatticeSpec:
    block = _require(cfg, "lattice")
    if not isinstance(block, dict):
        raise ConfigError("'lattice' must be an object")
    try:
        return LatticeSpec.from_json_dict(block)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"invalid lattice block: {exc}") from exc


def _site_ordinal(spec: LatticeSpec, value) -> int:
    try:
        ordinal = site_from_label(value) if isinstance(value, str) else int(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid site {value!r}: {exc}") from exc
    if not (0 <= ordinal < spec.n_sites):
        raise ConfigError(
            f"site {value!r} (ordinal {ordinal}) is outside the {spec.n_sites}-site lattice"
        )
    return ordinal


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _provenance(command: str, cfg: dict, seed: int) -> list[str]:
    lines = [f"toporouter {command}", f"version: {tool_version()}"]
    lattice = cfg.get("lattice")
    if isinstance(lattice, dict):
        lines.append(
            "lattice: n_cells={} j={} extra_hop={}".format(
                lattice.get("n_cells"), lattice.get("j", 1.0), lattice.get("extra_hop")
            )
        )
    lines.append(f"seed: {seed}")
    return lines


def _phase_reference(state) -> int:
    # a1 anchors the routed pattern; fall back to the brightest site when a1
    # is dark (e.g. the mode at theta = 0).
    amps = state.amplitudes
    if abs(amps[site_a(1)]) >= evolution.PHASE_AMPLITUDE_FLOOR:
        return site_a(1)
    return int(np.argmax(np.abs(amps)))


# ---------------------------------------------------------------------------
# command handlers: each returns (output paths, manifest results)

def _cmd_spectrum(cfg: dict, out: Path, seed: int, workers: int):
    spec = _lattice(cfg)
    points = int(cfg.get("theta_points", 629))
    if points < 2:
        raise ConfigError(f"theta_points must be >= 2, got {points}")
    table = spectral.spectrum_vs_theta(spec, np.linspace(0.0, 2 * np.pi, points))
    prov = _provenance("spectrum", cfg, seed)
    L = spec.n_sites

    spectrum_csv = write_csv(
        ResultTable(
            columns=("theta",) + tuple(f"E{k}" for k in range(L)),
            rows=tuple(
                (float(t),) + tuple(float(e) for e in row)
                for t, row in zip(table.thetas, table.energies)
            ),
            provenance=tuple(prov),
        ),
        out / "spectrum.csv",
    )
    density_csv = write_csv(
        ResultTable(
            columns=("theta", "abs_zero_energy")
            + tuple(f"rho_{site_label(k)}" for k in range(L)),
            rows=tuple(
                (float(t), float(e0)) + tuple(float(d) for d in row)
                for t, e0, row in zip(
                    table.thetas, table.zero_mode_abs_energy, table.zero_mode_density
                )
            ),
            provenance=tuple(prov),
        ),
        out / "zero_mode_density.csv",
    )

    plotted = read_csv(spectrum_csv)
    thetas = plotted.column("theta")
    series = [
        (thetas, plotted.column(f"E{k}"), "") for k in range(L)
    ]
    svg = svgplot.line_plot(
        series,
        title=f"Band structure, L={L}" + ("" if spec.extra_hop is None else f", extra hop m={spec.extra_hop}"),
        xlabel="theta (rad)",
        ylabel="energy (J)",
        legend=False,
    )
    svg_path = out / "spectrum.svg"
    svg_path.write_text(svg, encoding="utf-8")
    results = {"max_abs_zero_energy": float(np.max(table.zero_mode_abs_energy))}
    return [spectrum_csv, density_csv, svg_path], results


def _cmd_zeromode(cfg: dict, out: Path, seed: int, workers: int):
    spec = _lattice(cfg)
    theta = float(_require(cfg, "theta"))
    if not np.isfinite(theta):
        raise ConfigError("theta must be finite")
    zm = spectral.zero_mode(build_hamiltonian(spec, theta))
    reference = _phase_reference(zm.state)
    profile = evolution.phase_profile(zm.state, reference)
    overlap = None
    if spec.extra_hop is None:
        analytic = spectral.analytic_zero_mode(spec, theta)
        overlap = float(
            abs(np.vdot(analytic.amplitudes, zm.state.amplitudes))
        )
    prov = _provenance("zeromode", cfg, seed) + [f"theta: {theta!r}"]
    mode_csv = write_csv(
        ResultTable(
            columns=("site", "ordinal", "density", "phase"),
            rows=tuple(
                (site_label(k), k, float(zm.state.populations[k]), float(profile[k]))
                for k in range(spec.n_sites)
            ),
            provenance=tuple(prov),
        ),
        out / "mode.csv",
    )
    plotted = read_csv(mode_csv)
    colors = []
    for phase in plotted.column("phase"):
        if not math.isfinite(phase):
            colors.append("#c0c0c0")
        elif abs(phase) < np.pi / 2:
            colors.append("#1f77b4")
        else:
            colors.append("#d62728")
    svg = svgplot.bar_chart(
        [str(s) for s in plotted.column("site")],
        plotted.column("density"),
        title=f"Zero mode at theta={theta:.4g} (phase 0 blue, pi red)",
        xlabel="site",
        ylabel="density",
        colors=colors,
    )
    svg_path = out / "mode.svg"
    svg_path.write_text(svg, encoding="utf-8")
    results = {
        "abs_energy": abs(zm.energy),
        "analytic_overlap": overlap,
        "phase_reference": site_label(reference),
    }
    return [mode_csv, svg_path], results


def _cmd_gap_scan(cfg: dict, out: Path, seed: int, workers: int):
    scan = _require(cfg, "scan")
    if not isinstance(scan, dict):
        raise ConfigError("'scan' must be an object")
    kind = _require(scan, "kind", "scan block")
    points = int(cfg.get("theta_points", 250))
    refine = bool(cfg.get("refine", False))
    try:
        grid = spectral.gap_scan_grid(points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    prov = _provenance("gap-scan", cfg, seed) + [
        f"theta_points: {points}",
        f"refine: {refine}",
    ]

    if kind == "location":
        spec = _lattice(cfg)
        if spec.extra_hop is not None:
            raise ConfigError("location scans set the hop location; leave extra_hop null")
        m_values = _require(scan, "m_values", "scan block")
        if not m_values:
            raise ConfigError("m_values is empty")
        try:
            pairs = spectral.gap_vs_location(spec, [int(m) for m in m_values], grid, refine)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        csv_path = write_csv(
            ResultTable(
                columns=("m", "delta_e", "theta_at_min"),
                rows=tuple(
                    (m, float(r.delta_e), float(r.theta_at_min)) for m, r in pairs
                ),
                provenance=tuple(prov),
            ),
            out / "gap_vs_m.csv",
        )
        x_col, xlabel = "m", "extra hop location m"
    elif kind == "size":
        l_values = _require(scan, "l_values", "scan block")
        if not l_values:
            raise ConfigError("l_values is empty")
        try:
            pairs = spectral.gap_vs_size([int(v) for v in l_values], grid, refine)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        csv_path = write_csv(
            ResultTable(
                columns=("L", "delta_e", "theta_at_min"),
                rows=tuple(
                    (L, float(r.delta_e), float(r.theta_at_min)) for L, r in pairs
                ),
                provenance=tuple(prov),
            ),
            out / "gap_vs_L.csv",
        )
        x_col, xlabel = "L", "lattice size L"
    else:
        raise ConfigError(f"scan kind must be 'location' or 'size', got {kind!r}")

    plotted = read_csv(csv_path)
    svg = svgplot.line_plot(
        [(plotted.column(x_col), plotted.column("delta_e"), "minimal gap")],
        title="Minimal gap along the ramp",
        xlabel=xlabel,
        ylabel="gap (J)",
    )
    svg_path = out / "plot.svg"
    svg_path.write_text(svg, encoding="utf-8")
    results = {
        "delta_e": {str(key): float(r.delta_e) for key, r in pairs},
    }
    return [csv_path, svg_path], results


def _disorder_from(cfg: dict, spec: LatticeSpec, default_seed: int):
    block = cfg.get("disorder")
    if block is None:
        return None
    if not isinstance(block, dict):
        raise ConfigError("'disorder' must be an object or null")
    try:
        kind = DisorderKind(_require(block, "kind", "disorder block"))
    except ValueError as exc:
        raise ConfigError(
            f"unknown disorder kind {block.get('kind')!r}; expected one of "
            f"{[k.value for k in DisorderKind]}"
        ) from exc
    w = float(_require(block, "w", "disorder block"))
    seed = int(block.get("seed", default_seed))
    try:
        return sample_disorder(spec, kind, w, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _ramp_from(cfg: dict) -> evolution.RampSchedule:
    block = _require(cfg, "ramp")
    if not isinstance(block, dict):
        raise ConfigError("'ramp' must be an object")
    try:
        return evolution.RampSchedule(
            omega=float(_require(block, "omega", "ramp block")),
            dt=float(block.get("dt", 0.01)),
            sample_stride=int(block.get("sample_stride", 1000)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid ramp block: {exc}") from exc


def _cmd_evolve(cfg: dict, out: Path, seed: int, workers: int):
    spec = _lattice(cfg)
    ramp = _ramp_from(cfg)
    disorder = _disorder_from(cfg, spec, seed)
    result = evolution.evolve(spec, ramp, disorder)
    prov = _provenance("evolve", cfg, seed) + [
        f"omega: {ramp.omega!r} dt: {ramp.dt!r}",
        "disorder: "
        + (
            "none"
            if disorder is None
            else f"{disorder.kind.value} w={disorder.w!r} seed={disorder.seed}"
        ),
    ]
    trajectory_csv = write_csv(
        evolution.occupancy_trajectory(result).with_provenance(prov),
        out / "trajectory.csv",
    )
    final_csv = write_csv(
        ResultTable(
            columns=("site", "ordinal", "re", "im", "density", "phase"),
            rows=tuple(
                (
                    site_label(k),
                    k,
                    float(result.final_state.amplitudes[k].real),
                    float(result.final_state.amplitudes[k].imag),
                    float(result.final_state.populations[k]),
                    float(result.phase_profile[k]),
                )
                for k in range(spec.n_sites)
            ),
            provenance=tuple(prov),
        ),
        out / "final_state.csv",
    )
    plotted = read_csv(trajectory_csv)
    times = plotted.column("t")
    series = [
        (times, plotted.column(f"pop_{site_label(k)}"), site_label(k))
        for k in range(0, spec.n_sites, 2)  # a-sites carry the routed signal
    ]
    svg = svgplot.line_plot(
        series,
        title=f"Ramp at omega={ramp.omega:.3g}" + ("" if disorder is None else f", {disorder.kind.value} W={disorder.w:g}"),
        xlabel="t (1/J)",
        ylabel="site density",
    )
    svg_path = out / "evolve.svg"
    svg_path.write_text(svg, encoding="utf-8")
    results = {
        "fidelity": result.fidelity,
        "norm_drift": result.norm_drift,
        "zero_energy_gap_min": result.zero_energy_gap_min,
        "final_phases": {
            site_label(k): _json_safe(float(result.phase_profile[k]))
            for k in range(spec.n_sites)
        },
    }
    return [trajectory_csv, final_csv, svg_path], results


def _cmd_sweep(cfg: dict, out: Path, seed: int, workers: int):
    spec = _lattice(cfg)
    block = _require(cfg, "sweep")
    if not isinstance(block, dict):
        raise ConfigError("'sweep' must be an object")
    ramp_block = cfg.get("ramp", {})
    try:
        kind = DisorderKind(_require(block, "kind", "sweep block"))
    except ValueError as exc:
        raise ConfigError(f"unknown disorder kind {block.get('kind')!r}") from exc
    try:
        sweep = evolution.sweep_fidelity(
            spec,
            omega_values=[float(v) for v in _require(block, "omega_values", "sweep block")],
            w_values=[float(v) for v in _require(block, "w_values", "sweep block")],
            kind=kind,
            n_seeds=int(block.get("n_seeds", 10)),
            base_seed=seed,
            dt=float(ramp_block.get("dt", 0.01)),
            sample_stride=int(ramp_block.get("sample_stride", 1000)),
            workers=workers,
            max_jobs=int(block.get("max_jobs", 4096)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    prov = _provenance("sweep", cfg, seed) + [
        f"kind: {kind.value} n_seeds: {sweep.n_seeds}",
    ]
    heatmap_csv = write_csv(sweep.to_table().with_provenance(prov), out / "heatmap.csv")

    plotted = read_csv(heatmap_csv)
    omegas = sorted(set(plotted.column("log10_omega")))
    ws = sorted(set(plotted.column("w")))
    z = [[math.nan] * len(ws) for _ in omegas]
    for row_lg, row_w, row_mean in zip(
        plotted.column("log10_omega"), plotted.column("w"), plotted.column("mean_f")
    ):
        z[omegas.index(row_lg)][ws.index(row_w)] = row_mean
    svg = svgplot.heatmap(
        ws,
        omegas,
        z,
        title=f"Mean fidelity, {kind.value} disorder ({sweep.n_seeds} seeds)",
        xlabel="disorder strength W",
        ylabel="log10(omega)",
        colorbar_label="mean F",
    )
    svg_path = out / "heatmap.svg"
    svg_path.write_text(svg, encoding="utf-8")
    results = {
        "kind": kind.value,
        "n_seeds": sweep.n_seeds,
        "base_seed": sweep.base_seed,
        "min_cell_mean_f": float(min(c.mean_f for c in sweep.cells)),
    }
    return [heatmap_csv, svg_path], results


def _cmd_detect(cfg: dict, out: Path, seed: int, workers: int):
    spec = _lattice(cfg)
    theta = float(_require(cfg, "theta"))
    drive_block = _require(cfg, "drive")
    if not isinstance(drive_block, dict):
        raise ConfigError("'drive' must be an object")
    site = _site_ordinal(spec, _require(drive_block, "site", "drive block"))
    amplitude = float(drive_block.get("amplitude", 1.0))
    kappa = float(drive_block.get("kappa", 0.1))
    if kappa <= 0:
        raise ConfigError(f"kappa must be > 0, got {kappa}")
    det_block = cfg.get("detuning", {})
    lo = float(det_block.get("min", -3.0))
    hi = float(det_block.get("max", 3.0))
    points = int(det_block.get("points", 601))
    if points < 2 or hi <= lo:
        raise ConfigError("detuning block needs min < max and points >= 2")
    table = detection.detection_spectrum(
        spec, theta, site, np.linspace(lo, hi, points), kappa=kappa, amplitude=amplitude
    )
    prov = _provenance("detect", cfg, seed) + [
        f"theta: {theta!r} drive: {site_label(site)} amplitude: {amplitude!r} kappa: {kappa!r}",
    ]
    L = spec.n_sites
    labels = [site_label(k) for k in range(L)]
    detection_csv = write_csv(
        ResultTable(
            columns=("detuning",)
            + tuple(f"amp_{s}" for s in labels)
            + tuple(f"pop_{s}" for s in labels),
            rows=tuple(
                (float(d),)
                + tuple(float(v) for v in np.abs(table.means[i]))
                + tuple(float(v) for v in table.populations[i])
                for i, d in enumerate(table.detunings)
            ),
            provenance=tuple(prov),
        ),
        out / "detection.csv",
    )
    plotted = read_csv(detection_csv)
    detunings = plotted.column("detuning")
    series = [
        (detunings, plotted.column(f"pop_{label}"), label if k % 2 == 0 else "")
        for k, label in enumerate(labels)
    ]
    svg = svgplot.line_plot(
        series,
        title=f"Detection spectrum, drive {site_label(site)} at theta={theta:.4g}",
        xlabel="detuning (J)",
        ylabel="steady-state population",
    )
    svg_path = out / "detection.svg"
    svg_path.write_text(svg, encoding="utf-8")

    res_pops = table.populations[table.resonance_index]
    total = float(res_pops.sum())
    dominant = [
        labels[k] for k in np.argsort(res_pops)[::-1] if res_pops[k] >= 0.05 * total
    ]
    results = {
        "resonance_detuning": float(table.detunings[table.resonance_index]),
        "resonance_total_population": total,
        "dominant_sites": dominant,
    }
    return [detection_csv, svg_path], results


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "zeromode": _cmd_zeromode,
    "gap-scan": _cmd_gap_scan,
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "detect": _cmd_detect,
}

_HELP = {
    "spectrum": "eigenvalues and zero-mode density over a theta grid",
    "zeromode": "numeric zero mode (and analytic cross-check) at one theta",
    "gap-scan": "minimal gap versus extra-hop location or lattice size",
    "evolve": "one adiabatic ramp with optional quenched disorder",
    "sweep": "fidelity statistics over an (omega x W x seed) grid",
    "detect": "driven-dissipative steady-state detection spectrum",
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="toporouter",
        description="Topological state routing on a long-range SSH lattice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler_help in _HELP.items():
        p = sub.add_parser(name, help=handler_help)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", help="output directory (overrides config out_dir)")
        p.add_argument("--seed", type=int, help="base seed (overrides config seed)")
        p.add_argument(
            "--workers",
            type=int,
            help="worker threads (overrides config and TOPOROUTER_WORKERS)",
        )
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        out = Path(args.out or cfg.get("out_dir", "."))
        out.mkdir(parents=True, exist_ok=True)
        seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
        try:
            workers = evolution.resolve_workers(
                args.workers if args.workers is not None else cfg.get("workers")
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        outputs, results = _HANDLERS[args.command](cfg, out, seed, workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericsError as exc:
        print(f"numeric contract failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    resolved = dict(cfg)
    resolved.update({"out_dir": str(out), "seed": seed, "workers": workers})
    manifest = write_manifest(
        out, args.command, _json_safe(resolved), outputs, _json_safe(results)
    )
    names = " ".join(p.name for p in outputs + [manifest])
    print(f"wrote {names} in {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
