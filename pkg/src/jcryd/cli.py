"""``jcryd`` command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 verification failed.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import analysis, oracle, spectroscopy
from .config import RunConfig, load_config, to_angular, to_mhz
from .dynamics import RampProtocol, RampSegment, evolve_ramp
from .emit import csv_text, json_text, sidecar, table_records, write_text
from .errors import ConfigError, JcrydError
from .hamiltonians import build_cavity_jc, build_symmetric, restore_ladder
from .ladder import dressed_state, ladder
from .symbasis import SymIndex, SymState, enumerate_basis

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4


class Output:
    """Collects one main table plus optional named side tables."""

    def __init__(self, cfg: RunConfig, fmt: str, path):
        self.fmt, self.path = fmt, path
        self.tables: list[tuple[str, list[str], list]] = []

    def add(self, name, header, rows):
        self.tables.append((name, header, [list(r) for r in rows]))

    def flush(self):
        if self.fmt == "json":
            doc = {name: table_records(h, rows) for name, h, rows in self.tables}
            write_text(json_text(doc), self.path)
            return
        main, *extra = self.tables
        write_text(csv_text(main[1], main[2]), self.path)
        for name, header, rows in extra:
            target = sidecar(self.path, name)
            if target is None:
                sys.stdout.write(f"# {name}\n")
            write_text(csv_text(header, rows), target)


def _require(section, name):
    if section is None:
        raise ConfigError(f"this command needs a [{name}] section")
    return section


def cmd_ladder(cfg: RunConfig, out: Output) -> int:
    params = cfg.model.params()
    lad = ladder(params)
    rows = []
    for rung in lad.rungs:
        for lab in reversed(rung.labels):
            rows.append((rung.n, lab, to_mhz(rung.energy(lab)), to_mhz(rung.splitting),
                         to_mhz(lad.kappa_plus), to_mhz(lad.kappa_minus), to_mhz(lad.kappa[lab])))
    out.add("ladder", ["n", "branch", "epsilon", "splitting", "kappa_plus", "kappa_minus",
                       "kappa_branch"], rows)
    return EXIT_OK


def cmd_peaks(cfg: RunConfig, out: Output) -> int:
    params = cfg.model.params()
    sweep = _require(cfg.sweep, "sweep")
    om = params.omega_r
    if om == 0:
        raise ConfigError("peaks sweep is normalized by omega_r; omega_r_mhz must be > 0")
    ratios = np.linspace(sweep.start, sweep.stop, sweep.num)
    band = None
    if cfg.drift is not None:
        band = spectroscopy.drift_bands(params, "delta_r", ratios * om, cfg.drift.fraction,
                                        cfg.drift.samples, cfg.seed, cfg.drift.distribution)
    rows = []
    for i, x in enumerate(ratios):
        p = params.replace(delta_r=float(x * om))
        ps = spectroscopy.peak_positions(p)
        ref = {r.branch: r.position for r in ps.reference}
        for pk in ps:
            lo = hi = None
            if band is not None:
                _, low, high = band.curves[(pk.n, pk.branch)]
                lo, hi = float(low[i] / om), float(high[i] / om)
            rows.append((float(x), pk.n, pk.branch, pk.position / om, lo, hi, ref[pk.branch] / om))
    out.add("peaks", ["delta_over_omega", "n", "branch", "delta_uw_over_omega", "band_low",
                      "band_high", "noninteracting_reference"], rows)
    return EXIT_OK


def cmd_scan(cfg: RunConfig, out: Output) -> int:
    params = cfg.model.params()
    sc = _require(cfg.scan, "scan")
    grid = np.linspace(to_angular(sc.delta_uw_start_mhz), to_angular(sc.delta_uw_stop_mhz),
                       sc.num_points)
    init = (SymIndex.ground(sc.initial_n) if sc.initial_kind == "g"
            else SymIndex.excited(sc.initial_n, sc.initial_channel))
    scan = spectroscopy.ScanConfig(grid, sc.pulse_time_us, to_angular(sc.omega_uw_mhz), init,
                                   sc.signal, sc.threshold)
    spec = spectroscopy.simulate_scan(params, scan)
    if spec.values.ndim == 1:
        header = ["delta_uw_mhz", "signal"]
        rows = [(to_mhz(d), float(v)) for d, v in zip(grid, spec.values)]
    else:
        header = ["delta_uw_mhz"] + [f"p{n}" for n in range(params.n_atoms + 1)]
        rows = [(to_mhz(d), *map(float, v)) for d, v in zip(grid, spec.values)]
    out.add("spectrum", header, rows)
    peak_rows = [(p.channel, to_mhz(p.position), p.n, p.branch, p.height, to_mhz(p.width))
                 for p in spec.peaks]
    out.add("peaks", ["channel", "position_mhz", "n", "branch", "height", "width_mhz"], peak_rows)
    if spec.peaks.diagnostic:
        print(f"jcryd scan: {spec.peaks.diagnostic}", file=sys.stderr)
    return EXIT_OK


def _ramp_initial(rp, params) -> SymState:
    if rp.initial == "dressed":
        return dressed_state(params, rp.initial_n, rp.initial_branch)
    idx = (SymIndex.ground(rp.initial_n) if rp.initial_kind == "g"
           else SymIndex.excited(rp.initial_n, rp.initial_channel))
    return SymState.basis(idx, params)


def cmd_ramp(cfg: RunConfig, out: Output) -> int:
    rp = _require(cfg.ramp, "ramp")
    segs = tuple(
        RampSegment(s.duration_us, tuple(map(to_angular, s.delta_r_mhz)),
                    tuple(map(to_angular, s.omega_r_mhz)), tuple(map(to_angular, s.omega_uw_mhz)))
        for s in rp.segments
    )
    protocol = RampProtocol(segs, to_angular(rp.delta_uw_mhz))
    start = segs[0]
    params = cfg.model.params().replace(delta_r=start.delta_r[0], omega_r=start.omega_r[0])
    psi0 = _ramp_initial(rp, params)
    rep = evolve_ramp(protocol, params, psi0, rp.step_us, rp.samples)
    out.add("trace", ["t_us", "fidelity", "tracked_energy_mhz"],
            [(float(t), float(f), to_mhz(e)) for t, f, e in
             zip(rep.times, rep.fidelity_trace, rep.tracked_energy)])
    summary = [
        ("final_fidelity", rep.final_fidelity),
        ("norm_drift", rep.norm_drift),
        ("min_gap_mhz", to_mhz(rep.min_gap)),
        ("step_us", rep.step),
        ("convergence_delta", rep.convergence_delta),
        ("dominant_state", str(rep.final_state.dominant(params))),
    ]
    for label, pop in zip(enumerate_basis(params), rep.final_state.populations()):
        summary.append((f"population {label}", float(pop)))
    out.add("summary", ["key", "value"], summary)
    return EXIT_OK


def cmd_fit(cfg: RunConfig, out: Output) -> int:
    fs = _require(cfg.fit, "fit")
    params = cfg.model.params()
    grid = np.array([to_angular(x) for x in fs.omega_r_mhz])
    table = spectroscopy.splitting_vs_rabi(params.replace(delta_r=0.0), grid)
    if fs.noise_fraction > 0:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
        table[:, 1:] *= 1.0 + fs.noise_fraction * rng.standard_normal((table.shape[0], 2))
    single, double, est = analysis.fit_splittings(table, fs.constrain_origin, fs.weighting)
    out.add("splittings", ["omega_r_mhz", "single_atom_splitting_mhz", "two_atom_splitting_mhz"],
            [tuple(to_mhz(v) for v in row) for row in table])
    summary = [
        ("slope_single", single.slope), ("slope_single_std_err", single.slope_std_err),
        ("slope_two_atom", double.slope), ("slope_two_atom_std_err", double.slope_std_err),
        ("ratio", est.ratio), ("std_err", est.std_err),
    ]
    if fs.trials > 0:
        clean = spectroscopy.splitting_vs_rabi(params.replace(delta_r=0.0), grid)
        trials = analysis.noisy_ratio_trials(clean, fs.noise_fraction, fs.trials, cfg.seed,
                                             fs.constrain_origin, fs.weighting)
        covered = np.abs(trials[:, 0] - math.sqrt(2)) <= 3 * trials[:, 1]
        summary += [("trials", fs.trials), ("coverage_3se", float(covered.mean())),
                    ("median_ratio", float(np.median(trials[:, 0]))),
                    ("median_std_err", float(np.median(trials[:, 1])))]
    out.add("summary", ["key", "value"], summary)
    return EXIT_OK


def _verify_draws(cfg: RunConfig):
    base = cfg.model.params()
    yield base
    scale = base.omega_r if base.omega_r > 0 else 1.0
    for i in range(1, cfg.verify.draws):
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(i,)))
        om, d = rng.uniform(0.1, 2.0) * scale, rng.uniform(-3.0, 3.0) * scale
        yield base.replace(omega_r=float(om), delta_r=float(d))


def cmd_verify(cfg: RunConfig, out: Output) -> int:
    vs = _require(cfg.verify, "verify")
    factor = (lambda n: float(n)) if vs.fault == "linear_collective" else math.sqrt
    blockade = vs.blockade()
    mat_dev = eig_dev = iso_dev = 0.0
    worst_scale = 0.0
    for p in _verify_draws(cfg):
        pp = oracle.ProductParams(p, blockade)
        rep = oracle.verify_projection(pp, build_symmetric(p, collective_factor=factor))
        mat_dev = max(mat_dev, rep.max_matrix_deviation)
        eig_dev = max(eig_dev, rep.max_eigenvalue_deviation)
        worst_scale = max(worst_scale, p.n_atoms * p.omega_r**2)
        if p.n_channels == 1:
            sym = restore_ladder(build_symmetric(p, collective_factor=factor), p)
            jc = np.asarray(build_cavity_jc(p))
            rel = np.max(np.abs(np.asarray(sym) - jc)) / max(np.max(np.abs(jc)), 1e-300)
            iso_dev = max(iso_dev, float(rel))
    checks = [("max_matrix_deviation_mhz", to_mhz(mat_dev), to_mhz(vs.tolerance))]
    if math.isinf(blockade):
        checks.append(("max_eigenvalue_deviation_mhz", to_mhz(eig_dev), to_mhz(vs.tolerance)))
    else:
        checks.append(("max_eigenvalue_deviation_mhz", to_mhz(eig_dev), to_mhz(worst_scale / blockade)))
    if cfg.model.params().n_channels == 1:
        checks.append(("isomorphism_relative_deviation", iso_dev, vs.tolerance))
    rows = [(name, value, tol, bool(value <= tol)) for name, value, tol in checks]
    out.add("verify", ["check", "value", "tolerance", "passed"], rows)
    return EXIT_OK if all(r[3] for r in rows) else EXIT_VERIFY


COMMANDS = {
    "ladder": cmd_ladder,
    "peaks": cmd_peaks,
    "scan": cmd_scan,
    "ramp": cmd_ramp,
    "fit": cmd_fit,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcryd",
        description="Jaynes-Cummings ladder of Rydberg-blockaded ensembles.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", help="output path (default: config output.path or stdout)")
    parser.add_argument("--seed", type=int, help="override the config seed (u64)")
    parser.add_argument("--format", choices=["csv", "json"], help="override output format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must be an unsigned 64-bit integer")
            cfg = cfg.model_copy(update={"seed": args.seed})
    except ConfigError as exc:
        print(f"jcryd: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Output(cfg, args.format or cfg.output.format, args.out or cfg.output.path)
    try:
        code = COMMANDS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"jcryd: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except JcrydError as exc:
        print(f"jcryd: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
