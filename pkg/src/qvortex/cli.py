"""Command-line front end: ``qvortex {evolve,spectrum,fractal,turbulence,validate}``.

Each run writes one directory holding ``config.snapshot`` (the resolved
configuration as JSON), its data files and ``report.json``. Output contains no
timestamps or timings, so a (config, seed) pair reproduces it byte for byte.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (including a
failed acceptance check under ``validate``), 4 resource cap exceeded.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import dynamics, filament, hierarchy, io, spectrum, turbulence, validation
from .config import load_config
from .errors import ConfigError, ConsistencyError, NumericalError, ResourceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


def _domain(cfg):
    d = cfg.domain
    return filament.FluidDomain(R0=d.R0, R1=d.R1, rho0=d.rho0, v0=d.v0, Rf=d.Rf, hbar=d.hbar,
                                mu0=d.mu0, sigma_convention=d.sigma_convention)


def _prepare(cfg, out, command):
    path = out or os.path.join(cfg.output.directory, command)
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "config.snapshot"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cfg.snapshot())
    return path


def _finish(path, report, files):
    report["files"] = {name: io.file_digest(os.path.join(path, name)) for name in sorted(files)}
    io.write_json(os.path.join(path, "report.json"), report)


def cmd_evolve(cfg, out):
    dyn = cfg.dynamics
    path = _prepare(cfg, out, "evolve")
    evo = dynamics.EvolutionConfig(dtau=dyn.dtau, n_steps=dyn.n_steps, M=dyn.M, c_stab=dyn.c_stab,
                                   save_every=dyn.save_every)
    evo.check_stability(dyn.beta1)
    if dyn.seed_modes:
        minus = {n: dyn.seed_amplitude * abs(dynamics.coupling_factor(n)) for n in dyn.seed_modes}
        modes = dynamics.ModeSpectrum.from_minus_modes(minus, M=dyn.M)
        curve = filament.reconstruct_curve(modes.to_tangent(dyn.epsilon, n=dyn.N_xi))
    else:
        curve = dynamics.exact_ring(0.0, dyn.N_xi, dyn.beta1, dyn.epsilon, dyn.omega)
    traj = dynamics.integrate_lie(curve, evo, dyn.beta1, dyn.epsilon, dyn.omega)

    # rigid-ring probe with the same resolution and step
    probe_err, _ = validation.ring_exact_error(dyn.epsilon * dyn.omega, n_xi=dyn.N_xi, dtau=dyn.dtau,
                                               n_steps=dyn.n_steps, M=dyn.M, beta1=dyn.beta1)
    table = []
    for n in dyn.seed_modes:
        measured = abs(dynamics.measure_mode_frequency(traj, n))
        predicted = abs(dyn.beta1) * dynamics.kelvin_rate(n)
        table.append({"n": n, "measured": measured, "predicted": predicted,
                      "relative_error": abs(measured / predicted - 1.0)})

    name = "trajectory.csv" if cfg.output.format == "csv" else "trajectory.jsonl"
    writer = io.write_trajectory_csv if cfg.output.format == "csv" else io.write_trajectory_jsonl
    writer(os.path.join(path, name), traj.tau, traj.curves)
    io.write_trajectory_binary(os.path.join(path, "trajectory.vtxt"), traj.tau, traj.curves)
    report = {
        "command": "evolve",
        "n_records": int(traj.tau.size),
        "final_tau": float(traj.tau[-1]),
        "max_closure_drift": traj.max_closure_drift,
        "max_stretch_drift": traj.max_stretch_drift,
        "exact_solution_error": probe_err,
        "mode_frequency_table": table,
    }
    _finish(path, report, [name, "trajectory.vtxt"])
    return report


def cmd_spectrum(cfg, out):
    sp = cfg.spectrum
    dom = _domain(cfg)
    path = _prepare(cfg, out, "spectrum")
    bounds = spectrum.SpectrumBounds(s_max=sp.s_max, m_max=sp.m_max, ell_max=sp.ell_max, k_max=sp.k_max,
                                     s_min=sp.s_min, m_min=sp.m_min, ell_min=sp.ell_min, k_min=sp.k_min)
    spec = spectrum.enumerate_spectrum(dom, bounds, beta1=cfg.dynamics.beta1, cap=sp.cap,
                                       axial_convention=sp.axial_convention, allow_m0=sp.allow_m0)
    name = "spectrum.csv" if cfg.output.format == "csv" else "spectrum.jsonl"
    (spec.to_csv if cfg.output.format == "csv" else spec.to_jsonl)(os.path.join(path, name))
    top = spectrum.n_max(dom)
    report = {
        "command": "spectrum",
        "entries": len(spec),
        "sigma_ph": dom.sigma_ph,
        "N_max": top,
        "gamma_min_formula": spectrum.gamma_min(dom),
        "gamma_at_N_max": spectrum.circulation((top, 1, 0, 1), dom, sp.axial_convention),
        "T_max_formula": hierarchy.t_max(dom),
    }
    if top >= 1:
        gap = spectrum.delta_gamma_min(dom, top - 1, sp.axial_convention)
        report["delta_gamma_min"] = {"s": gap.s, "exact": gap.exact, "closed_form": gap.closed_form,
                                     "relative_deviation": gap.relative_deviation,
                                     "closed_form_valid": gap.closed_form_valid}
    if len(spec):
        report["gamma_range"] = [float(spec.gamma.min()), float(spec.gamma.max())]
        report["T_max_enumerated"] = float(spec.T_w.max())
    _finish(path, report, [name])
    return report


def _fractal_set(cfg):
    fr = cfg.fractal
    if fr.source == "reciprocal":
        return hierarchy.reciprocal_set(max(1, fr.n_lo), fr.n_hi)
    if fr.source == "uniform":
        return hierarchy.uniform_set(fr.n_hi)
    if fr.source == "gamma_slice":
        dom = _domain(cfg)
        s_hi = fr.s_hi or spectrum.n_max(dom)
        return hierarchy.gamma_slice(dom, fr.s_lo, s_hi, fr.m, fr.ell, fr.k, cfg.spectrum.axial_convention)
    try:
        data = np.genfromtxt(fr.input, delimiter=",", names=True)
    except OSError as exc:
        raise ConfigError(f"fractal.input: cannot read {fr.input}") from exc
    if data.dtype.names is None or fr.column not in data.dtype.names:
        raise ConfigError(f"fractal.column: no column {fr.column!r} in {fr.input}")
    return hierarchy.ScaleSet(np.atleast_1d(data[fr.column]), f"{fr.input}:{fr.column}")


def cmd_fractal(cfg, out):
    fr = cfg.fractal
    path = _prepare(cfg, out, "fractal")
    values = _fractal_set(cfg)
    fit = hierarchy.box_counting_dimension(values, hierarchy.geometric_ladder(fr.j_lo, fr.j_hi),
                                           min_points=fr.min_points)
    with open(os.path.join(path, "box_counts.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("delta,count,residual\n")
        for d, c, r in zip(fit.deltas, fit.counts, fit.residuals):
            fh.write(f"{d:.17g},{c},{r:.17g}\n")
    report = {
        "command": "fractal",
        "label": fit.label,
        "dimension": fit.dimension,
        "ci": list(fit.ci),
        "window": list(fit.window),
        "r2": fit.r2,
        "n_points": fit.n_points,
        "degenerate": fit.degenerate,
        "delta_cut": fit.delta_cut,
    }
    _finish(path, report, ["box_counts.csv"])
    return report


def _register(cfg):
    tb = cfg.turbulence
    if tb.indices:
        return turbulence.ModeRegister(tuple(tuple(w) for w in tb.indices))
    return turbulence.ModeRegister.from_cap(tb.K, None if tb.s_max < 0 else tb.s_max, tb.internal_modes)


def _register_spectrum(cfg, register):
    dom = _domain(cfg)
    idx = np.array([w[:4] for w in register.indices])
    lo, hi = idx.min(axis=0), idx.max(axis=0)
    bounds = spectrum.SpectrumBounds(s_max=int(hi[0]), m_max=int(hi[1]), ell_max=int(hi[2]), k_max=int(hi[3]),
                                     s_min=int(lo[0]), m_min=int(lo[1]), ell_min=int(lo[2]), k_min=int(lo[3]))
    top = spectrum.n_max(dom)
    if hi[0] > top:
        raise ConsistencyError(f"register mode with s = {hi[0]} has no spectrum entry (N_max = {top})")
    return spectrum.enumerate_spectrum(dom, bounds, beta1=cfg.dynamics.beta1, cap=cfg.spectrum.cap,
                                       axial_convention=cfg.spectrum.axial_convention,
                                       allow_m0=cfg.spectrum.allow_m0 or bool(lo[1] == 0))


def cmd_turbulence(cfg, out):
    tb = cfg.turbulence
    path = _prepare(cfg, out, "turbulence")
    register = _register(cfg)
    amp = tb.eps_t_over_hbar

    # certify the Poisson shortcut against the truncated matrix exponential
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(tb.rng_seed)))
    worst = 0.0
    for theta in rng.uniform(0.0, 2.0 * math.pi, tb.oracle_phases):
        alpha = np.exp(1j * theta)
        psi = turbulence.fock_oracle_evolve(alpha, amp, tb.n_trunc)
        ref = turbulence.coherent_state(-amp * np.conj(alpha), tb.n_trunc)
        worst = max(worst, float(np.linalg.norm(psi - ref)))
    if worst > 1e-9:
        raise ConsistencyError(f"Fock oracle and coherent state differ by {worst:.3e}")
    density = turbulence.phase_averaged_density(amp, tb.n_trunc)

    spec = _register_spectrum(cfg, register)
    ens = turbulence.CoherentEnsemble.draw(register, amp, rng_seed=tb.rng_seed)
    samples = []
    with open(os.path.join(path, "samples.jsonl"), "w", encoding="utf-8", newline="\n") as fh:
        for smp in turbulence.sample_ensemble(ens, tb.n_samples, count_cap=tb.count_cap):
            fh.write(smp.to_json() + "\n")
            samples.append(smp)
    stats = turbulence.event_statistics(samples, spec, bins=tb.bins)
    io.write_histograms_csv(os.path.join(path, "histograms.csv"), stats.histograms)
    totals = np.array([s.total for s in samples], dtype=float)
    mu = amp * amp
    report = {
        "command": "turbulence",
        "register_size": register.size,
        "eps_t_over_hbar": amp,
        "mu": mu,
        "n_samples": tb.n_samples,
        "rng_seed": tb.rng_seed,
        "oracle_max_l2_distance": worst,
        "purity": density.purity,
        "mean_count": float(totals.mean()),
        "count_variance": float(totals.var(ddof=1)) if totals.size > 1 else 0.0,
        "expected_count": register.size * mu,
        "standard_error": math.sqrt(register.size * mu / tb.n_samples),
        "n_vortices": stats.n_vortices,
        "quantiles": stats.quantiles,
    }
    _finish(path, report, ["samples.jsonl", "histograms.csv"])
    return report


def cmd_validate(cfg, out):
    path = _prepare(cfg, out, "validate")
    results = []
    for check in validation.CHECKS:
        res = check()
        print(res.line(), flush=True)
        results.append(res.to_dict())
    passed = sum(r["passed"] for r in results)
    report = {"command": "validate", "checks": results, "passed": passed,
              "failed": len(results) - passed, "all_passed": passed == len(results)}
    _finish(path, report, [])
    return report


COMMANDS = {
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "fractal": cmd_fractal,
    "turbulence": cmd_turbulence,
    "validate": cmd_validate,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML or JSON run configuration")
    common.add_argument("--seed", type=int, metavar="U64", help="override turbulence.rng_seed")
    common.add_argument("--out", metavar="DIR", help="output directory (default: <output.directory>/<command>)")
    common.add_argument("--format", choices=("csv", "jsonl"), help="tabular output format")
    parser = argparse.ArgumentParser(prog="qvortex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "integrate a perturbed ring and probe the exact solution and Kelvin rates",
        "spectrum": "enumerate circulation levels and report extremal scales",
        "fractal": "box-counting dimension of a reference set, a Gamma slice or a CSV column",
        "turbulence": "sample vortex creation from the random-phase coherent ensemble",
        "validate": "run the acceptance suite and write a pass/fail report",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {args.seed}")
            cfg.turbulence.rng_seed = args.seed
        if args.format is not None:
            cfg.output.format = args.format
        report = COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.command == "validate" and not report["all_passed"]:
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
