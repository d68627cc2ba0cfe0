"""Command line interface.

Verbs: ``simulate`` (model spectra), ``sweep`` (grid / bandwidth / dynamic
range), ``fit`` (all fitter modes), ``cool`` (occupancy vs power), ``noise``
(added-noise budget) and ``synth`` (seeded test data with a truth sidecar).

Exit code 0 on success.  Failures print a one-line JSON object
``{"error": <category>, "message": ...}`` to stderr and exit with a stable
nonzero code per category.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .. import __version__
from ..errors import EmconvError, InvalidInputError
from ..fitters import FitProblem, fit
from ..model import angular_to_hz, hz_to_angular, operating_point
from ..scattering import conversion_spectrum
from .config import load_config, preset
from .dataio import (read_power_spectrum, read_spectrum, read_xy, write_json,
                     write_power_spectrum, write_spectrum)
from .experiments import (NoiseSpec, SweepAxis, SweepSpec, run_bandwidth_sweep,
                          run_cooling_curve, run_cooperativity_grid,
                          run_dynamic_range, run_noise_budget,
                          synthesize_spectrum)

EXIT_CODES = {
    "internal": 1,
    "config": 3,
    "invalid-input": 4,
    "io": 5,
    "data-format": 6,
    "initialization": 7,
    "singularity": 8,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else preset(args.preset)
        outdir = args.out or os.environ.get("EMCONV_OUT") or "."
        os.makedirs(outdir, exist_ok=True)
        if args.format != "csv":
            raise InvalidInputError(f"unsupported output format {args.format!r}")
        return args.handler(args, cfg, outdir)
    except EmconvError as exc:
        _emit_error(exc.category, str(exc))
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        _emit_error("io", str(exc))
        return EXIT_CODES["io"]


def _emit_error(category, message):
    print(json.dumps({"error": category, "message": message}), file=sys.stderr)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="emconv",
        description="Electromechanical microwave frequency converter toolkit.")
    parser.add_argument("--version", action="version",
                        version=f"emconv {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="device configuration file (INI)")
    common.add_argument("--preset", default="fink2018",
                        help="built-in device preset (default: fink2018)")
    common.add_argument("--out", help="output directory "
                        "(default: $EMCONV_OUT or current directory)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--format", default="csv", help="output format")

    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("simulate", parents=[common],
                       help="forward-model spectra from the configuration")
    p.add_argument("--model", required=True,
                   choices=("reflection", "eit", "conversion"))
    p.add_argument("--port", type=int, default=1, choices=(1, 2))
    p.add_argument("--center-hz", type=float, help="window center "
                   "(default: resonator frequency, or 0 detuning)")
    p.add_argument("--span-hz", type=float, help="window span "
                   "(default: 20 kappa for reflection, 2 kappa for eit, "
                   "5 total linewidths for conversion)")
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common],
                       help="grid, bandwidth and dynamic-range sweeps")
    p.add_argument("kind", choices=("grid", "bandwidth", "dynamic-range"))
    p.add_argument("--c1", help="comma list of cooperativities, axis 1")
    p.add_argument("--c2", help="comma list of cooperativities, axis 2")
    p.add_argument("--p1", help="power axis 1 as start:stop:step [dBm]")
    p.add_argument("--p2", help="power axis 2 as start:stop:step [dBm]")
    p.add_argument("--coops", default="1,10,35,122",
                   help="matched cooperativities for the bandwidth sweep")
    p.add_argument("--flux", default="1e6,1e7,1e8,1e9,2e9",
                   help="signal photon fluxes for the dynamic-range sweep")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("fit", parents=[common],
                       help="fit measured or synthesized data files")
    p.add_argument("--model", required=True,
                   choices=("single-reflection", "two-mode-eit",
                            "lorentzian", "power-law"))
    p.add_argument("--data", required=True, nargs="+",
                   help="spectrum CSV (two files for two-mode-eit)")
    p.add_argument("--port", type=int, default=1, choices=(1, 2),
                   help="port label of a single-reflection spectrum")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("cool", parents=[common],
                       help="single-tone cooling: occupancy vs drive power")
    p.add_argument("--drive", type=int, default=1, choices=(1, 2))
    p.add_argument("--p-start", type=float, default=-14.0)
    p.add_argument("--p-stop", type=float, default=0.0)
    p.add_argument("--p-step", type=float, default=2.0)
    p.set_defaults(handler=cmd_cool)

    p = sub.add_parser("noise", parents=[common],
                       help="added-noise budget over drive powers")
    p.add_argument("--p1", help="comma list of drive-1 powers [dBm] "
                   "(default: configured power)")
    p.add_argument("--p2", help="comma list of drive-2 powers [dBm]")
    p.set_defaults(handler=cmd_noise)

    p = sub.add_parser("synth", parents=[common],
                       help="synthesize noisy test data plus truth sidecar")
    p.add_argument("--model", required=True,
                   choices=("single-reflection", "two-mode-eit"))
    p.add_argument("--port", type=int, default=1, choices=(1, 2))
    p.add_argument("--sigma", type=float, default=0.0,
                   help="complex noise std per quadrature")
    p.add_argument("--center-hz", type=float)
    p.add_argument("--span-hz", type=float)
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(handler=cmd_synth)
    return parser


def _window(cfg, args, model):
    i = args.port - 1
    res = cfg.resonators[i]
    f_res = angular_to_hz(res.omega)
    kappa_hz = angular_to_hz(res.kappa)
    if model == "conversion":
        state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
        span = args.span_hz or 5.0 * angular_to_hz(state.total_linewidth)
        center = args.center_hz or 0.0
    elif model in ("reflection", "single-reflection"):
        span = args.span_hz or 20.0 * kappa_hz
        center = args.center_hz or f_res
    else:
        span = args.span_hz or 2.0 * kappa_hz
        center = args.center_hz or f_res
    return np.linspace(center - span / 2.0, center + span / 2.0, args.points)


def cmd_simulate(args, cfg, outdir):
    if args.model == "conversion":
        state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
        delta = hz_to_angular(_window(cfg, args, "conversion"))
        spec = conversion_spectrum(cfg.resonators, cfg.mech, state, delta)
        path = os.path.join(outdir, "sim_conversion.csv")
        write_power_spectrum(path, spec.freq, spec.power)
        write_json(path + ".meta.json", {
            "tool": "emconv", "version": __version__, "model": "conversion",
            "c1": state.coop[0], "c2": state.coop[1],
            "expected_fwhm_hz": angular_to_hz(state.total_linewidth)})
        print(path)
        return 0
    model_id = "single-reflection" if args.model == "reflection" else "two-mode-eit"
    freq = _window(cfg, args, args.model)
    spec, truth = synthesize_spectrum(cfg, model_id, freq, noise=None,
                                      port=args.port)
    path = os.path.join(outdir, f"sim_{args.model}_port{args.port}.csv")
    write_spectrum(path, spec)
    truth.update({"tool": "emconv", "version": __version__})
    write_json(path + ".meta.json", truth)
    print(path)
    return 0


def _parse_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad numeric list {text!r}") from exc


def _parse_range(text):
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise InvalidInputError(f"bad range {text!r}, expected start:stop:step") from exc
    return SweepAxis.db_steps("", start, stop, step).values.tolist()


def cmd_sweep(args, cfg, outdir):
    if args.kind == "grid":
        if args.c1 and args.c2:
            spec = SweepSpec(axes=(SweepAxis("c1", _parse_list(args.c1)),
                                   SweepAxis("c2", _parse_list(args.c2))))
        elif args.p1 and args.p2:
            spec = SweepSpec(axes=(SweepAxis("p1", _parse_range(args.p1)),
                                   SweepAxis("p2", _parse_range(args.p2))))
        else:
            spec = None
        table = run_cooperativity_grid(cfg, spec)
        path = os.path.join(outdir, "sweep_grid.csv")
    elif args.kind == "bandwidth":
        table = run_bandwidth_sweep(cfg, _parse_list(args.coops))
        path = os.path.join(outdir, "sweep_bandwidth.csv")
    else:
        table = run_dynamic_range(cfg, _parse_list(args.flux))
        path = os.path.join(outdir, "sweep_dynamic_range.csv")
    table.meta.update({"seed": args.seed, "verb": f"sweep {args.kind}"})
    table.write(path)
    print(path)
    return 0


def cmd_fit(args, cfg, outdir):
    if args.model == "single-reflection":
        meta = "S11" if args.port == 1 else "S22"
        problem = FitProblem(model=args.model,
                             data=(read_spectrum(args.data[0], meta=meta),))
    elif args.model == "two-mode-eit":
        if len(args.data) != 2:
            raise InvalidInputError("two-mode-eit fit needs two data files")
        spectra = (read_spectrum(args.data[0], meta="S11"),
                   read_spectrum(args.data[1], meta="S22"))
        drive_freqs = tuple(d.drive_frequency(r, cfg.mech)
                            for d, r in zip(cfg.drives, cfg.resonators))
        problem = FitProblem(model=args.model, data=spectra,
                             fixed={"resonators": cfg.resonators,
                                    "drive_freqs": drive_freqs,
                                    "calibrations": cfg.calibrations})
    elif args.model == "lorentzian":
        problem = FitProblem(model=args.model,
                             data=(read_power_spectrum(args.data[0]),))
    else:
        problem = FitProblem(model=args.model, data=(read_xy(args.data[0]),))

    result = fit(problem)
    payload = {
        "tool": "emconv", "version": __version__, "model": args.model,
        "params": result.params, "derived": result.derived,
        "stderr": {n: result.stderr(n) for n in result.param_names},
        "residual_norm": result.residual_norm,
        "iterations": result.iterations,
        "converged": result.converged,
        "message": result.message,
        "active_bounds": list(result.active_bounds),
    }
    path = os.path.join(outdir, f"fit_{args.model}.json")
    write_json(path, _json_safe(payload))
    print(path)
    if not result.converged:
        _emit_error("initialization", f"fit did not converge: {result.message}")
        return EXIT_CODES["initialization"]
    return 0


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and math.isnan(obj):
        return None
    return obj


def cmd_cool(args, cfg, outdir):
    powers = SweepAxis.db_steps("p", args.p_start, args.p_stop, args.p_step).values
    table = run_cooling_curve(cfg, args.drive, powers)
    table.meta.update({"seed": args.seed, "verb": "cool"})
    path = os.path.join(outdir, f"cool_drive{args.drive}.csv")
    table.write(path)
    print(path)
    return 0


def cmd_noise(args, cfg, outdir):
    p1 = _parse_list(args.p1) if args.p1 else [cfg.drives[0].p_applied]
    p2 = _parse_list(args.p2) if args.p2 else [cfg.drives[1].p_applied]
    pairs = [(a, b) for a in p1 for b in p2]
    table = run_noise_budget(cfg, pairs)
    table.meta.update({"seed": args.seed, "verb": "noise"})
    path = os.path.join(outdir, "noise_budget.csv")
    table.write(path)
    print(path)
    return 0


def cmd_synth(args, cfg, outdir):
    freq = _window(cfg, args, args.model)
    noise = NoiseSpec(sigma=args.sigma, seed=args.seed)
    spec, truth = synthesize_spectrum(cfg, args.model, freq, noise=noise,
                                      port=args.port)
    stem = f"synth_{args.model}_port{args.port}"
    path = os.path.join(outdir, stem + ".csv")
    write_spectrum(path, spec)
    truth.update({"tool": "emconv", "version": __version__})
    write_json(os.path.join(outdir, stem + ".truth.json"), truth)
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
