"""Parameter extraction round trip on synthetic measurements.

Synthesizes noisy data the way the instruments would produce it, then runs
the full analysis chain: single-resonator reflection fit, joint two-window
EIT fit for the couplings, Lorentzian bandwidth extraction, and the
power-law heating fit.  Every estimate is compared against the generating
truth.
"""

import os

import numpy as np

from emconv import (FitProblem, angular_to_hz, fit_lorentzian, fit_power_law,
                    fit_single_reflection, fit_two_mode_eit, heating_occupancy,
                    operating_point, state_for_cooperativity,
                    conversion_spectrum)
from emconv.harness import NoiseSpec, preset, synthesize_spectrum

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = preset("fink2018")
sigma = 0.02  # complex noise per quadrature, ~34 dB SNR


def report(name, fitted, truth, unit=""):
    err = abs(fitted - truth) / abs(truth) if truth else abs(fitted)
    print(f"  {name:<14} fit {fitted:>14.6g}{unit}   "
          f"truth {truth:>14.6g}{unit}   rel err {err:.2e}")


# ---- step 1: resonator characterization from a noisy reflection trace
print("step 1: single-resonator reflection fit (port 1)")
res = cfg.resonators[0]
f0 = angular_to_hz(res.omega)
span = 16.0 * angular_to_hz(res.kappa)
freq = np.linspace(f0 - span / 2.0, f0 + span / 2.0, 4001)
spec, truth = synthesize_spectrum(cfg, "single-reflection", freq,
                                  noise=NoiseSpec(sigma, seed=1), port=1)
fr = fit_single_reflection(FitProblem(model="single-reflection", data=(spec,)))
for key in ("f0_hz", "kappa_hz", "kappa_ex_hz", "delay_s"):
    report(key, fr.params[key], truth[key])
report("eta", fr.derived["eta"], truth["eta"])

# ---- step 2: joint EIT fit of both windows for the couplings
print("step 2: two-mode EIT fit, both windows jointly")
state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
windows = []
for port in (1, 2):
    r = cfg.resonators[port - 1]
    f_feat = angular_to_hz(cfg.drives[port - 1].drive_frequency(r, cfg.mech)
                           + cfg.mech.omega_m)
    width = 40.0 * angular_to_hz(state.total_linewidth)
    grid = np.linspace(f_feat - width / 2.0, f_feat + width / 2.0, 6001)
    w, truth_eit = synthesize_spectrum(cfg, "two-mode-eit", grid,
                                       noise=NoiseSpec(sigma, seed=port),
                                       port=port)
    windows.append(w)
drive_freqs = tuple(d.drive_frequency(r, cfg.mech)
                    for d, r in zip(cfg.drives, cfg.resonators))
fr = fit_two_mode_eit(FitProblem(
    model="two-mode-eit", data=tuple(windows),
    fixed={"resonators": cfg.resonators, "drive_freqs": drive_freqs,
           "calibrations": cfg.calibrations}))
for key in ("g1_hz", "g2_hz", "gamma_m_hz", "f_m_hz"):
    report(key, fr.params[key], truth_eit[key])
report("C1", fr.derived["c1"], truth_eit["c1"])
report("C2", fr.derived["c2"], truth_eit["c2"])

# ---- step 3: conversion bandwidth from a Lorentzian fit
print("step 3: conversion bandwidth at matched C = 50")
matched = state_for_cooperativity(cfg.resonators, cfg.mech, (50.0, 50.0),
                                  g0s=tuple(d.g0 for d in cfg.drives))
delta = np.linspace(-4.0, 4.0, 3001) * matched.total_linewidth
conv = conversion_spectrum(cfg.resonators, cfg.mech, matched, delta)
rng = np.random.default_rng(9)
noisy_power = conv.power + 0.003 * rng.standard_normal(conv.power.size)
fr = fit_lorentzian(FitProblem(model="lorentzian",
                               data=((conv.freq, noisy_power),)))
report("fwhm_hz", fr.params["fwhm_hz"],
       angular_to_hz(matched.total_linewidth))

# ---- step 4: heating law from a synthesized cooling run
print("step 4: resonator heating power law")
n_drive = np.geomspace(1e3, 3e6, 40)
n_res = np.array([heating_occupancy(cfg.heating, n) for n in n_drive])
noisy = n_res * (1.0 + 0.05 * rng.standard_normal(n_res.size))
fr = fit_power_law(FitProblem(model="power-law", data=((n_drive, noisy),)),
                   reference_x=cfg.heating.reference_n)
report("amplitude", fr.params["amplitude"], cfg.heating.amplitude)
report("exponent", fr.params["exponent"], cfg.heating.exponent)
print("done")
