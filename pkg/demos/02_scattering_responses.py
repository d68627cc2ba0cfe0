"""Coherent responses: bare reflection, two-mode EIT and conversion.

Generates the three spectra the device is characterized by and saves both
plot-ready CSV files and a summary figure:

* the bare resonator reflection with its ~2 pi phase winding,
* the two-drive reflection windows with the mechanical feature of width
  Gamma riding inside each resonator dip,
* the conversion spectrum |S21|^2 whose peak is the efficiency and whose
  FWHM is the conversion bandwidth.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from emconv import (angular_to_hz, conversion_spectrum, hz_to_angular,
                    operating_point, s11_single)
from emconv.harness import preset, synthesize_spectrum, write_power_spectrum, \
    write_spectrum

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = preset("fink2018")
state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
print(f"operating point: C = ({state.coop[0]:.1f}, {state.coop[1]:.1f}), "
      f"Gamma/2pi = {angular_to_hz(state.total_linewidth):.0f} Hz")

fig, axes = plt.subplots(2, 3, figsize=(13, 7))

# ---- bare reflection of each resonator (no drives)
for i, res in enumerate(cfg.resonators):
    f0 = angular_to_hz(res.omega)
    span = 12.0 * angular_to_hz(res.kappa)
    freq = np.linspace(f0 - span / 2.0, f0 + span / 2.0, 2001)
    s11 = s11_single(res, cfg.calibrations[i], hz_to_angular(freq))
    ax = axes[0, i]
    ax.plot((freq - f0) / 1e6, np.abs(s11) ** 2, lw=1.0)
    ax.set_title(f"bare reflection, port {i + 1} (eta = {res.eta:.2f})")
    ax.set_xlabel(f"(f - {f0/1e9:.3f} GHz) [MHz]")
    ax.set_ylabel("|S11|^2")
    twin = ax.twinx()
    twin.plot((freq - f0) / 1e6, np.unwrap(np.angle(s11)), "C1", lw=0.8)
    twin.set_ylabel("phase [rad]")

# ---- EIT windows with both drives on
for port in (1, 2):
    res = cfg.resonators[port - 1]
    f0 = angular_to_hz(res.omega)
    span = 2.0 * angular_to_hz(res.kappa)
    freq = np.linspace(f0 - span / 2.0, f0 + span / 2.0, 4001)
    spec, _ = synthesize_spectrum(cfg, "two-mode-eit", freq, port=port)
    write_spectrum(os.path.join(OUT, f"eit_port{port}.csv"), spec)
    ax = axes[1, port - 1]
    ax.plot((spec.freq - f0) / 1e3, spec.power, lw=0.8)
    ax.set_title(f"two-drive reflection, port {port}")
    ax.set_xlabel(f"(f - {f0/1e9:.3f} GHz) [kHz]")
    ax.set_ylabel(f"|S{port}{port}|^2")

# ---- conversion spectrum vs signal detuning
span = 8.0 * state.total_linewidth
delta = np.linspace(-span / 2.0, span / 2.0, 2001)
conv = conversion_spectrum(cfg.resonators, cfg.mech, state, delta)
write_power_spectrum(os.path.join(OUT, "conversion.csv"), conv.freq, conv.power)
peak = conv.power.max()
ax = axes[0, 2]
ax.plot(conv.freq / 1e3, conv.power, lw=1.0)
ax.set_title("conversion |S21|^2 vs signal detuning")
ax.set_xlabel("detuning [kHz]")
ax.set_ylabel("|S21|^2")
ax.axhline(peak, color="C2", ls="--", lw=0.7, label=f"peak = {peak:.3f}")
ax.legend(loc="upper right", fontsize=8)

# zoomed mechanical feature of window 1 for reference
res = cfg.resonators[0]
f_feat = angular_to_hz(cfg.drives[0].drive_frequency(res, cfg.mech)
                       + cfg.mech.omega_m)
freq = np.linspace(f_feat - 20e3, f_feat + 20e3, 4001)
spec, _ = synthesize_spectrum(cfg, "two-mode-eit", freq, port=1)
ax = axes[1, 2]
ax.plot((spec.freq - f_feat) / 1e3, spec.power, lw=0.8)
ax.set_title("port-1 mechanical feature (zoom)")
ax.set_xlabel("(f - feature) [kHz]")
ax.set_ylabel("|S11|^2")

fig.tight_layout()
fig.savefig(os.path.join(OUT, "scattering_responses.png"), dpi=130)
print(f"peak conversion efficiency: {peak:.3f} (outputs in {OUT})")
