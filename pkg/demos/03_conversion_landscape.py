"""The conversion landscape over both cooperativities.

Reproduces the device's scattering-parameter landscape: density maps of
|S11|^2, |S22|^2 and |T|^2 over (C1, C2), anti-diagonal cuts at constant
product C1*C2 showing the matching condition, and the efficiency band set
by the uncertainty in the waveguide couplings.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from emconv import conversion_efficiency, reflection_on_resonance
from emconv.harness import SweepAxis, SweepSpec, preset, run_cooperativity_grid

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = preset("fink2018")
eta = cfg.eta()

# ---- density maps over a log-spaced cooperativity grid
c_axis = np.geomspace(0.3, 300.0, 61)
spec = SweepSpec(axes=(SweepAxis("c1", c_axis), SweepAxis("c2", c_axis)))
table = run_cooperativity_grid(cfg, spec)
table.write(os.path.join(OUT, "grid.csv"))

n = c_axis.size
maps = {name: table.column(name).reshape(n, n)
        for name in ("s11", "s22", "t2")}
fig, axes = plt.subplots(1, 3, figsize=(13, 3.6), sharey=True)
for ax, (name, data) in zip(axes, maps.items()):
    pm = ax.pcolormesh(c_axis, c_axis, data.T, shading="nearest",
                       cmap="RdBu_r", vmin=0.0, vmax=1.0)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("C1")
    ax.set_title(f"|{name.upper()}|^2" if name != "t2" else "|T|^2")
    fig.colorbar(pm, ax=ax)
axes[0].set_ylabel("C2")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "grid_maps.png"), dpi=130)

# ---- matching condition: cuts at constant product C1*C2
fig, ax = plt.subplots(figsize=(6, 4))
for product in (60.0, 660.0, 6000.0):
    ratio = np.geomspace(1e-3, 1e3, 301)
    c1 = np.sqrt(product * ratio)
    t2 = [conversion_efficiency((c, product / c), eta) for c in c1]
    ax.semilogx(ratio, t2, label=f"C1*C2 = {product:g}")
    best = ratio[int(np.argmax(t2))]
    print(f"product {product:7g}: best C1/C2 = {best:.3f} "
          f"(matched peak {max(t2):.3f})")
ax.axvline(1.0, color="k", lw=0.6, ls=":")
ax.set_xlabel("C1 / C2")
ax.set_ylabel("|T|^2")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "matching_condition.png"), dpi=130)

# ---- efficiency band from the waveguide-coupling uncertainty
c = np.geomspace(0.5, 300.0, 200)
t2_nom = [conversion_efficiency((ci, ci), eta) for ci in c]
t2_low = [conversion_efficiency((ci, ci), (0.85, 0.64)) for ci in c]
t2_high = [conversion_efficiency((ci, ci), (0.92, 0.68)) for ci in c]
r1 = [reflection_on_resonance(ci, ci, eta[0]) for ci in c]
fig, ax = plt.subplots(figsize=(6, 4))
ax.fill_between(c, t2_low, t2_high, alpha=0.3, label="eta uncertainty band")
ax.semilogx(c, t2_nom, label="|T|^2, matched")
ax.semilogx(c, r1, "--", label="|S11|^2, matched")
ax.set_xlabel("matched cooperativity C")
ax.set_ylabel("power ratio")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "efficiency_band.png"), dpi=130)
print(f"saturation efficiency eta1*eta2 = {eta[0]*eta[1]:.3f} "
      f"(outputs in {OUT})")
